#include "szilard/thermo.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "szilard/error.hpp"
#include "szilard/numerics.hpp"

namespace szilard::thermo {

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive and finite");
}

// Shifted sums relative to the ground level: Z = exp(-beta E_0) * weight_sum.
struct ShiftedSums {
  double ground = 0.0;
  double weight_sum = 0.0;
  double energy_sum = 0.0;  // sum of (E - ground) * weight
  double est_error = 0.0;
  std::size_t terms = 0;
};

ShiftedSums spectrum_sums(const spectral::Spectrum& levels, double beta, double rel_tol) {
  require_beta(beta);
  if (levels.levels.empty()) throw ValidationError("empty spectrum");
  ShiftedSums s;
  s.ground = levels.levels.front().energy;
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& level : levels.levels) {
    if (level.energy < prev) throw ValidationError("spectrum levels must be ascending");
    prev = level.energy;
    const double w = std::exp(-beta * (level.energy - s.ground));
    s.weight_sum += w;
    s.energy_sum += (level.energy - s.ground) * w;
  }
  s.terms = levels.levels.size();
  if (levels.truncated) {
    // Continue the listing as a quadratic tower through its last level.
    const double M = static_cast<double>(levels.levels.size());
    const double top = levels.levels.back().energy;
    if (!(top > 0.0)) throw ComputationError("cannot bound the tail of a truncated spectrum with E_max <= 0");
    const double unit = top / (M * M);
    const double a = beta * unit;
    // Tail terms are relative to exp(-beta * ground); combine in logs so
    // cold spectra do not overflow.
    const auto relative = [&](double tail, double denom) {
      if (tail == 0.0 || !(denom > 0.0)) return 0.0;
      return std::exp(std::log(tail) + beta * s.ground - std::log(denom));
    };
    const double z_rel = relative(numerics::gaussian_tail_bound(a, M + 1.0), s.weight_sum);
    const double e_rel = relative(unit * numerics::gaussian_moment_tail_bound(a, M + 1.0), s.energy_sum);
    s.est_error = std::max(z_rel, e_rel);
    if (!(s.est_error <= rel_tol)) {
      throw ComputationError("truncated spectrum too short: tail bound " + std::to_string(s.est_error) +
                             " exceeds tolerance; add levels");
    }
  }
  return s;
}

struct TowerSums {
  double Z = 0.0;
  double moment = 0.0;  // sum n^2 exp(-a n^2)
  double est_error = 0.0;
  std::size_t terms = 0;
};

TowerSums tower_sums(const QuadraticTower& tower, double beta, double rel_tol, bool with_moment) {
  require_beta(beta);
  if (!(tower.unit_energy > 0.0)) throw ValidationError("tower unit energy must be positive");
  const double a = beta * tower.unit_energy;
  TowerSums out;
  const auto z = numerics::sum_series(
      [a](std::size_t i) { const double n = double(i + 1); return std::exp(-a * n * n); },
      [a](std::size_t used) { return numerics::gaussian_tail_bound(a, double(used + 1)); }, rel_tol);
  out.Z = z.sum;
  out.terms = z.terms_used;
  out.est_error = numerics::gaussian_tail_bound(a, double(z.terms_used + 1)) / z.sum;
  if (with_moment) {
    const auto m = numerics::sum_series(
        [a](std::size_t i) { const double n = double(i + 1); return n * n * std::exp(-a * n * n); },
        [a](std::size_t used) { return numerics::gaussian_moment_tail_bound(a, double(used + 1)); }, rel_tol);
    out.moment = m.sum;
    out.terms = std::max(out.terms, m.terms_used);
    out.est_error =
        std::max(out.est_error, numerics::gaussian_moment_tail_bound(a, double(m.terms_used + 1)) / m.sum);
  }
  return out;
}

}  // namespace

std::string to_string(PartitionMethod method) {
  switch (method) {
    case PartitionMethod::exact_series: return "exact-series";
    case PartitionMethod::theta_approx: return "theta-approx";
    case PartitionMethod::high_temperature: return "high-T";
    case PartitionMethod::from_spectrum: return "from-spectrum";
  }
  return "unknown";
}

PartitionResult partition_exact(const spectral::Spectrum& levels, double beta, double rel_tol) {
  const auto s = spectrum_sums(levels, beta, rel_tol);
  return {std::exp(-beta * s.ground) * s.weight_sum, PartitionMethod::from_spectrum, s.terms, s.est_error, true};
}

PartitionResult partition_exact(const QuadraticTower& tower, double beta, double rel_tol) {
  const auto s = tower_sums(tower, beta, rel_tol, false);
  return {s.Z, PartitionMethod::exact_series, s.terms, s.est_error, true};
}

PartitionResult partition_exact(const PhysicalParams& params) {
  params.validate();
  return partition_exact(QuadraticTower{params.epsilon()}, params.beta());
}

PartitionResult partition_theta(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ValidationError("theta approximation needs 0 < sigma < 1");
  const double a = std::abs(std::log(sigma));
  PartitionResult r;
  r.Z = 0.5 * (std::sqrt(std::numbers::pi / a) - 1.0);
  r.method = PartitionMethod::theta_approx;
  r.regime_ok = sigma > 0.5;
  const auto exact = tower_sums(QuadraticTower{1.0}, a, kDefaultSeriesTolerance, false);
  r.terms_used = exact.terms;
  r.est_error = std::abs(r.Z - exact.Z) / exact.Z;
  return r;
}

PartitionResult partition_highT(const PhysicalParams& params) {
  params.validate();
  const double eb = params.epsilon() * params.beta();
  PartitionResult r;
  r.Z = 0.5 * std::sqrt(std::numbers::pi / eb);
  r.method = PartitionMethod::high_temperature;
  r.regime_ok = eb <= 0.1;
  // Leading correction of the exact sum is -1/2.
  r.est_error = 0.5 / std::abs(r.Z - 0.5);
  return r;
}

PartitionResult partition_3d(double Lx, double Ly, double Lz, const PhysicalParams& params) {
  params.validate();
  if (!(Lx > 0.0 && Ly > 0.0 && Lz > 0.0)) throw ValidationError("box edges must be positive");
  const double lambda = params.thermal_wavelength();
  PartitionResult r;
  r.Z = (Lx / lambda) * (Ly / lambda) * (Lz / lambda);
  r.method = PartitionMethod::high_temperature;
  const double shortest = std::min({Lx, Ly, Lz});
  const double eb = params.beta() * std::numbers::pi * std::numbers::pi * params.hbar * params.hbar /
                    (2.0 * params.mass * shortest * shortest);
  r.regime_ok = eb <= 0.1;
  return r;
}

ThermalAverages thermal_averages(const spectral::Spectrum& levels, double beta, double rel_tol) {
  const auto s = spectrum_sums(levels, beta, rel_tol);
  ThermalAverages out;
  out.Z = std::exp(-beta * s.ground) * s.weight_sum;
  const double excess = s.energy_sum / s.weight_sum;
  out.mean_energy = s.ground + excess;
  out.entropy = std::log(s.weight_sum) + beta * excess;
  out.est_error = s.est_error;
  return out;
}

ThermalAverages thermal_averages(const QuadraticTower& tower, double beta, double rel_tol) {
  const auto s = tower_sums(tower, beta, rel_tol, true);
  ThermalAverages out;
  out.Z = s.Z;
  out.mean_energy = tower.unit_energy * s.moment / s.Z;
  out.entropy = std::log(s.Z) + beta * out.mean_energy;
  out.est_error = s.est_error;
  return out;
}

double thermo_entropy(const spectral::Spectrum& levels, double beta, double k_B) {
  return k_B * thermal_averages(levels, beta).entropy;
}

double thermo_entropy(const QuadraticTower& tower, double beta, double k_B) {
  return k_B * thermal_averages(tower, beta).entropy;
}

double thermo_entropy_highT(const PhysicalParams& params) {
  return params.k_B * (std::log(partition_highT(params).Z) + 0.5);
}

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::free: return "free";
    case Stage::inserted: return "inserted";
    case Stage::measured_left: return "measured-L";
    case Stage::measured_right: return "measured-R";
    case Stage::expanded: return "expanded";
  }
  return "unknown";
}

Stage stage_from_string(const std::string& label) {
  for (Stage s : {Stage::free, Stage::inserted, Stage::measured_left, Stage::measured_right, Stage::expanded}) {
    if (to_string(s) == label) return s;
  }
  throw ValidationError("unknown stage label: " + label);
}

StageLedger StageLedger::from_partition(Stage stage, double Z, double E_int, double T, double k_B) {
  if (!(Z > 0.0)) throw ValidationError("partition function must be positive");
  if (!(T > 0.0)) throw ValidationError("temperature must be positive");
  StageLedger row;
  row.stage = stage;
  row.Z = Z;
  row.T = T;
  row.A = -k_B * T * std::log(Z);
  row.E_int = E_int;
  row.S_thermo = (E_int - row.A) / T;
  return row;
}

StageFreeEnergies stage_free_energies(const PhysicalParams& params) {
  params.validate();
  const double lambda = params.thermal_wavelength();
  const double kT = params.kT();
  StageFreeEnergies out;
  out.A = -kT * std::log(params.L / lambda);
  out.A_tilde = -kT * std::log((params.L - params.d) / lambda);
  out.A_L = -kT * std::log(0.5 * (params.L - params.d) / lambda);
  return out;
}

double isothermal_work(double v_initial, double v_final, double temperature, double k_B) {
  if (!(v_initial > 0.0 && v_final > 0.0)) throw ValidationError("volumes must be positive");
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  const double kT = k_B * temperature;
  const double closed = kT * std::log(v_final / v_initial);
  const double quad = numerics::integrate([kT](double v) { return kT / v; }, v_initial, v_final, 1e-12);
  if (std::abs(quad - closed) > 1e-9 * std::max(std::abs(closed), 1e-300)) {
    throw ComputationError("isothermal work quadrature disagrees with the closed form");
  }
  return quad;
}

}  // namespace szilard::thermo
