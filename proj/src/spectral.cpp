#include "szilard/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "szilard/error.hpp"

namespace szilard {

using numerics::Grid;
using numerics::TridiagonalSymmetric;

void PhysicalParams::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be strictly positive");
  };
  positive(hbar, "hbar");
  positive(mass, "mass");
  positive(k_B, "k_B");
  positive(L, "L");
  positive(U, "U");
  positive(T, "T");
  if (!(d >= 0.0) || !std::isfinite(d)) throw ValidationError("d must be non-negative");
  if (!(d < L)) throw ValidationError("partition width must satisfy d < L");
}

double PhysicalParams::epsilon() const {
  return std::numbers::pi * std::numbers::pi * hbar * hbar / (2.0 * mass * L * L);
}

double PhysicalParams::epsilon_prime() const { return epsilon() * L * L / ((L - d) * (L - d)); }

double PhysicalParams::sigma() const { return std::exp(-beta() * epsilon()); }

double PhysicalParams::thermal_wavelength() const {
  return std::sqrt(2.0 * std::numbers::pi * hbar * hbar * beta() / mass);
}

namespace spectral {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

enum class Sector { even, odd, dirichlet_center };

// Restriction of a mirror-symmetric Hamiltonian to one parity sector, or to
// the left half with a hard wall at the center.
TridiagonalSymmetric sector_matrix(const TridiagonalSymmetric& h, Sector sector) {
  const std::size_t n = h.size();
  const auto& d = h.diagonal();
  const auto& e = h.off_diagonal();
  if (n % 2 == 0) {
    const std::size_t m = n / 2;
    std::vector<double> diag(d.begin(), d.begin() + m);
    std::vector<double> off(e.begin(), e.begin() + (m - 1));
    if (sector == Sector::even) diag[m - 1] += e[m - 1];
    if (sector == Sector::odd) diag[m - 1] -= e[m - 1];
    return TridiagonalSymmetric(std::move(diag), std::move(off));
  }
  const std::size_t m = (n - 1) / 2;  // index of the center point
  if (sector == Sector::even) {
    std::vector<double> diag(d.begin(), d.begin() + m + 1);
    std::vector<double> off(e.begin(), e.begin() + m);
    off[m - 1] *= std::numbers::sqrt2;
    return TridiagonalSymmetric(std::move(diag), std::move(off));
  }
  std::vector<double> diag(d.begin(), d.begin() + m);
  std::vector<double> off(e.begin(), e.begin() + (m - 1));
  return TridiagonalSymmetric(std::move(diag), std::move(off));
}

std::vector<double> expand_sector(const std::vector<double>& v, std::size_t n, Sector sector) {
  std::vector<double> full(n, 0.0);
  const std::size_t m = n / 2;
  if (sector == Sector::dirichlet_center) {
    std::copy(v.begin(), v.end(), full.begin());
    return full;
  }
  const double sign = sector == Sector::even ? 1.0 : -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    full[i] = v[i] * kInvSqrt2;
    full[n - 1 - i] = sign * v[i] * kInvSqrt2;
  }
  if (n % 2 == 1 && sector == Sector::even) full[m] = v[m];
  return full;
}

void check_params(const PhysicalParams& params, const Grid& grid) {
  params.validate();
  const double half = 0.5 * params.L;
  if (std::abs(grid.x_min() + half) > 1e-12 * params.L || std::abs(grid.x_max() - half) > 1e-12 * params.L) {
    throw ValidationError("grid must span the box (-L/2, L/2)");
  }
}

struct SectorSolution {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // full-grid, empty unless requested
};

SectorSolution solve_sector(const TridiagonalSymmetric& h, Sector sector, std::size_t count, bool with_vectors) {
  const auto block = sector_matrix(h, sector);
  if (count > block.size()) {
    throw ValidationError("requested more levels than the grid supports (" + std::to_string(block.size()) +
                          " per sector)");
  }
  SectorSolution out;
  if (count == 0) return out;
  if (!with_vectors) {
    out.values = numerics::eigenvalues_tridiagonal(block, count);
    return out;
  }
  for (auto& pair : numerics::eig_tridiagonal(block, count)) {
    out.values.push_back(pair.value);
    out.vectors.push_back(expand_sector(pair.vector, h.size(), sector));
  }
  return out;
}

Spectrum parity_spectrum(const TridiagonalSymmetric& h, const Grid& grid, int n_levels, bool with_vectors) {
  if (n_levels < 1) throw ValidationError("n_levels must be at least 1");
  // Parities alternate in a symmetric 1D well: the ground state is even.
  const auto n_even = static_cast<std::size_t>((n_levels + 1) / 2);
  const auto n_odd = static_cast<std::size_t>(n_levels / 2);
  const auto even = solve_sector(h, Sector::even, n_even, with_vectors);
  const auto odd = solve_sector(h, Sector::odd, n_odd, with_vectors);

  Spectrum s;
  s.grid = grid;
  for (int j = 0; j < n_levels; ++j) {
    const bool is_even = j % 2 == 0;
    const auto idx = static_cast<std::size_t>(j / 2);
    const auto& sector = is_even ? even : odd;
    Level level{j + 1, sector.values[idx], {}, is_even ? Parity::even : Parity::odd};
    if (with_vectors) level.vector = sector.vectors[idx];
    s.levels.push_back(std::move(level));
  }
  // Deep barriers leave doublets degenerate to rounding; order them.
  const double tol = 64.0 * std::numeric_limits<double>::epsilon() * h.scale();
  for (std::size_t j = 1; j < s.levels.size(); ++j) {
    if (s.levels[j].energy < s.levels[j - 1].energy && s.levels[j - 1].energy - s.levels[j].energy <= tol) {
      s.levels[j].energy = s.levels[j - 1].energy;
    }
    if (!(s.levels[j].energy >= s.levels[j - 1].energy)) {
      throw ComputationError("parity sectors did not interleave at level " + std::to_string(j + 1));
    }
  }
  return s;
}

}  // namespace

std::vector<double> Spectrum::energies() const {
  std::vector<double> out;
  out.reserve(levels.size());
  for (const auto& l : levels) out.push_back(l.energy);
  return out;
}

double Spectrum::max_energy() const { return levels.empty() ? 0.0 : levels.back().energy; }

Grid box_grid(const PhysicalParams& params, std::size_t n_points) {
  return Grid(n_points, -0.5 * params.L, 0.5 * params.L);
}

Spectrum box_levels(const PhysicalParams& params, int n_max) {
  params.validate();
  if (n_max < 1) throw ValidationError("n_max must be at least 1");
  Spectrum s;
  const double eps = params.epsilon();
  for (int n = 1; n <= n_max; ++n) {
    s.levels.push_back({n, eps * n * n, {}, n % 2 == 1 ? Parity::even : Parity::odd});
  }
  return s;
}

double box_eigenfunction(const PhysicalParams& params, int n, double x) {
  if (std::abs(x) >= 0.5 * params.L) return 0.0;
  const double amp = std::sqrt(2.0 / params.L);
  const double arg = n * std::numbers::pi * x / params.L;
  return n % 2 == 1 ? amp * std::cos(arg) : amp * std::sin(arg);
}

std::vector<double> barrier_potential(const PhysicalParams& params, const Grid& grid) {
  std::vector<double> v(grid.size(), 0.0);
  const double h = grid.spacing();
  const double half = 0.5 * params.d;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lo = std::max(grid.x(i) - 0.5 * h, -half);
    const double hi = std::min(grid.x(i) + 0.5 * h, half);
    if (hi > lo) v[i] = params.U * (hi - lo) / h;
  }
  return v;
}

TridiagonalSymmetric hamiltonian(const PhysicalParams& params, const Grid& grid, const std::vector<double>& potential) {
  if (potential.size() != grid.size()) throw ValidationError("potential and grid sizes differ");
  const double h = grid.spacing();
  const double kinetic = params.hbar * params.hbar / (params.mass * h * h);
  std::vector<double> diag(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) diag[i] = kinetic + potential[i];
  return TridiagonalSymmetric(std::move(diag), std::vector<double>(grid.size() - 1, -0.5 * kinetic));
}

Spectrum barrier_levels(const PhysicalParams& params, int n_levels, const Grid& grid, bool with_vectors) {
  check_params(params, grid);
  const auto h = hamiltonian(params, grid, barrier_potential(params, grid));
  return parity_spectrum(h, grid, n_levels, with_vectors);
}

Spectrum free_box_levels(const PhysicalParams& params, int n_levels, const Grid& grid) {
  check_params(params, grid);
  const auto h = hamiltonian(params, grid, std::vector<double>(grid.size(), 0.0));
  return parity_spectrum(h, grid, n_levels, false);
}

Spectrum half_well_levels(const PhysicalParams& params, int n_levels, const Grid& grid, bool with_vectors) {
  check_params(params, grid);
  if (n_levels < 1) throw ValidationError("n_levels must be at least 1");
  const auto h = hamiltonian(params, grid, barrier_potential(params, grid));
  const auto sol = solve_sector(h, Sector::dirichlet_center, static_cast<std::size_t>(n_levels), with_vectors);
  Spectrum s;
  s.grid = grid;
  for (int j = 0; j < n_levels; ++j) {
    Level level{j + 1, sol.values[static_cast<std::size_t>(j)], {}, Parity::none};
    if (with_vectors) level.vector = sol.vectors[static_cast<std::size_t>(j)];
    s.levels.push_back(std::move(level));
  }
  return s;
}

std::vector<SplitPair> barrier_spectrum(const PhysicalParams& params, int n_pairs, const Grid& grid) {
  check_params(params, grid);
  if (n_pairs < 1) throw ValidationError("n_pairs must be at least 1");
  if (!(params.d > 0.0)) throw ValidationError("barrier spectrum needs a partition of positive width");
  if (params.d / grid.spacing() < 16.0) {
    throw ValidationError("grid too coarse: fewer than 16 points across the partition");
  }
  const auto h = hamiltonian(params, grid, barrier_potential(params, grid));
  const auto count = static_cast<std::size_t>(n_pairs) + 1;
  const auto even = solve_sector(h, Sector::even, count, true);
  const auto odd = solve_sector(h, Sector::odd, count, true);

  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * h.scale();
  std::vector<SplitPair> pairs;
  for (std::size_t k = 0; k < static_cast<std::size_t>(n_pairs); ++k) {
    double delta = 0.5 * (odd.values[k] - even.values[k]);
    if (delta < 0.0) {
      if (-delta > rounding) {
        throw NoPairStructure("no pair structure: antisymmetric level below symmetric one at k = " +
                              std::to_string(k + 1));
      }
      delta = 0.0;
    }
    const double mean = 0.5 * (odd.values[k] + even.values[k]);
    const double next_mean = 0.5 * (odd.values[k + 1] + even.values[k + 1]);
    if (!(8.0 * delta < next_mean - mean)) {
      throw NoPairStructure("no pair structure: doublets overlap at k = " + std::to_string(k + 1) +
                            " (raise U or lower the pair count)");
    }

    SplitPair pair{static_cast<int>(k + 1), mean, delta, odd.vectors[k], even.vectors[k]};
    // Symmetric member positive at the leftmost grid point; antisymmetric
    // member aligned with it on the left half.
    if (pair.psi_minus.front() < 0.0) {
      for (auto& x : pair.psi_minus) x = -x;
    }
    double overlap = 0.0;
    for (std::size_t i = 0; i < pair.psi_minus.size() / 2; ++i) overlap += pair.psi_minus[i] * pair.psi_plus[i];
    if (overlap < 0.0) {
      for (auto& x : pair.psi_plus) x = -x;
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

double splitting_estimate(const PhysicalParams& params, int k) {
  params.validate();
  if (k < 1) throw ValidationError("pair index k must be at least 1");
  const double eps_prime = params.epsilon_prime();
  const double E_k = eps_prime * 4.0 * k * k;
  if (!(params.U > E_k)) {
    throw ValidationError("above-barrier pair: U <= E_k = " + std::to_string(E_k) + ", tunneling estimate invalid");
  }
  const double kappa = std::sqrt(2.0 * params.mass * (params.U - E_k)) / params.hbar;
  return 4.0 * eps_prime / std::numbers::pi * std::exp(-params.d * kappa);
}

std::vector<double> mirror(const std::vector<double>& v) { return {v.rbegin(), v.rend()}; }

double left_weight(const std::vector<double>& v) {
  const std::size_t m = v.size() / 2;
  double w = 0.0;
  for (std::size_t i = 0; i < m; ++i) w += v[i] * v[i];
  if (v.size() % 2 == 1) w += 0.5 * v[m] * v[m];
  return w;
}

LocalizedPair localized_basis(const SplitPair& pair) {
  if (!pair.has_vectors() || pair.psi_plus.size() != pair.psi_minus.size()) {
    throw ValidationError("localized basis needs both doublet eigenvectors");
  }
  double overlap = 0.0;
  for (std::size_t i = 0; i < pair.psi_minus.size() / 2; ++i) overlap += pair.psi_minus[i] * pair.psi_plus[i];
  // The ideal value is 1/2; anything near zero means the doublet members do
  // not share a shape on the left, so the sign convention cannot be applied.
  if (!(overlap > 0.25)) {
    throw ComputationError("sign convention unresolved for pair k = " + std::to_string(pair.k));
  }
  LocalizedPair out;
  out.left.resize(pair.psi_plus.size());
  out.right.resize(pair.psi_plus.size());
  for (std::size_t i = 0; i < pair.psi_plus.size(); ++i) {
    out.left[i] = (pair.psi_plus[i] + pair.psi_minus[i]) * kInvSqrt2;
    out.right[i] = (pair.psi_minus[i] - pair.psi_plus[i]) * kInvSqrt2;
  }
  return out;
}

std::vector<SplitPair> model_pairs(const PhysicalParams& params, int n_pairs, bool with_splitting) {
  params.validate();
  if (n_pairs < 1) throw ValidationError("n_pairs must be at least 1");
  std::vector<SplitPair> pairs;
  const double eps_prime = params.epsilon_prime();
  for (int k = 1; k <= n_pairs; ++k) {
    SplitPair p;
    p.k = k;
    p.E_mean = eps_prime * 4.0 * k * k;
    p.delta = with_splitting ? splitting_estimate(params, k) : 0.0;
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace spectral
}  // namespace szilard
