#include "szilard/engine.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <tuple>

#include "szilard/error.hpp"

namespace szilard::engine {

namespace {

constexpr double kSecondLawTol = 1e-9;

double well_unit(const PhysicalParams& p, double width) {
  return std::numbers::pi * std::numbers::pi * p.hbar * p.hbar / (2.0 * p.mass * width * width);
}

double mean_energy_quantum(const PhysicalParams& p, double width) {
  return thermo::thermal_averages(thermo::QuadraticTower{well_unit(p, width)}, p.beta()).mean_energy;
}

double log_z_quantum(const PhysicalParams& p, double width) {
  return std::log(thermo::partition_exact(thermo::QuadraticTower{well_unit(p, width)}, p.beta()).Z);
}

// -k_B T ln Z over numerically computed levels, adding levels until the
// tail bound is met.
std::pair<double, int> numeric_free_energy(const PhysicalParams& p, int start,
                                           const std::function<spectral::Spectrum(int)>& levels, int cap) {
  for (int n = start;; n *= 2) {
    n = std::min(n, cap);
    try {
      const auto Z = thermo::partition_exact(levels(n), p.beta());
      return {-p.kT() * std::log(Z.Z), n};
    } catch (const ValidationError&) {
      throw;
    } catch (const ComputationError& e) {
      if (n >= cap) throw ComputationError(std::string("numeric check: ") + e.what());
    }
  }
}

NumericCheck numeric_check(const CycleConfig& c) {
  const auto& p = c.params;
  const auto grid = spectral::box_grid(p, c.grid);
  const double eb = p.epsilon() * p.beta();
  const int start = static_cast<int>(std::ceil(std::sqrt(60.0 / eb))) + 8;
  const int cap = static_cast<int>(c.grid / 2);
  NumericCheck out;
  out.grid = c.grid;
  std::tie(out.A_tilde, out.levels_double) = numeric_free_energy(
      p, start, [&](int n) { return spectral::barrier_levels(p, n, grid); }, cap);
  std::tie(out.A_L, out.levels_half) = numeric_free_energy(
      p, std::max(2, start / 2), [&](int n) { return spectral::half_well_levels(p, n, grid); }, cap / 2);
  out.W = out.A_L - out.A_tilde;
  const double ideal = p.kT() * std::log(2.0);
  out.relative_error = std::abs(out.W - ideal) / ideal;
  return out;
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

thermo::StageLedger row(thermo::Stage stage, double A, const PhysicalParams& p) {
  // Closed-form stages: Z = exp(-beta A), E = k_B T / 2.
  return thermo::StageLedger::from_partition(stage, std::exp(-A / p.kT()), 0.5 * p.kT(), p.T, p.k_B);
}

MeasurementSummary measure(const CycleConfig& c, int N, std::mt19937_64& rng, demon::MeasurementRecord* keep) {
  const auto& p = c.params;
  const auto pairs = spectral::model_pairs(p, N, c.coherent);
  const auto P0 = demon::ready_state(infodyn::post_insertion_dm(pairs, p.beta()));
  auto rec = demon::premeasure(P0, demon::DemonModel{c.demon_delta, p.hbar});

  MeasurementSummary m;
  const auto demon_marginal = infodyn::partial_trace(rec.post, infodyn::Keep::demon);
  m.p_left = demon_marginal.matrix()(0, 0).real();
  m.outcome = uniform(rng) < m.p_left ? "L" : "R";
  m.dS_gas = rec.dS_gas();
  m.dS_demon = rec.dS_demon();
  m.dS_joint = rec.dS_joint();
  m.dI_mu = rec.dI_mu();
  m.balance_residual = rec.balance_residual();
  m.gas_marginal_shift = rec.gas_marginal_shift;
  const auto product = demon::product_of_marginals(rec.post);
  m.correlation_distance = infodyn::trace_distance(rec.post, product);
  m.reversal_distance = demon::reverse_readoff(rec).distance_to_pre;
  m.product_reversal_distance = demon::reverse_readoff(rec, product).distance_to_pre;
  m.joint_dim = static_cast<long>(rec.post.dim());
  *keep = std::move(rec);
  return m;
}

template <class F>
auto with_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(stage) + ": " + e.what());
  } catch (const ComputationError& e) {
    throw ComputationError(std::string(stage) + ": " + e.what());
  }
}

}  // namespace

std::string to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::isothermal: return "isothermal";
    case Protocol::stepwise: return "stepwise";
    case Protocol::single_adiabatic: return "single-adiabatic";
  }
  return "unknown";
}

Protocol protocol_from_string(const std::string& name) {
  if (name == "isothermal") return Protocol::isothermal;
  if (name == "stepwise") return Protocol::stepwise;
  if (name == "single-adiabatic" || name == "adiabatic") return Protocol::single_adiabatic;
  throw ValidationError("unknown protocol '" + name + "' (isothermal | stepwise | single-adiabatic)");
}

void CycleConfig::validate() const {
  params.validate();
  if (!(params.d > 0.0)) throw ValidationError("a cycle needs a partition: d > 0");
  if (n_steps < 1) throw ValidationError("n_steps must be at least 1");
  if (grid < 64) throw ValidationError("grid must have at least 64 points");
  if (N < 0) throw ValidationError("N must be non-negative (0 = automatic)");
  if (!(demon_delta > 0.0)) throw ValidationError("demon coupling must be positive");
  if (N > 0) infodyn::BasisLabeling::checked(N, params.epsilon() * params.beta());
}

int CycleConfig::resolved_N() const {
  return N > 0 ? N : infodyn::BasisLabeling::minimal_N(params.epsilon() * params.beta());
}

double CycleReport::A_tilde_minus_A() const { return stages.at(1).gas.A - stages.at(0).gas.A; }
double CycleReport::A_L_minus_A_tilde() const { return stages.at(2).gas.A - stages.at(1).gas.A; }

double extraction_work(Protocol protocol, int n_steps, const PhysicalParams& params) {
  params.validate();
  const double kT = params.kT();
  switch (protocol) {
    case Protocol::isothermal: return kT * std::log(2.0);
    case Protocol::stepwise: {
      if (n_steps < 1) throw ValidationError("n_steps must be at least 1");
      const double n = n_steps;
      return n * 0.5 * kT * -std::expm1(-2.0 / n * std::log(2.0));
    }
    case Protocol::single_adiabatic: return 0.375 * kT;
  }
  throw ValidationError("unknown protocol");
}

ExtractionLedger simulate_extraction(Protocol protocol, int n_steps, const PhysicalParams& params,
                                     ExtractionModel model) {
  params.validate();
  if (n_steps < 1) throw ValidationError("n_steps must be at least 1");
  const double a = 0.5 * (params.L - params.d);
  const double kT = params.kT();
  ExtractionLedger out;
  if (protocol == Protocol::isothermal) {
    out.W = model == ExtractionModel::equipartition
                ? thermo::isothermal_work(a, 2.0 * a, params.T, params.k_B)
                : kT * (log_z_quantum(params, 2.0 * a) - log_z_quantum(params, a));
    out.Q = out.W + (model == ExtractionModel::quantum
                         ? mean_energy_quantum(params, 2.0 * a) - mean_energy_quantum(params, a)
                         : 0.0);
    out.step_work.push_back(out.W);
    return out;
  }
  const int n = protocol == Protocol::single_adiabatic ? 1 : n_steps;
  const double r = std::exp2(1.0 / n);
  double width = a;
  for (int i = 0; i < n; ++i) {
    // Level populations are frozen while the width grows by r, so every
    // level energy and hence <E> scales by r^-2.
    const double E = model == ExtractionModel::equipartition ? 0.5 * kT : mean_energy_quantum(params, width);
    const double w = E * (1.0 - 1.0 / (r * r));
    out.step_work.push_back(w);
    out.W += w;
    width = i + 1 == n ? 2.0 * a : width * r;
    const double E_after = E / (r * r);
    const double E_reheat = model == ExtractionModel::equipartition ? 0.5 * kT : mean_energy_quantum(params, width);
    out.Q += E_reheat - E_after;
  }
  return out;
}

CycleReport run_cycle(const CycleConfig& config) {
  config.validate();
  const auto& p = config.params;
  CycleReport rep;
  rep.config = config;
  rep.N = config.resolved_N();
  rep.kT = p.kT();
  std::mt19937_64 rng(config.seed);

  const auto f = with_stage("insert", [&] { return thermo::stage_free_energies(p); });

  demon::MeasurementRecord record{demon::DemonModel{}, infodyn::DensityMatrix::maximally_mixed(1),
                                  infodyn::DensityMatrix::maximally_mixed(1)};
  rep.measurement = with_stage("measure", [&] { return measure(config, rep.N, rng, &record); });
  const auto measured = rep.measurement.outcome == "L" ? thermo::Stage::measured_left : thermo::Stage::measured_right;

  const auto ledger = with_stage("extract", [&] {
    return simulate_extraction(config.protocol, config.n_steps, p, ExtractionModel::equipartition);
  });
  rep.W_extracted = ledger.W;
  rep.W_quantum = with_stage("extract", [&] {
    return simulate_extraction(config.protocol, config.n_steps, p, ExtractionModel::quantum).W;
  });
  // Over the closed cycle the gas energy returns and the insertion and
  // removal work cancel, so the reservoir supplies the extracted work.
  rep.Q_from_reservoir = ledger.Q;

  demon::EnvironmentLedger env;
  const auto reset = with_stage("reset", [&] {
    return demon::reset_demon(infodyn::partial_trace(record.post, infodyn::Keep::demon), env, p.T, p.k_B);
  });
  rep.S_to_environment = env.entropy;
  rep.erasure_cost = reset.cost;
  rep.net_balance = rep.W_extracted - p.kT() * rep.S_to_environment;
  rep.second_law_ok = rep.net_balance <= kSecondLawTol;

  const std::vector<std::pair<std::string, std::pair<thermo::Stage, double>>> rows{
      {"free", {thermo::Stage::free, f.A}},
      {"inserted", {thermo::Stage::inserted, f.A_tilde}},
      {thermo::to_string(measured), {measured, f.A_L}},
      {"extracted", {thermo::Stage::expanded, f.A_tilde}},
      {"reset", {thermo::Stage::expanded, f.A_tilde}},
      {"free", {thermo::Stage::free, f.A}},
  };
  for (const auto& [label, st] : rows) {
    StageRow r{label, row(st.first, st.second, p), 0.0};
    if (!rep.stages.empty()) r.dA = r.gas.A - rep.stages.back().gas.A;
    rep.ledger_sum_dA += r.dA;
    rep.stages.push_back(r);
  }

  // The gas starts and ends in contact with the reservoir at full width.
  const auto closure = with_stage("close", [&] {
    const double eb = p.epsilon() * p.beta();
    const auto levels = spectral::box_levels(p, static_cast<int>(std::ceil(std::sqrt(40.0 / eb))) + 8);
    const auto initial = infodyn::thermal_dm(levels, p.beta());
    // Reservoir contact after barrier removal restores exact populations.
    const auto final_state = infodyn::thermal_dm(levels, p.beta());
    return infodyn::trace_distance(initial, final_state);
  });
  rep.closure_distance = closure;

  if (config.numeric) rep.numeric = with_stage("numeric", [&] { return numeric_check(config); });
  if (config.protocol == Protocol::single_adiabatic) {
    rep.discrepancy = Discrepancy{0.25, rep.W_extracted / p.kT(),
                                  "single-shot adiabatic doubling: E ~ width^-2 leaves <E>/4, so W = 3/8 kT; "
                                  "the quoted kT/4 is not reproduced"};
  }
  return rep;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::T: return "T";
    case SweepAxis::U: return "U";
    case SweepAxis::d: return "d";
    case SweepAxis::N: return "N";
    case SweepAxis::grid: return "grid";
    case SweepAxis::n_steps: return "n_steps";
  }
  return "unknown";
}

SweepAxis axis_from_string(const std::string& name) {
  for (auto a : {SweepAxis::T, SweepAxis::U, SweepAxis::d, SweepAxis::N, SweepAxis::grid, SweepAxis::n_steps}) {
    if (to_string(a) == name) return a;
  }
  if (name == "n-steps") return SweepAxis::n_steps;
  throw ValidationError("unknown sweep axis '" + name + "' (T | U | d | N | grid | n_steps)");
}

std::uint64_t row_seed(std::uint64_t master, std::size_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<SweepRow> sweep(const CycleConfig& base, SweepAxis axis, const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepRow row;
    row.value = values[i];
    row.seed = row_seed(base.seed, i);
    try {
      CycleConfig c = base;
      c.seed = row.seed;
      const double v = values[i];
      const auto integral = [&](const char* what) {
        if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) throw ValidationError(std::string(what) + " must be a whole number");
        return static_cast<long>(v);
      };
      switch (axis) {
        case SweepAxis::T: c.params.T = v; break;
        case SweepAxis::U: c.params.U = v; break;
        case SweepAxis::d: c.params.d = v; break;
        case SweepAxis::N: c.N = static_cast<int>(integral("N")); break;
        case SweepAxis::grid: c.grid = static_cast<std::size_t>(integral("grid")); break;
        case SweepAxis::n_steps:
          c.n_steps = static_cast<int>(integral("n_steps"));
          c.protocol = Protocol::stepwise;
          break;
      }
      row.report = run_cycle(c);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace szilard::engine
