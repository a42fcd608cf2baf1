#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "szilard/demon.hpp"
#include "szilard/thermo.hpp"

namespace szilard::engine {

enum class Protocol { isothermal, stepwise, single_adiabatic };

std::string to_string(Protocol protocol);
/// Accepts "isothermal", "stepwise", "single-adiabatic" and "adiabatic".
Protocol protocol_from_string(const std::string& name);

struct CycleConfig {
  PhysicalParams params;
  int N = 0;  // pairs per side; 0 picks the smallest N with N^2 eps beta >= 20
  Protocol protocol = Protocol::isothermal;
  int n_steps = 1;  // stepwise only
  std::uint64_t seed = 0;
  std::size_t grid = 4096;
  bool numeric = true;     // cross-check the isothermal work on numerical spectra
  bool coherent = false;   // keep the L-R coherences of the inserted state
  double demon_delta = 1.0;

  void validate() const;
  int resolved_N() const;

  bool operator==(const CycleConfig&) const = default;
};

struct StageRow {
  std::string label;
  thermo::StageLedger gas;
  double dA = 0.0;  // change from the previous row

  bool operator==(const StageRow&) const = default;
};

struct MeasurementSummary {
  std::string outcome;  // "L" or "R"
  double p_left = 0.5;
  double dS_gas = 0.0;
  double dS_demon = 0.0;
  double dS_joint = 0.0;
  double dI_mu = 0.0;
  double balance_residual = 0.0;
  double gas_marginal_shift = 0.0;
  double correlation_distance = 0.0;   // post state vs product of its marginals
  double reversal_distance = 0.0;      // reversing the correlated state
  double product_reversal_distance = 0.0;  // reversing the decorrelated state
  long joint_dim = 0;

  bool operator==(const MeasurementSummary&) const = default;
};

struct NumericCheck {
  std::size_t grid = 0;
  int levels_double = 0;
  int levels_half = 0;
  double A_tilde = 0.0;
  double A_L = 0.0;
  double W = 0.0;  // A_L - A_tilde
  double relative_error = 0.0;  // against k_B T ln 2

  bool operator==(const NumericCheck&) const = default;
};

/// A quoted figure that the computation does not reproduce.
struct Discrepancy {
  double quoted = 0.0;
  double computed = 0.0;
  std::string note;

  bool operator==(const Discrepancy&) const = default;
};

struct CycleReport {
  CycleConfig config;
  int N = 0;
  double kT = 0.0;
  std::vector<StageRow> stages;
  double W_extracted = 0.0;
  double W_quantum = 0.0;  // same protocol with exact level populations
  double Q_from_reservoir = 0.0;
  double S_to_environment = 0.0;
  double erasure_cost = 0.0;
  double net_balance = 0.0;
  bool second_law_ok = false;
  double ledger_sum_dA = 0.0;
  double closure_distance = 0.0;
  MeasurementSummary measurement;
  std::optional<NumericCheck> numeric;
  std::optional<Discrepancy> discrepancy;

  double A_tilde_minus_A() const;
  double A_L_minus_A_tilde() const;

  bool operator==(const CycleReport&) const = default;
};

/// Closed forms: k_B T ln 2, n (k_B T / 2)(1 - 2^(-2/n)), 3 k_B T / 8.
double extraction_work(Protocol protocol, int n_steps, const PhysicalParams& params);

enum class ExtractionModel {
  equipartition,  // <E> = k_B T / 2 after each reheat
  quantum,        // exact thermal populations of the well, carried adiabatically
};

struct ExtractionLedger {
  double W = 0.0;
  double Q = 0.0;  // heat drawn during reheats
  std::vector<double> step_work;
};

/// Expansion of one well, width (L - d)/2 -> L - d, step by step.
ExtractionLedger simulate_extraction(Protocol protocol, int n_steps, const PhysicalParams& params,
                                     ExtractionModel model);

CycleReport run_cycle(const CycleConfig& config);

enum class SweepAxis { T, U, d, N, grid, n_steps };

std::string to_string(SweepAxis axis);
SweepAxis axis_from_string(const std::string& name);

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  std::optional<CycleReport> report;
  std::string error;  // empty when the row ran
};

/// Seed of row `index` derived from the master seed (splitmix64).
std::uint64_t row_seed(std::uint64_t master, std::size_t index);

/// One independent cycle per value. Sweeping n_steps implies the stepwise
/// protocol. Failures are recorded in the row and the sweep continues.
std::vector<SweepRow> sweep(const CycleConfig& base, SweepAxis axis, const std::vector<double>& values);

}  // namespace szilard::engine
