#pragma once

#include <cstddef>
#include <string>

#include "szilard/spectral.hpp"

namespace szilard::thermo {

enum class PartitionMethod { exact_series, theta_approx, high_temperature, from_spectrum };

std::string to_string(PartitionMethod method);

struct PartitionResult {
  double Z = 0.0;
  PartitionMethod method = PartitionMethod::exact_series;
  std::size_t terms_used = 0;
  double est_error = 0.0;  // relative
  // False when an approximation is used outside the regime it was built for.
  bool regime_ok = true;
};

/// Levels E_n = unit_energy * n^2, n = 1, 2, ...: a hard-wall box.
struct QuadraticTower {
  double unit_energy = 0.0;
};

inline constexpr double kDefaultSeriesTolerance = 1e-12;

/// Sum over a listed spectrum. For truncated listings the remainder is
/// bounded by continuing the last level quadratically; the result fails if
/// that bound exceeds rel_tol.
PartitionResult partition_exact(const spectral::Spectrum& levels, double beta,
                                double rel_tol = kDefaultSeriesTolerance);
PartitionResult partition_exact(const QuadraticTower& tower, double beta, double rel_tol = kDefaultSeriesTolerance);
/// Box of width L at the temperature carried by params.
PartitionResult partition_exact(const PhysicalParams& params);

/// Z = (sqrt(pi / |ln sigma|) - 1) / 2, adequate for 1/2 < sigma < 1.
PartitionResult partition_theta(double sigma);

/// Z = sqrt(pi / (eps beta)) / 2 = L / lambda_th.
PartitionResult partition_highT(const PhysicalParams& params);

/// Z = Lx Ly Lz / lambda_th^3.
PartitionResult partition_3d(double Lx, double Ly, double Lz, const PhysicalParams& params);

struct ThermalAverages {
  double Z = 0.0;
  double mean_energy = 0.0;
  double entropy = 0.0;  // units of k_B
  double est_error = 0.0;
};

ThermalAverages thermal_averages(const spectral::Spectrum& levels, double beta,
                                 double rel_tol = kDefaultSeriesTolerance);
ThermalAverages thermal_averages(const QuadraticTower& tower, double beta, double rel_tol = kDefaultSeriesTolerance);

/// S = k_B (ln Z + beta <E>).
double thermo_entropy(const spectral::Spectrum& levels, double beta, double k_B = 1.0);
double thermo_entropy(const QuadraticTower& tower, double beta, double k_B = 1.0);
/// Entropy of the high-temperature gas: k_B (ln(L / lambda_th) + 1/2).
double thermo_entropy_highT(const PhysicalParams& params);

enum class Stage { free, inserted, measured_left, measured_right, expanded };

std::string to_string(Stage stage);
Stage stage_from_string(const std::string& label);

/// One row of the free-energy ledger. A = -k_B T ln Z and
/// S = (E - A) / T hold by construction.
struct StageLedger {
  Stage stage = Stage::free;
  double Z = 0.0;
  double A = 0.0;
  double E_int = 0.0;
  double S_thermo = 0.0;
  double T = 0.0;

  static StageLedger from_partition(Stage stage, double Z, double E_int, double T, double k_B = 1.0);

  bool operator==(const StageLedger&) const = default;
};

struct StageFreeEnergies {
  double A = 0.0;        // before insertion
  double A_tilde = 0.0;  // partition inserted
  double A_L = 0.0;      // molecule known to be on one side

  double insertion_shift() const { return A_tilde - A; }
  double measurement_jump() const { return A_L - A_tilde; }
};

/// High-temperature closed forms for the three stages.
StageFreeEnergies stage_free_energies(const PhysicalParams& params);

/// Work done by the one-molecule gas, integral of k_B T / v dv, cross-checked
/// against k_B T ln(v_final / v_initial).
double isothermal_work(double v_initial, double v_final, double temperature, double k_B = 1.0);

}  // namespace szilard::thermo
