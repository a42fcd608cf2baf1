#pragma once

#include "szilard/infodyn.hpp"

namespace szilard::demon {

using infodyn::DensityMatrix;
using infodyn::Matrix;
using infodyn::Vector;

/// lambda (P_L - P_R) on the gas space L_1..L_N, R_1..R_N. lambda only labels
/// the outcomes.
struct PointerObservable {
  int N = 0;
  double lambda = 1.0;

  Matrix projector_left() const;
  Matrix projector_right() const;
  Matrix matrix() const;
};

/// Two-state apparatus with basis D_L = (1, 0), D_R = (0, 1).
struct DemonModel {
  double delta = 1.0;  // coupling energy
  double hbar = 1.0;

  void validate() const;
  /// Interaction time pi hbar / (4 delta).
  double dt() const;
  static Vector D_L();
  static Vector D_R();
  /// (D_L + D_R) / sqrt 2.
  static Vector D0();
};

/// H_int = -delta (P_L - P_R) (x) sigma_y.
Matrix coupling_hamiltonian(const DemonModel& model, Eigen::Index gas_dim);

/// exp(-i H_int dt / hbar) in closed form: a pi/4 rotation in the D_L/D_R
/// plane whose sense depends on the gas side.
Matrix coupling_unitary(const DemonModel& model, Eigen::Index gas_dim);

struct MeasurementRecord {
  DemonModel model;
  DensityMatrix pre;
  DensityMatrix post;
  double S_gas_pre = 0.0, S_gas_post = 0.0;
  double S_demon_pre = 0.0, S_demon_post = 0.0;
  double S_joint_pre = 0.0, S_joint_post = 0.0;
  double I_mu_pre = 0.0, I_mu_post = 0.0;
  // Trace distance between the gas marginals before and after.
  double gas_marginal_shift = 0.0;

  double dS_gas() const { return S_gas_post - S_gas_pre; }
  double dS_demon() const { return S_demon_post - S_demon_pre; }
  double dS_joint() const { return S_joint_post - S_joint_pre; }
  double dI_mu() const { return I_mu_post - I_mu_pre; }
  double balance_residual() const { return std::abs(dI_mu() - (dS_gas() + dS_demon())); }
};

/// P0 = rho (x) |D0><D0| for a gas state rho.
DensityMatrix ready_state(const DensityMatrix& gas);

/// U P0 U^dagger with the entropy and information bookkeeping.
MeasurementRecord premeasure(const DensityMatrix& P0, const DemonModel& model);

struct ReversalResult {
  DensityMatrix state;
  double distance_to_pre = 0.0;
  double mutual_information = 0.0;
  bool recovered = false;  // distance_to_pre <= 1e-12
};

/// Applies U^dagger to the record's post state.
ReversalResult reverse_readoff(const MeasurementRecord& record);
/// Applies U^dagger to another joint state and compares with the record's
/// pre state; a decorrelated state is not recovered.
ReversalResult reverse_readoff(const MeasurementRecord& record, const DensityMatrix& state);

/// rho_gas (x) rho_demon of P's own marginals.
DensityMatrix product_of_marginals(const DensityMatrix& P);

struct EnvironmentLedger {
  double entropy = 0.0;      // k_B units
  double energy_cost = 0.0;  // free energy charged for erasure
  int resets = 0;
};

struct ResetResult {
  DensityMatrix state;
  double entropy_erased = 0.0;
  double cost = 0.0;
};

/// Measures the demon in the eigenbasis of its state and rotates each outcome
/// to D0. The record's entropy goes to the environment at cost k_B T S.
ResetResult reset_demon(const DensityMatrix& demon_state, EnvironmentLedger& ledger, double T, double k_B = 1.0);

}  // namespace szilard::demon
