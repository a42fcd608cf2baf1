#include "szilard/demon.hpp"

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/KroneckerProduct>

#include "szilard/error.hpp"

namespace szilard::demon {

namespace {

constexpr double kRecoveryTol = 1e-12;

Eigen::Index half_dim(Eigen::Index gas_dim) {
  if (gas_dim < 2 || gas_dim % 2 != 0) throw ValidationError("gas dimension must be even (L and R blocks)");
  return gas_dim / 2;
}

Matrix side_projector(Eigen::Index N, bool left) {
  Matrix p = Matrix::Zero(2 * N, 2 * N);
  p.block(left ? 0 : N, left ? 0 : N, N, N).setIdentity();
  return p;
}

// [[c, s], [-s, c]]
Matrix rotation(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return r;
}

void require_joint(const DensityMatrix& P) {
  const auto& dims = P.subsystem_dims();
  if (!dims || dims->demon != 2) throw ValidationError("joint state must declare gas x demon with demon dimension 2");
  half_dim(dims->gas);
}

ReversalResult reverse_with(const MeasurementRecord& record, const DensityMatrix& state) {
  require_joint(state);
  if (state.dim() != record.pre.dim()) throw ValidationError("state does not match the measured system");
  const Matrix U = coupling_unitary(record.model, state.subsystem_dims()->gas);
  const DensityMatrix back(U.adjoint() * state.matrix() * U, state.subsystem_dims());
  ReversalResult r{back, infodyn::trace_distance(back, record.pre), infodyn::mutual_information(back), false};
  r.recovered = r.distance_to_pre <= kRecoveryTol;
  return r;
}

}  // namespace

Matrix PointerObservable::projector_left() const {
  if (N < 1) throw ValidationError("pointer observable needs N >= 1");
  return side_projector(N, true);
}

Matrix PointerObservable::projector_right() const {
  if (N < 1) throw ValidationError("pointer observable needs N >= 1");
  return side_projector(N, false);
}

Matrix PointerObservable::matrix() const { return lambda * (projector_left() - projector_right()); }

void DemonModel::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("coupling energy delta must be positive");
  if (!(hbar > 0.0)) throw ValidationError("hbar must be positive");
}

double DemonModel::dt() const {
  validate();
  return std::numbers::pi * hbar / (4.0 * delta);
}

Vector DemonModel::D_L() { return Vector::Unit(2, 0); }
Vector DemonModel::D_R() { return Vector::Unit(2, 1); }
Vector DemonModel::D0() { return (D_L() + D_R()) / std::sqrt(2.0); }

Matrix coupling_hamiltonian(const DemonModel& model, Eigen::Index gas_dim) {
  model.validate();
  const PointerObservable pi{static_cast<int>(half_dim(gas_dim)), 1.0};
  Matrix sigma_y(2, 2);
  sigma_y << 0.0, std::complex<double>(0.0, -1.0), std::complex<double>(0.0, 1.0), 0.0;
  return -model.delta * Eigen::kroneckerProduct(pi.matrix(), sigma_y).eval();
}

Matrix coupling_unitary(const DemonModel& model, Eigen::Index gas_dim) {
  model.validate();
  const Eigen::Index N = half_dim(gas_dim);
  // theta = delta dt / hbar = pi/4 for any delta.
  const double theta = model.delta * model.dt() / model.hbar;
  return Eigen::kroneckerProduct(side_projector(N, true), rotation(theta)).eval() +
         Eigen::kroneckerProduct(side_projector(N, false), rotation(-theta)).eval();
}

DensityMatrix ready_state(const DensityMatrix& gas) {
  half_dim(gas.dim());
  return infodyn::tensor_product(gas, DensityMatrix::pure(DemonModel::D0()));
}

MeasurementRecord premeasure(const DensityMatrix& P0, const DemonModel& model) {
  require_joint(P0);
  const Matrix U = coupling_unitary(model, P0.subsystem_dims()->gas);
  DensityMatrix post(U * P0.matrix() * U.adjoint(), P0.subsystem_dims());

  using infodyn::Keep;
  const auto gas_pre = infodyn::partial_trace(P0, Keep::gas);
  const auto gas_post = infodyn::partial_trace(post, Keep::gas);
  const auto dem_pre = infodyn::partial_trace(P0, Keep::demon);
  const auto dem_post = infodyn::partial_trace(post, Keep::demon);

  MeasurementRecord r{model, P0, post};
  r.S_gas_pre = infodyn::vn_entropy(gas_pre);
  r.S_gas_post = infodyn::vn_entropy(gas_post);
  r.S_demon_pre = infodyn::vn_entropy(dem_pre);
  r.S_demon_post = infodyn::vn_entropy(dem_post);
  r.S_joint_pre = infodyn::vn_entropy(P0);
  r.S_joint_post = infodyn::vn_entropy(post);
  r.I_mu_pre = r.S_gas_pre + r.S_demon_pre - r.S_joint_pre;
  r.I_mu_post = r.S_gas_post + r.S_demon_post - r.S_joint_post;
  r.gas_marginal_shift = infodyn::trace_distance(gas_pre, gas_post);
  return r;
}

ReversalResult reverse_readoff(const MeasurementRecord& record) { return reverse_with(record, record.post); }

ReversalResult reverse_readoff(const MeasurementRecord& record, const DensityMatrix& state) {
  return reverse_with(record, state);
}

DensityMatrix product_of_marginals(const DensityMatrix& P) {
  if (!P.subsystem_dims()) throw ValidationError("product of marginals needs declared subsystem dimensions");
  return infodyn::tensor_product(infodyn::partial_trace(P, infodyn::Keep::gas),
                                 infodyn::partial_trace(P, infodyn::Keep::demon));
}

ResetResult reset_demon(const DensityMatrix& demon_state, EnvironmentLedger& ledger, double T, double k_B) {
  if (demon_state.dim() != 2) throw ValidationError("demon state must be 2x2");
  if (!(T > 0.0)) throw ValidationError("temperature must be positive");
  // Outcome probabilities of the eigenbasis measurement are the eigenvalues,
  // so the record's Shannon entropy equals the von Neumann entropy.
  const double S = infodyn::vn_entropy(demon_state);
  ResetResult r{DensityMatrix::pure(DemonModel::D0()), S, k_B * T * S};
  ledger.entropy += S;
  ledger.energy_cost += r.cost;
  ledger.resets += 1;
  return r;
}

}  // namespace szilard::demon
