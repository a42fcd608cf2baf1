#include "szilard/infodyn.hpp"

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "szilard/error.hpp"
#include "szilard/thermo.hpp"

namespace szilard::infodyn {

namespace {

constexpr double kTruncationWeight = 1e-10;

void require_pairs(const std::vector<spectral::SplitPair>& pairs, double beta) {
  if (pairs.empty()) throw ValidationError("need at least one pair");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive and finite");
  for (const auto& p : pairs) {
    if (!std::isfinite(p.E_mean) || !(p.delta >= 0.0)) throw ValidationError("pair data must be finite with delta >= 0");
  }
}

// Unnormalized diagonal and coherence weights, shifted by the lowest pair.
struct PairWeights {
  std::vector<double> diag;
  std::vector<double> coh;
  double Z = 0.0;  // sum of both sides
};

PairWeights pair_weights(const std::vector<spectral::SplitPair>& pairs, double beta) {
  require_pairs(pairs, beta);
  double ground = pairs.front().E_mean;
  for (const auto& p : pairs) ground = std::min(ground, p.E_mean);
  PairWeights w;
  for (const auto& p : pairs) {
    const double b = std::exp(-beta * (p.E_mean - ground));
    w.diag.push_back(b * std::cosh(beta * p.delta));
    w.coh.push_back(b * std::sinh(beta * p.delta));
    w.Z += 2.0 * w.diag.back();
  }
  return w;
}

Matrix pair_matrix(const std::vector<spectral::SplitPair>& pairs, double beta, bool coherent) {
  const auto w = pair_weights(pairs, beta);
  const int N = static_cast<int>(pairs.size());
  Matrix m = Matrix::Zero(2 * N, 2 * N);
  for (int k = 0; k < N; ++k) {
    m(k, k) = m(N + k, N + k) = w.diag[k] / w.Z;
    if (coherent) m(k, N + k) = m(N + k, k) = w.coh[k] / w.Z;
  }
  return m;
}

double entropy_of(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (double x : p) {
    if (x > 0.0) s -= x * std::log(x);
  }
  return s;
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix entries, std::optional<SubsystemDims> dims) : m_(std::move(entries)), dims_(dims) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) throw ValidationError("density matrix must be square and non-empty");
  if (!m_.allFinite()) throw ValidationError("density matrix has non-finite entries");
  const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) throw ValidationError("density matrix not Hermitian: deviation " + std::to_string(herm));
  const std::complex<double> tr = m_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) throw ValidationError("density matrix trace " + std::to_string(tr.real()) + " != 1");
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
  if (dims_) {
    if (dims_->gas < 1 || dims_->demon < 1 || dims_->gas * dims_->demon != m_.rows()) {
      throw ValidationError("subsystem dimensions do not factor the matrix dimension");
    }
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw ValidationError("zero state vector");
  const Vector u = psi / norm;
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  if (dim < 1) throw ValidationError("dimension must be positive");
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

BasisLabeling BasisLabeling::checked(int N, double eps_beta) {
  if (N < 1) throw ValidationError("truncation N must be at least 1");
  if (!(static_cast<double>(N) * N * eps_beta >= 20.0)) {
    throw ValidationError("truncation too small: N^2 eps beta = " + std::to_string(double(N) * N * eps_beta) +
                          " < 20");
  }
  return BasisLabeling{N};
}

int BasisLabeling::minimal_N(double eps_beta) {
  if (!(eps_beta > 0.0) || !std::isfinite(eps_beta)) throw ValidationError("eps beta must be positive");
  int N = std::max(1, static_cast<int>(std::ceil(std::sqrt(20.0 / eps_beta))));
  while (N > 1 && double(N - 1) * (N - 1) * eps_beta >= 20.0) --N;
  while (double(N) * N * eps_beta < 20.0) ++N;
  return N;
}

std::vector<std::string> BasisLabeling::gas_labels() const {
  std::vector<std::string> out;
  for (int k = 1; k <= N; ++k) out.push_back("L_" + std::to_string(k));
  for (int k = 1; k <= N; ++k) out.push_back("R_" + std::to_string(k));
  return out;
}

DensityMatrix thermal_dm(const spectral::Spectrum& levels, double beta) {
  // Throws if the unlisted tail could carry more than the allowed weight.
  thermo::partition_exact(levels, beta, kTruncationWeight);
  const auto n = static_cast<Eigen::Index>(levels.levels.size());
  const double ground = levels.levels.front().energy;
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = std::exp(-beta * (levels.levels[i].energy - ground));
  w /= w.sum();
  return DensityMatrix(w.cast<std::complex<double>>().asDiagonal());
}

DensityMatrix post_insertion_dm(const std::vector<spectral::SplitPair>& pairs, double beta) {
  return DensityMatrix(pair_matrix(pairs, beta, true));
}

DensityMatrix incoherent_dm(const std::vector<spectral::SplitPair>& pairs, double beta) {
  return DensityMatrix(pair_matrix(pairs, beta, false));
}

DensityMatrix conditional_dm(const std::vector<spectral::SplitPair>& pairs, double beta, Side side) {
  const auto w = pair_weights(pairs, beta);
  const int N = static_cast<int>(pairs.size());
  Matrix m = Matrix::Zero(2 * N, 2 * N);
  const int offset = side == Side::left ? 0 : N;
  for (int k = 0; k < N; ++k) m(offset + k, offset + k) = 2.0 * w.diag[k] / w.Z;
  return DensityMatrix(m);
}

Eigen::VectorXd spectrum(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ComputationError("density matrix eigensolver failed");
  Eigen::VectorXd p = es.eigenvalues();
  for (auto& x : p) {
    if (x < -kPsdTol) throw ValidationError("density matrix not positive semidefinite: eigenvalue " + std::to_string(x));
    if (x < 0.0) x = 0.0;
  }
  return p;
}

double vn_entropy(const DensityMatrix& rho) { return entropy_of(spectrum(rho)); }

double information(const DensityMatrix& rho) { return std::log(static_cast<double>(rho.dim())) - vn_entropy(rho); }

DensityMatrix partial_trace(const DensityMatrix& P, Keep keep) {
  const auto& dims = P.subsystem_dims();
  if (!dims) throw ValidationError("partial trace needs declared subsystem dimensions");
  const Eigen::Index dg = dims->gas, dd = dims->demon;
  const Matrix& m = P.matrix();
  if (keep == Keep::gas) {
    Matrix out = Matrix::Zero(dg, dg);
    for (Eigen::Index a = 0; a < dg; ++a)
      for (Eigen::Index b = 0; b < dg; ++b)
        for (Eigen::Index j = 0; j < dd; ++j) out(a, b) += m(a * dd + j, b * dd + j);
    return DensityMatrix(out);
  }
  Matrix out = Matrix::Zero(dd, dd);
  for (Eigen::Index i = 0; i < dd; ++i)
    for (Eigen::Index j = 0; j < dd; ++j)
      for (Eigen::Index g = 0; g < dg; ++g) out(i, j) += m(g * dd + i, g * dd + j);
  return DensityMatrix(out);
}

double mutual_information(const DensityMatrix& P) {
  return vn_entropy(partial_trace(P, Keep::gas)) + vn_entropy(partial_trace(P, Keep::demon)) - vn_entropy(P);
}

double trace_distance(const DensityMatrix& P, const DensityMatrix& Q) {
  if (P.dim() != Q.dim()) throw ValidationError("trace distance of matrices with different dimensions");
  Eigen::SelfAdjointEigenSolver<Matrix> es(P.matrix() - Q.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ComputationError("trace distance eigensolver failed");
  return std::min(1.0, 0.5 * es.eigenvalues().cwiseAbs().sum());
}

DensityMatrix tensor_product(const DensityMatrix& gas, const DensityMatrix& demon) {
  Matrix m = Eigen::kroneckerProduct(gas.matrix(), demon.matrix());
  return DensityMatrix(std::move(m), SubsystemDims{gas.dim(), demon.dim()});
}

double max_coherence(const DensityMatrix& rho) {
  double c = 0.0;
  for (Eigen::Index i = 0; i < rho.dim(); ++i)
    for (Eigen::Index j = 0; j < rho.dim(); ++j)
      if (i != j) c = std::max(c, std::abs(rho.matrix()(i, j)));
  return c;
}

}  // namespace szilard::infodyn
