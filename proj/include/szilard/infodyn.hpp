#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "szilard/spectral.hpp"

namespace szilard::infodyn {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

struct SubsystemDims {
  Eigen::Index gas = 0;
  Eigen::Index demon = 0;
};

/// Hermitian, unit-trace matrix. Checked on construction; positivity is
/// checked where eigenvalues are needed (vn_entropy).
/// Joint states are ordered gas-major: index = g * demon + j.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries, std::optional<SubsystemDims> dims = std::nullopt);

  static DensityMatrix pure(const Vector& psi);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  const std::optional<SubsystemDims>& subsystem_dims() const { return dims_; }
  DensityMatrix with_dims(SubsystemDims dims) const { return DensityMatrix(m_, dims); }

 private:
  Matrix m_;
  std::optional<SubsystemDims> dims_;
};

/// Gas basis L_1..L_N, R_1..R_N and demon basis D_L, D_R.
struct BasisLabeling {
  int N = 0;

  /// Throws unless N^2 eps beta >= 20.
  static BasisLabeling checked(int N, double eps_beta);
  /// Smallest N with N^2 eps beta >= 20.
  static int minimal_N(double eps_beta);

  Eigen::Index gas_dim() const { return 2 * N; }
  Eigen::Index left(int k) const { return k - 1; }
  Eigen::Index right(int k) const { return N + k - 1; }
  std::vector<std::string> gas_labels() const;
  static std::vector<std::string> demon_labels() { return {"D_L", "D_R"}; }
};

enum class Side { left, right };
enum class Keep { gas, demon };

/// rho = exp(-beta H) / Z in the energy basis of the listed levels. Fails if
/// the weight beyond the listing may exceed 1e-10.
DensityMatrix thermal_dm(const spectral::Spectrum& levels, double beta);

/// The partitioned gas in the localized basis: blocks exp(-beta E_k) cosh(beta delta_k)
/// on the diagonal, exp(-beta E_k) sinh(beta delta_k) between L_k and R_k.
DensityMatrix post_insertion_dm(const std::vector<spectral::SplitPair>& pairs, double beta);

/// Same as post_insertion_dm with the L-R coherences removed.
DensityMatrix incoherent_dm(const std::vector<spectral::SplitPair>& pairs, double beta);

/// The gas known to be on one side.
DensityMatrix conditional_dm(const std::vector<spectral::SplitPair>& pairs, double beta, Side side);

/// Eigenvalues of a density matrix with small negatives clipped to 0. Fails
/// below -1e-10.
Eigen::VectorXd spectrum(const DensityMatrix& rho);

/// -Tr rho ln rho, natural log, k_B units.
double vn_entropy(const DensityMatrix& rho);

/// ln(dim) - S relative to the declared (truncated) dimension.
double information(const DensityMatrix& rho);

DensityMatrix partial_trace(const DensityMatrix& P, Keep keep);

/// S(gas) + S(demon) - S(P).
double mutual_information(const DensityMatrix& P);

/// 1/2 ||P - Q||_1.
double trace_distance(const DensityMatrix& P, const DensityMatrix& Q);

DensityMatrix tensor_product(const DensityMatrix& gas, const DensityMatrix& demon);

/// Largest |rho_ij| over i != j.
double max_coherence(const DensityMatrix& rho);

}  // namespace szilard::infodyn
