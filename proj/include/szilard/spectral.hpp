#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "szilard/numerics.hpp"

namespace szilard {

/// Unit system and engine geometry. The default is the dimensionless system
/// hbar = m = k_B = L = 1 with a narrow, tall partition.
struct PhysicalParams {
  double hbar = 1.0;
  double mass = 1.0;
  double k_B = 1.0;
  double L = 1.0;    // box width
  double d = 0.02;   // partition width; 0 means no partition
  double U = 5000.0; // partition height
  double T = 500.0;

  // Throws ValidationError naming the violated invariant.
  void validate() const;

  double beta() const { return 1.0 / (k_B * T); }
  double kT() const { return k_B * T; }
  // Box ground-state unit: E_n = epsilon * n^2.
  double epsilon() const;
  // Level unit of one well of width (L - d): epsilon * L^2 / (L - d)^2.
  double epsilon_prime() const;
  double sigma() const;  // exp(-beta * epsilon)
  double thermal_wavelength() const;

  bool operator==(const PhysicalParams&) const = default;
};

namespace spectral {

enum class Parity { none, even, odd };

struct Level {
  int n = 0;  // 1-based
  double energy = 0.0;
  std::vector<double> vector;  // empty for analytic levels
  Parity parity = Parity::none;
};

struct Spectrum {
  std::vector<Level> levels;
  // A truncated listing of an infinite tower; sums over it need a tail estimate.
  bool truncated = true;
  std::optional<numerics::Grid> grid;

  std::vector<double> energies() const;
  double max_energy() const;
};

/// A below-barrier doublet. psi_minus is the symmetric (lower) member,
/// psi_plus the antisymmetric (upper) member. Vectors are empty for
/// model pairs that carry energies only.
struct SplitPair {
  int k = 0;
  double E_mean = 0.0;
  double delta = 0.0;  // half-splitting
  std::vector<double> psi_plus;
  std::vector<double> psi_minus;

  double E_lower() const { return E_mean - delta; }
  double E_upper() const { return E_mean + delta; }
  bool has_vectors() const { return !psi_plus.empty(); }
};

struct LocalizedPair {
  std::vector<double> left;
  std::vector<double> right;
};

/// Interior grid over the box (-L/2, L/2).
numerics::Grid box_grid(const PhysicalParams& params, std::size_t n_points);

/// E_n = n^2 pi^2 hbar^2 / (2 m L^2) for n = 1..n_max, analytic.
Spectrum box_levels(const PhysicalParams& params, int n_max);

/// Centered-box eigenfunction: cos(n pi x / L) for odd n, sin for even n.
double box_eigenfunction(const PhysicalParams& params, int n, double x);

/// Rectangular centered partition, averaged over each grid cell so the
/// discrete potential varies smoothly with d.
std::vector<double> barrier_potential(const PhysicalParams& params, const numerics::Grid& grid);

/// Finite-difference Hamiltonian -hbar^2/(2m) d^2/dx^2 + V.
numerics::TridiagonalSymmetric hamiltonian(const PhysicalParams& params, const numerics::Grid& grid,
                                           const std::vector<double>& potential);

/// Lowest levels of the partitioned box, computed in the even and odd parity
/// sectors separately. Vectors are filled when `with_vectors` is set.
Spectrum barrier_levels(const PhysicalParams& params, int n_levels, const numerics::Grid& grid,
                        bool with_vectors = false);

/// Lowest levels of the partitioned box without the partition (U = 0),
/// i.e. the finite-difference free box.
Spectrum free_box_levels(const PhysicalParams& params, int n_levels, const numerics::Grid& grid);

/// Lowest levels of the left half of the partitioned box with a hard wall at
/// the center: the molecule known to be on the left.
Spectrum half_well_levels(const PhysicalParams& params, int n_levels, const numerics::Grid& grid,
                          bool with_vectors = false);

/// Doublets k = 1..n_pairs with eigenvectors, sign-fixed so that
/// localized_basis() yields a left-localized state.
std::vector<SplitPair> barrier_spectrum(const PhysicalParams& params, int n_pairs, const numerics::Grid& grid);

/// Closed-form splitting (4 eps'/pi) exp(-d sqrt(2m(U - E_k))/hbar), E_k = eps' (2k)^2.
double splitting_estimate(const PhysicalParams& params, int k);

/// Left/right combinations (psi+ + psi-)/sqrt 2 and (psi- - psi+)/sqrt 2.
LocalizedPair localized_basis(const SplitPair& pair);

/// Reverses a grid vector: the x -> -x reflection.
std::vector<double> mirror(const std::vector<double>& v);

/// Probability weight of v on the left half of a symmetric grid.
double left_weight(const std::vector<double>& v);

/// Energy-only doublets E_k = eps' (2k)^2 for the measurement model. With
/// `with_splitting` the estimate above supplies delta_k, otherwise delta_k = 0.
std::vector<SplitPair> model_pairs(const PhysicalParams& params, int n_pairs, bool with_splitting);

}  // namespace spectral
}  // namespace szilard
