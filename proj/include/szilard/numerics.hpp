#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace szilard::numerics {

/// Uniform grid of interior points on (x_min, x_max). The end points are
/// excluded: wavefunctions are pinned to zero there.
class Grid {
 public:
  Grid(std::size_t n_points, double x_min, double x_max);

  std::size_t size() const noexcept { return n_points_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double spacing() const noexcept { return spacing_; }
  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i + 1) * spacing_; }

 private:
  std::size_t n_points_;
  double x_min_;
  double x_max_;
  double spacing_;
};

class TridiagonalSymmetric {
 public:
  TridiagonalSymmetric(std::vector<double> diagonal, std::vector<double> off_diagonal);

  std::size_t size() const noexcept { return diagonal_.size(); }
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }
  const std::vector<double>& off_diagonal() const noexcept { return off_diagonal_; }

  // Largest absolute entry; the reference scale for residual tolerances.
  double scale() const noexcept { return scale_; }

  void apply(std::span<const double> v, std::span<double> out) const;

  // Number of eigenvalues strictly below x (Sturm sequence count).
  std::size_t count_below(double x) const;

 private:
  std::vector<double> diagonal_;
  std::vector<double> off_diagonal_;
  double scale_ = 0.0;
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

/// Lowest `k_lowest` eigenvalues by Sturm bisection, ascending.
std::vector<double> eigenvalues_tridiagonal(const TridiagonalSymmetric& matrix, std::size_t k_lowest);

/// Lowest `k_lowest` eigenpairs: bisection for the values, inverse iteration
/// for the vectors. Every returned pair satisfies
/// ||Mv - lambda v|| <= 1e-10 * matrix.scale(); a pair that does not
/// raises ConvergenceError carrying its index.
std::vector<EigenPair> eig_tridiagonal(const TridiagonalSymmetric& matrix, std::size_t k_lowest);

struct SeriesResult {
  double sum = 0.0;
  std::size_t terms_used = 0;
};

struct SeriesOptions {
  std::size_t max_terms = 10'000'000;
  // The tail bound is consulted every `batch` terms.
  std::size_t batch = 1;
};

/// Sums term(0) + term(1) + ... until tail_bound(n), a bound on
/// |sum_{i>=n} term(i)|, drops below rel_tol * |partial sum|.
/// Accumulation is compensated (Neumaier).
SeriesResult sum_series(const std::function<double(std::size_t)>& term,
                        const std::function<double(std::size_t)>& tail_bound, double rel_tol,
                        SeriesOptions options = {});

/// Bound on sum_{n>=n0} exp(-a n^2) for a > 0, n0 >= 1.
double gaussian_tail_bound(double a, double n0);

/// Bound on sum_{n>=n0} n^2 exp(-a n^2); infinite when the term ratio is not
/// yet below one at n0.
double gaussian_moment_tail_bound(double a, double n0);

struct QuadratureOptions {
  std::size_t max_subdivisions = 4096;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 QuadratureOptions options = {});

}  // namespace szilard::numerics
