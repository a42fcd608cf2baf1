#include "szilard/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>

#include "szilard/error.hpp"

namespace szilard::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// LU factorization of (T - shift I) with partial pivoting, kept in the
// LAPACK gttrf layout: unit lower factor in `lower`, upper factor in
// (`diag`, `upper1`, `upper2`).
struct ShiftedLu {
  std::vector<double> lower, diag, upper1, upper2;
  std::vector<bool> swapped;

  ShiftedLu(const TridiagonalSymmetric& m, double shift, double pivmin) {
    const std::size_t n = m.size();
    diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = m.diagonal()[i] - shift;
    lower = m.off_diagonal();
    upper1 = m.off_diagonal();
    upper2.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped.assign(n > 0 ? n - 1 : 0, false);

    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(diag[i]) >= std::abs(lower[i])) {
        if (std::abs(diag[i]) < pivmin) diag[i] = pivmin;
        const double fact = lower[i] / diag[i];
        lower[i] = fact;
        diag[i + 1] -= fact * upper1[i];
      } else {
        const double fact = diag[i] / lower[i];
        diag[i] = lower[i];
        lower[i] = fact;
        const double tmp = upper1[i];
        upper1[i] = diag[i + 1];
        diag[i + 1] = tmp - fact * diag[i + 1];
        if (i + 2 < n) {
          upper2[i] = upper1[i + 1];
          upper1[i + 1] = -fact * upper1[i + 1];
        }
        swapped[i] = true;
      }
    }
    if (n > 0 && std::abs(diag[n - 1]) < pivmin) diag[n - 1] = pivmin;
  }

  void solve(std::vector<double>& b) const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) {
        const double tmp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = tmp - lower[i] * b[i];
      } else {
        b[i + 1] -= lower[i] * b[i];
      }
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double v = b[ii];
      if (ii + 1 < n) v -= upper1[ii] * b[ii + 1];
      if (ii + 2 < n) v -= upper2[ii] * b[ii + 2];
      b[ii] = v / diag[ii];
    }
  }
};

double bisect_eigenvalue(const TridiagonalSymmetric& m, std::size_t index, double lo, double hi) {
  constexpr int kMaxIterations = 400;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) {
      return 0.5 * (lo + hi);
    }
    if (m.count_below(mid) <= index) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("bisection did not converge", index);
}

}  // namespace

Grid::Grid(std::size_t n_points, double x_min, double x_max)
    : n_points_(n_points), x_min_(x_min), x_max_(x_max) {
  if (n_points < 3) throw ValidationError("grid needs at least 3 interior points");
  if (!(x_max > x_min)) throw ValidationError("grid requires x_max > x_min");
  spacing_ = (x_max - x_min) / static_cast<double>(n_points + 1);
}

TridiagonalSymmetric::TridiagonalSymmetric(std::vector<double> diagonal, std::vector<double> off_diagonal)
    : diagonal_(std::move(diagonal)), off_diagonal_(std::move(off_diagonal)) {
  if (diagonal_.empty()) throw ValidationError("tridiagonal matrix must be non-empty");
  if (off_diagonal_.size() + 1 != diagonal_.size()) {
    throw ValidationError("off-diagonal length must be one less than the diagonal length");
  }
  for (double x : diagonal_) {
    if (!std::isfinite(x)) throw ValidationError("non-finite diagonal entry");
    scale_ = std::max(scale_, std::abs(x));
  }
  for (double x : off_diagonal_) {
    if (!std::isfinite(x)) throw ValidationError("non-finite off-diagonal entry");
    scale_ = std::max(scale_, std::abs(x));
  }
}

void TridiagonalSymmetric::apply(std::span<const double> v, std::span<double> out) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = diagonal_[i] * v[i];
    if (i > 0) s += off_diagonal_[i - 1] * v[i - 1];
    if (i + 1 < n) s += off_diagonal_[i] * v[i + 1];
    out[i] = s;
  }
}

std::size_t TridiagonalSymmetric::count_below(double x) const {
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, scale_ * scale_);
  std::size_t count = 0;
  double q = diagonal_[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < diagonal_.size(); ++i) {
    const double e = off_diagonal_[i - 1];
    q = (diagonal_[i] - x) - e * e / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> eigenvalues_tridiagonal(const TridiagonalSymmetric& matrix, std::size_t k_lowest) {
  const std::size_t n = matrix.size();
  if (k_lowest < 1 || k_lowest > n) {
    throw ValidationError("k_lowest must lie in [1, " + std::to_string(n) + "]");
  }
  // Gershgorin enclosure of the whole spectrum.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(matrix.off_diagonal()[i - 1]);
    if (i + 1 < n) radius += std::abs(matrix.off_diagonal()[i]);
    lo = std::min(lo, matrix.diagonal()[i] - radius);
    hi = std::max(hi, matrix.diagonal()[i] + radius);
  }
  const double pad = 4.0 * kEps * std::max(1.0, matrix.scale()) * static_cast<double>(n);
  lo -= pad;
  hi += pad;

  std::vector<double> values(k_lowest);
  double floor = lo;
  for (std::size_t j = 0; j < k_lowest; ++j) {
    values[j] = bisect_eigenvalue(matrix, j, floor, hi);
    floor = std::max(floor, values[j] - pad);
  }
  return values;
}

std::vector<EigenPair> eig_tridiagonal(const TridiagonalSymmetric& matrix, std::size_t k_lowest) {
  const std::vector<double> values = eigenvalues_tridiagonal(matrix, k_lowest);
  const std::size_t n = matrix.size();
  const double scale = std::max(matrix.scale(), std::numeric_limits<double>::min());
  const double pivmin = kEps * scale;
  const double residual_goal = 8.0 * kEps * scale * std::sqrt(static_cast<double>(n));
  const double residual_limit = 1e-10 * scale;
  // Vectors whose eigenvalues are closer than this are explicitly
  // orthogonalized against each other.
  const double cluster_gap = 1e-6 * scale;

  std::vector<EigenPair> pairs;
  pairs.reserve(k_lowest);
  std::vector<double> work(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;

  for (std::size_t j = 0; j < k_lowest; ++j) {
    const double lambda = values[j];
    const ShiftedLu lu(matrix, lambda, pivmin);

    std::vector<double> v(n);
    for (auto& x : v) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      x = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    }

    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 8; ++it) {
      lu.solve(v);
      for (std::size_t i = j; i-- > 0;) {
        if (lambda - pairs[i].value > cluster_gap) break;
        double dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += v[r] * pairs[i].vector[r];
        for (std::size_t r = 0; r < n; ++r) v[r] -= dot * pairs[i].vector[r];
      }
      const double nv = norm2(v);
      if (!(nv > 0.0) || !std::isfinite(nv)) throw ConvergenceError("inverse iteration broke down", j);
      for (auto& x : v) x /= nv;

      matrix.apply(v, work);
      double r2 = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double d = work[r] - lambda * v[r];
        r2 += d * d;
      }
      residual = std::sqrt(r2);
      if (it >= 1 && residual <= residual_goal) break;
    }
    if (!(residual <= residual_limit)) {
      throw ConvergenceError("inverse iteration residual above 1e-10 * scale", j);
    }
    pairs.push_back({lambda, std::move(v)});
  }
  return pairs;
}

SeriesResult sum_series(const std::function<double(std::size_t)>& term,
                        const std::function<double(std::size_t)>& tail_bound, double rel_tol,
                        SeriesOptions options) {
  if (!(rel_tol > 0.0)) throw ValidationError("rel_tol must be positive");
  const std::size_t batch = std::max<std::size_t>(1, options.batch);
  double sum = 0.0;
  double compensation = 0.0;
  for (std::size_t i = 0; i < options.max_terms; ++i) {
    const double t = term(i);
    if (!std::isfinite(t)) throw ComputationError("non-finite series term at index " + std::to_string(i));
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      compensation += (sum - s) + t;
    } else {
      compensation += (t - s) + sum;
    }
    sum = s;
    const std::size_t used = i + 1;
    if (used % batch == 0) {
      const double total = sum + compensation;
      if (tail_bound(used) <= rel_tol * std::abs(total)) return {total, used};
    }
  }
  throw ConvergenceError("series tail bound never satisfied within the term cap", options.max_terms);
}

double gaussian_tail_bound(double a, double n0) {
  const double q = std::exp(-a * (2.0 * n0 + 1.0));
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return std::exp(-a * n0 * n0) / -std::expm1(-a * (2.0 * n0 + 1.0));
}

double gaussian_moment_tail_bound(double a, double n0) {
  const double growth = (n0 + 1.0) / n0;
  const double log_q = 2.0 * std::log(growth) - a * (2.0 * n0 + 1.0);
  if (log_q >= 0.0) return std::numeric_limits<double>::infinity();
  return n0 * n0 * std::exp(-a * n0 * n0) / -std::expm1(log_q);
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error, abs_value;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(fc) * kKronrodWeights[7];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kKronrodWeights[i] * (f1 + f2);
    abs_sum += kKronrodWeights[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  if (!std::isfinite(value)) throw ComputationError("integrand not finite on the interval");
  return {a, b, value, std::abs((kronrod - gauss) * half), std::abs(abs_sum * half)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 QuadratureOptions options) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, rel_tol, options);
  if (!(rel_tol > 0.0)) throw ValidationError("rel_tol must be positive");

  std::priority_queue<Panel> panels;
  Panel first = gauss_kronrod(f, a, b);
  double total = first.value;
  double total_error = first.error;
  double total_abs = first.abs_value;
  panels.push(first);

  for (std::size_t n = 1;; ++n) {
    const double floor = 50.0 * kEps * total_abs;
    if (total_error <= std::max(rel_tol * std::abs(total), floor)) return total;
    if (n >= options.max_subdivisions) {
      throw ConvergenceError("quadrature subdivision limit reached", n);
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod(f, worst.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    panels.push(left);
    panels.push(right);
  }
}

}  // namespace szilard::numerics
