#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "szilard/error.hpp"
#include "szilard/numerics.hpp"

using namespace szilard;
using namespace szilard::numerics;

namespace {

// -psi''/2 on the interior grid of (-1/2, 1/2).
TridiagonalSymmetric free_laplacian(std::size_t n) {
  const Grid grid(n, -0.5, 0.5);
  const double h2 = grid.spacing() * grid.spacing();
  return TridiagonalSymmetric(std::vector<double>(n, 1.0 / h2), std::vector<double>(n - 1, -0.5 / h2));
}

TridiagonalSymmetric random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> d(n), e(n - 1);
  for (auto& x : d) x = u(rng);
  for (auto& x : e) x = u(rng);
  return TridiagonalSymmetric(d, e);
}

}  // namespace

TEST_CASE("grid stores interior points only") {
  const Grid grid(3, -0.5, 0.5);
  CHECK(grid.spacing() == doctest::Approx(0.25));
  CHECK(grid.x(0) == doctest::Approx(-0.25));
  CHECK(grid.x(2) == doctest::Approx(0.25));
  CHECK_THROWS_AS(Grid(2, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(Grid(10, 1.0, 1.0), ValidationError);
}

TEST_CASE("tridiagonal matrix validates its shape") {
  CHECK_THROWS_AS(TridiagonalSymmetric({1.0, 2.0}, {1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(TridiagonalSymmetric({1.0, NAN}, {1.0}), ValidationError);
  const TridiagonalSymmetric m({1.0, -7.0}, {3.0});
  CHECK(m.scale() == 7.0);
}

TEST_CASE("uniform tridiagonal matches the closed form") {
  const TridiagonalSymmetric m({2.0, 2.0, 2.0}, {-1.0, -1.0});
  const auto pairs = eig_tridiagonal(m, 3);
  REQUIRE(pairs.size() == 3);
  for (int j = 1; j <= 3; ++j) {
    CHECK(pairs[j - 1].value == doctest::Approx(2.0 - 2.0 * std::cos(j * std::numbers::pi / 4.0)).epsilon(1e-14));
  }
  CHECK(pairs[0].value == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(pairs[2].value == doctest::Approx(2.0 + std::sqrt(2.0)));
}

TEST_CASE("diagonal matrix returns sorted diagonal and coordinate vectors") {
  const std::vector<double> d = {3.0, -1.0, 7.0, 0.5};
  const TridiagonalSymmetric m(d, {0.0, 0.0, 0.0});
  const auto pairs = eig_tridiagonal(m, 4);
  const std::vector<double> sorted = {-1.0, 0.5, 3.0, 7.0};
  const std::vector<std::size_t> position = {1, 3, 0, 2};
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(pairs[j].value == doctest::Approx(sorted[j]).epsilon(1e-15));
    CHECK(std::abs(pairs[j].vector[position[j]]) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("k_lowest outside [1, n] is rejected") {
  const TridiagonalSymmetric m({1.0, 2.0, 3.0}, {0.1, 0.1});
  CHECK_THROWS_AS(eig_tridiagonal(m, 0), ValidationError);
  CHECK_THROWS_AS(eig_tridiagonal(m, 4), ValidationError);
}

TEST_CASE("free Laplacian converges to pi^2/2 at second order") {
  const double exact = std::numbers::pi * std::numbers::pi / 2.0;
  const double l1024 = eigenvalues_tridiagonal(free_laplacian(1024), 1)[0];
  const double l2048 = eigenvalues_tridiagonal(free_laplacian(2048), 1)[0];
  const double l4096 = eigenvalues_tridiagonal(free_laplacian(4096), 1)[0];

  CHECK(std::abs(l4096 - exact) / exact < 1e-5);
  // Richardson extrapolation removes the h^2 term.
  const double extrapolated = (4.0 * l4096 - l2048) / 3.0;
  CHECK(std::abs(extrapolated - exact) / exact < 1e-9);

  // Spacing ratio between consecutive grids is (n+1) ratio, close to 2.
  const double h1 = 1.0 / 1025.0, h2 = 1.0 / 2049.0, h3 = 1.0 / 4097.0;
  const double order_a = std::log((l1024 - exact) / (l2048 - exact)) / std::log(h1 / h2);
  const double order_b = std::log((l2048 - exact) / (l4096 - exact)) / std::log(h2 / h3);
  CHECK(order_a >= 1.8);
  CHECK(order_a <= 2.2);
  CHECK(order_b >= 1.8);
  CHECK(order_b <= 2.2);
}

TEST_CASE("eigenpairs satisfy residual and orthogonality bounds on random matrices") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(rng() % 120);
    const auto m = random_matrix(rng, n);
    const std::size_t k = 1 + static_cast<std::size_t>(rng() % n);
    const auto pairs = eig_tridiagonal(m, k);
    std::vector<double> mv(n);
    for (std::size_t j = 0; j < k; ++j) {
      if (j > 0) CHECK(pairs[j].value >= pairs[j - 1].value);
      m.apply(pairs[j].vector, mv);
      double r2 = 0.0, n2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        r2 += std::pow(mv[i] - pairs[j].value * pairs[j].vector[i], 2);
        n2 += pairs[j].vector[i] * pairs[j].vector[i];
      }
      CHECK(std::sqrt(r2) <= 1e-10 * m.scale());
      CHECK(std::sqrt(n2) == doctest::Approx(1.0).epsilon(1e-12));
      for (std::size_t i = 0; i < j; ++i) {
        double dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += pairs[i].vector[r] * pairs[j].vector[r];
        CHECK(std::abs(dot) <= 1e-8);
      }
    }
  }
}

TEST_CASE("nearly degenerate eigenvalues still give orthogonal vectors") {
  // Two weakly coupled identical blocks: a tight doublet.
  std::vector<double> d(40, 2.0), e(39, -1.0);
  e[19] = -1e-9;
  const TridiagonalSymmetric m(d, e);
  const auto pairs = eig_tridiagonal(m, 4);
  double dot = 0.0;
  for (std::size_t r = 0; r < 40; ++r) dot += pairs[0].vector[r] * pairs[1].vector[r];
  CHECK(std::abs(dot) <= 1e-8);
}

TEST_CASE("geometric series sums to one") {
  const auto r = sum_series([](std::size_t i) { return std::ldexp(1.0, -static_cast<int>(i + 1)); },
                            [](std::size_t n) { return std::ldexp(1.0, -static_cast<int>(n)); }, 1e-14);
  CHECK(r.sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gaussian series converges in a handful of terms") {
  double oracle = 0.0;
  for (int n = 10; n >= 1; --n) oracle += std::exp(-double(n) * n);

  const auto term = [](std::size_t i) { const double n = double(i + 1); return std::exp(-n * n); };
  const auto tail = [](std::size_t used) { return gaussian_tail_bound(1.0, double(used + 1)); };
  const auto r = sum_series(term, tail, 1e-12);
  CHECK(r.sum == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(r.sum == doctest::Approx(0.386319).epsilon(1e-6));
  CHECK(r.terms_used <= 8);
}

TEST_CASE("all-zero series stops after one term") {
  const auto r = sum_series([](std::size_t) { return 0.0; }, [](std::size_t) { return 0.0; }, 1e-12);
  CHECK(r.sum == 0.0);
  CHECK(r.terms_used == 1);
}

TEST_CASE("series result does not depend on batching") {
  const double a = 0.003;
  const auto term = [a](std::size_t i) { const double n = double(i + 1); return std::exp(-a * n * n); };
  const auto tail = [a](std::size_t used) { return gaussian_tail_bound(a, double(used + 1)); };
  const double reference = sum_series(term, tail, 1e-12).sum;
  for (std::size_t batch : {2u, 3u, 7u, 16u, 64u}) {
    const auto r = sum_series(term, tail, 1e-12, {.batch = batch});
    CHECK(std::abs(r.sum - reference) <= 1e-12 * reference);
  }
}

TEST_CASE("series without a usable tail bound fails explicitly") {
  const auto term = [](std::size_t i) { return 1.0 / double(i + 1); };
  const auto tail = [](std::size_t) { return std::numeric_limits<double>::infinity(); };
  CHECK_THROWS_AS(sum_series(term, tail, 1e-12, {.max_terms = 1000}), ConvergenceError);
}

TEST_CASE("tail bounds dominate the true tails") {
  for (double a : {1e-4, 1e-2, 0.5, 2.0}) {
    for (double n0 : {1.0, 5.0, 40.0, 300.0}) {
      double tail = 0.0, moment = 0.0;
      for (double n = n0; n < n0 + 20000.0; n += 1.0) {
        tail += std::exp(-a * n * n);
        moment += n * n * std::exp(-a * n * n);
      }
      CHECK(gaussian_tail_bound(a, n0) >= tail * (1.0 - 1e-12));
      CHECK(gaussian_moment_tail_bound(a, n0) >= moment * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("quadrature of the Gay-Lussac integrand gives ln 2") {
  CHECK(integrate([](double v) { return 1.0 / v; }, 0.5, 1.0, 1e-12) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("quadrature edge cases") {
  CHECK(integrate([](double x) { return std::exp(x); }, 0.3, 0.3, 1e-9) == 0.0);
  CHECK(integrate([](double x) { return x; }, 0.0, 1.0, 1e-12) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(integrate([](double x) { return x; }, 1.0, 0.0, 1e-12) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("quadrature subdivision limit is reported") {
  const auto wild = [](double x) { return std::sin(2000.0 * x * x); };
  CHECK_THROWS_AS(integrate(wild, 0.0, 3.0, 1e-14, {.max_subdivisions = 8}), ConvergenceError);
}
