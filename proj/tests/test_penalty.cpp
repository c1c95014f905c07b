#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "logshift/penalty.hpp"

using namespace logshift;
using namespace testutil;

namespace {

EdgeVector vec2(double a, double b) {
  EdgeVector v(2);
  v << a, b;
  return v;
}

EdgeVector vec3(double a, double b, double c) {
  EdgeVector v(3);
  v << a, b, c;
  return v;
}

double scalar_prox_objective(double y, double gamma, double beta, double x) {
  return 0.5 * (y - x) * (y - x) + gamma * logshift_value(beta, std::abs(x));
}

// 1e-5-resolution scan over [0, |y|], the bracket that always contains a
// global minimizer.
double scalar_prox_grid(double y, double gamma, double beta) {
  const double a = std::abs(y);
  double best_x = 0.0;
  double best = scalar_prox_objective(a, gamma, beta, 0.0);
  const int steps = static_cast<int>(a / 1e-5) + 1;
  for (int i = 1; i <= steps; ++i) {
    const double x = std::min(a, i * 1e-5);
    const double v = scalar_prox_objective(a, gamma, beta, x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  return std::copysign(best_x, y);
}

}  // namespace

TEST_CASE("PenaltySpec validates and carries the tight Lipschitz constant",
          "[penalty]") {
  const auto spec = PenaltySpec::make(0.3, 4);
  REQUIRE(spec.lipschitz == Catch::Approx(0.3 * 2.0 + 0.7));
  REQUIRE_THROWS_AS(PenaltySpec::make(-0.1, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(PenaltySpec::make(1.1, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(PenaltySpec::make(0.5, 0), std::invalid_argument);
}

TEST_CASE("f_value evaluates the sparse-group norm", "[penalty]") {
  REQUIRE(f_value(PenaltySpec::make(1.0, 3), vec3(1, -2, 3)) ==
          Catch::Approx(6.0));
  REQUIRE(f_value(PenaltySpec::make(0.0, 2), vec2(3, 4)) == Catch::Approx(5.0));
  REQUIRE(f_value(PenaltySpec::make(0.5, 2), vec2(3, 4)) == Catch::Approx(6.0));
  REQUIRE(f_value(PenaltySpec::make(0.5, 2), vec2(0, 0)) == 0.0);
}

TEST_CASE("Lipschitz constant is valid and tight", "[penalty]") {
  Rng rng(11);
  for (double nu : {0.0, 0.3, 1.0}) {
    for (int K : {1, 3, 5}) {
      const auto spec = PenaltySpec::make(nu, K);
      double max_ratio = 0.0;
      for (int trial = 0; trial < 10000; ++trial) {
        EdgeVector u(K), v(K);
        for (int k = 0; k < K; ++k) {
          u[k] = rng.normal() * 2.0;
          v[k] = rng.normal() * 2.0;
        }
        const double gap = std::abs(f_value(spec, u) - f_value(spec, v));
        const double dist = (u - v).norm();
        if (dist > 1e-12) max_ratio = std::max(max_ratio, gap / dist);
        REQUIRE(gap <= spec.lipschitz * dist + 1e-12);
      }
      // all-equal-sign direction approaches the bound
      EdgeVector ones = EdgeVector::Ones(K);
      const double attained =
          f_value(spec, ones) / ones.norm();
      REQUIRE(attained >= 0.99 * spec.lipschitz);
      REQUIRE(max_ratio <= spec.lipschitz + 1e-12);
    }
  }
}

TEST_CASE("logshift_value limits and identities", "[penalty]") {
  REQUIRE(logshift_value(2.0, 0.0) == 0.0);
  REQUIRE(logshift_value(kInf, 3.7) == 3.7);
  REQUIRE(logshift_value(1.0, std::exp(1.0) - 1.0) == Catch::Approx(1.0));
  REQUIRE_THROWS_AS(logshift_value(1.0, -0.1), std::domain_error);
}

TEST_CASE("logshift_value is concave, nondecreasing, and below identity",
          "[penalty]") {
  Rng rng(22);
  for (double beta : {0.1, 1.0, 10.0}) {
    for (int trial = 0; trial < 2000; ++trial) {
      double a = rng.uniform(0.0, 5.0), b = rng.uniform(0.0, 5.0);
      if (a > b) std::swap(a, b);
      REQUIRE(logshift_value(beta, a) <= logshift_value(beta, b) + 1e-12);
      const double mid = logshift_value(beta, 0.5 * (a + b));
      REQUIRE(mid >= 0.5 * (logshift_value(beta, a) + logshift_value(beta, b)) -
                         1e-12);
      REQUIRE(logshift_value(beta, b) <= b + 1e-12);
    }
    // l1-like regime near zero
    const double t = 1e-8;
    REQUIRE(logshift_value(beta, t) / t == Catch::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("mm_weight arithmetic", "[penalty]") {
  REQUIRE(mm_weight(3.0, 2.0, 0.0) == 3.0);
  REQUIRE(mm_weight(3.0, kInf, 42.0) == 3.0);
  REQUIRE(mm_weight(2.0, 1.0, 1.0) == Catch::Approx(1.0));
}

TEST_CASE("prox_sparse_group trivial cases", "[penalty]") {
  const auto spec1 = PenaltySpec::make(1.0, 2);
  REQUIRE(prox_sparse_group(spec1, vec2(0, 0), 1.0).norm() == 0.0);

  const EdgeVector soft = prox_sparse_group(spec1, vec2(3.0, -0.5), 1.0);
  REQUIRE(soft[0] == Catch::Approx(2.0));
  REQUIRE(soft[1] == 0.0);

  // frozen from the 2-D refinement oracle: 1.5 - sqrt(2)/4 per coordinate
  const EdgeVector p = prox_sparse_group(PenaltySpec::make(0.5, 2),
                                         vec2(2.0, 2.0), 1.0);
  REQUIRE(p[0] == Catch::Approx(1.1464466094067263).margin(1e-12));
  REQUIRE(p[1] == Catch::Approx(1.1464466094067263).margin(1e-12));
}

TEST_CASE("prox_sparse_group matches the brute-force oracle", "[penalty]") {
  Rng rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const int K = 1 + static_cast<int>(rng.uniform_int(3));
    const auto spec = PenaltySpec::make(rng.uniform(0.0, 1.0), K);
    EdgeVector v(K);
    for (int k = 0; k < K; ++k) v[k] = rng.normal() * 2.0;
    const double step = rng.uniform(0.05, 2.0);
    const EdgeVector got = prox_sparse_group(spec, v, step);
    const EdgeVector want = prox_oracle(spec, v, step);
    REQUIRE((got - want).lpNorm<Eigen::Infinity>() <= 1e-6);
  }
}

TEST_CASE("prox_sparse_group shrinks and preserves signs", "[penalty]") {
  Rng rng(44);
  for (int trial = 0; trial < 2000; ++trial) {
    const int K = 1 + static_cast<int>(rng.uniform_int(4));
    const auto spec = PenaltySpec::make(rng.uniform(0.0, 1.0), K);
    EdgeVector v(K);
    for (int k = 0; k < K; ++k) v[k] = rng.normal() * 3.0;
    const EdgeVector x = prox_sparse_group(spec, v, rng.uniform(0.0, 2.0));
    for (int k = 0; k < K; ++k) {
      REQUIRE(std::abs(x[k]) <= std::abs(v[k]) + 1e-15);
      REQUIRE(x[k] * v[k] >= 0.0);
    }
  }
}

TEST_CASE("in_subgradient_at_zero examples", "[penalty]") {
  const auto l1 = PenaltySpec::make(1.0, 2);
  REQUIRE(in_subgradient_at_zero(l1, vec2(0, 0)));
  REQUIRE(in_subgradient_at_zero(l1, vec2(0.5, -0.9)));
  REQUIRE_FALSE(in_subgradient_at_zero(l1, vec2(1.1, 0)));

  const auto group = PenaltySpec::make(0.0, 2);
  REQUIRE(in_subgradient_at_zero(group, vec2(0.6, 0.6)));
  REQUIRE_FALSE(in_subgradient_at_zero(group, vec2(0.8, 0.8)));
}

TEST_CASE("in_subgradient_at_zero agrees with the direct screening inequality",
          "[penalty]") {
  Rng rng(55);
  for (int trial = 0; trial < 5000; ++trial) {
    const int K = 1 + static_cast<int>(rng.uniform_int(4));
    const double nu = 0.3;
    const auto spec = PenaltySpec::make(nu, K);
    const double gamma = rng.uniform(0.1, 3.0);
    Vector s(K), n(K);
    for (int k = 0; k < K; ++k) {
      s[k] = rng.normal();
      n[k] = rng.uniform(1.0, 50.0);
    }
    EdgeVector v(K);
    for (int k = 0; k < K; ++k) v[k] = n[k] * s[k] / gamma;
    REQUIRE(in_subgradient_at_zero(spec, v) ==
            !danaher_edge_survives(s, n, gamma, nu));
  }
}

TEST_CASE("in_subgradient_at_zero is monotone in |v|", "[penalty]") {
  Rng rng(66);
  for (int trial = 0; trial < 2000; ++trial) {
    const int K = 1 + static_cast<int>(rng.uniform_int(3));
    const auto spec = PenaltySpec::make(rng.uniform(0.0, 1.0), K);
    EdgeVector v(K), smaller(K);
    for (int k = 0; k < K; ++k) {
      v[k] = rng.normal() * 1.5;
      smaller[k] = v[k] * rng.uniform(0.0, 1.0);
    }
    if (in_subgradient_at_zero(spec, v))
      REQUIRE(in_subgradient_at_zero(spec, smaller));
  }
}

TEST_CASE("scalar_logshift_prox examples", "[penalty]") {
  REQUIRE(scalar_logshift_prox(0.0, 1.0, 0.5) == 0.0);
  REQUIRE(scalar_logshift_prox(2.0, 1.0, kInf) == Catch::Approx(1.0));

  // frozen from the 1e-5 grid oracle (root of x^2 - 2.5x - 1)
  const double got = scalar_logshift_prox(3.0, 1.0, 0.5);
  REQUIRE(got == Catch::Approx(2.850781059358212).margin(1e-12));
  REQUIRE(std::abs(got - scalar_prox_grid(3.0, 1.0, 0.5)) <= 2e-5);
}

TEST_CASE("scalar_logshift_prox matches the grid oracle", "[penalty]") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const double y = rng.uniform(-4.0, 4.0);
    const double gamma = rng.uniform(0.1, 2.5);
    const double beta = rng.uniform(0.1, 3.0);
    const double got = scalar_logshift_prox(y, gamma, beta);
    const double grid = scalar_prox_grid(y, gamma, beta);
    const bool close = std::abs(got - grid) <= 2e-5;
    const bool same_objective =
        std::abs(scalar_prox_objective(y, gamma, beta, got) -
                 scalar_prox_objective(y, gamma, beta, grid)) <= 1e-10;
    REQUIRE((close || same_objective));
    // never worse than the grid
    REQUIRE(scalar_prox_objective(y, gamma, beta, got) <=
            scalar_prox_objective(y, gamma, beta, grid) + 1e-12);
  }
}

TEST_CASE("scalar_logshift_prox thresholds like the shrinkage picture",
          "[penalty]") {
  const double gamma = 1.0, beta = 0.5;
  bool seen_nonzero = false;
  double last_zero_y = 0.0, first_nonzero_y = kInf;
  for (double y = 0.0; y <= 4.0; y += 0.001) {
    const double x = scalar_logshift_prox(y, gamma, beta);
    if (x == 0.0) {
      REQUIRE_FALSE(seen_nonzero);  // the zero region is an interval
      last_zero_y = y;
    } else {
      if (!seen_nonzero) first_nonzero_y = y;
      seen_nonzero = true;
    }
    REQUIRE(scalar_logshift_prox(-y, gamma, beta) == -x);  // odd symmetry
  }
  REQUIRE(seen_nonzero);
  REQUIRE(last_zero_y > 0.1);
  REQUIRE(first_nonzero_y < 4.0);
}

TEST_CASE("ties at the threshold resolve to zero", "[penalty]") {
  // scan for a y where both candidates nearly tie; the output must be the
  // sparse one at and just below the crossover
  const double gamma = 1.0, beta = 0.5;
  double y_lo = 0.0, y_hi = 4.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (y_lo + y_hi);
    if (scalar_logshift_prox(mid, gamma, beta) == 0.0)
      y_lo = mid;
    else
      y_hi = mid;
  }
  REQUIRE(scalar_logshift_prox(y_lo, gamma, beta) == 0.0);
  REQUIRE(scalar_logshift_prox(y_hi, gamma, beta) != 0.0);
}

TEST_CASE("log(1 + f/beta) + L^2 |x|^2 / (2 beta^2) is midpoint convex",
          "[penalty]") {
  Rng rng(88);
  for (double nu : {0.0, 0.5, 1.0}) {
    for (int K : {1, 3}) {
      const auto spec = PenaltySpec::make(nu, K);
      for (double beta : {0.1, 1.0, 10.0}) {
        const auto h = [&](const EdgeVector& x) {
          return std::log1p(f_value(spec, x) / beta) +
                 spec.lipschitz * spec.lipschitz * x.squaredNorm() /
                     (2.0 * beta * beta);
        };
        for (int trial = 0; trial < 1000; ++trial) {
          EdgeVector x(K), y(K);
          for (int k = 0; k < K; ++k) {
            x[k] = rng.normal() * rng.uniform(0.1, 5.0);
            y[k] = rng.normal() * rng.uniform(0.1, 5.0);
          }
          REQUIRE(h(0.5 * (x + y)) <= 0.5 * (h(x) + h(y)) + 1e-12);
        }
      }
    }
  }
}
