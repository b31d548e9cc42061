#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cycloproj/bounds.hpp"
#include "cycloproj/rng.hpp"

using namespace cycloproj;

TEST_CASE("closed forms") {
  CHECK(f3_closed(0.2) == doctest::Approx(0.16).epsilon(1e-15));
  CHECK(f3_closed(0.25) == 0.25);
  CHECK(4.0 * 0.25 * 0.25 == 0.25);
  CHECK(f2_closed(0.7) == 0.7);
  CHECK_THROWS_AS(f3_closed(1.1), PreconditionError);

  CHECK(std::abs(fn_small_c(4, 1.0 / 9.0) - 1.0 / 27.0) <= 1e-15);
  CHECK(fn_small_c(3, 0.0) == 0.0);
  CHECK(std::abs(fn_small_c(5, 0.05) - 1.6e-3) <= 1e-15);
  CHECK_THROWS_AS(fn_small_c(4, 0.2), PreconditionError);

  CHECK(f_closed(4, 1.0) == 1.0);
  CHECK(!f_closed(4, 0.5).has_value());
  CHECK(f_closed(5, 0.05).value() == doctest::Approx(1.6e-3));
}

TEST_CASE("upper bounds") {
  CHECK(ub_ours(2, 1.0) == 1.0);
  CHECK(std::abs(ub_ours(2, 0.5) - std::sqrt(1.0 / 3.0)) <= 1e-15);
  CHECK(std::abs(ub_ours(3, 0.0) - std::sqrt(1.0 / 7.0)) <= 1e-15);
  CHECK(ub_bgm(3, 1.0) == 1.0);
  CHECK(std::abs(ub_bgm(2, 0.0) - std::sqrt(1.0 - 1.0 / 64.0)) <= 1e-15);
  CHECK(std::abs(ub_bs(3, 0.0) - std::sqrt(1.0 - 6.0 / 27.0)) <= 1e-15);

  CHECK(std::abs(a_coefficient(2) - 1.0) <= 1e-15);
  CHECK(std::abs(a_coefficient(3) - 1.0) <= 1e-15);
  CHECK(ub_quadratic(2, 1.0) == 1.0);
  CHECK(std::abs(ub_quadratic(3, 0.9) - 0.915) <= 1e-15);
  CHECK(std::abs(lb_quadratic_template(3, 0.9, 2.0) - (1.0 - 0.1 - 0.02)) <= 1e-15);
}

TEST_CASE("bound ordering near c = 1 and the quadratic chain") {
  for (int n = 2; n <= 8; ++n) {
    for (int k = 0; k <= 20; ++k) {
      const double c = 0.9 + 0.005 * k;
      CHECK(ub_ours(n, c) <= ub_bgm(n, c) + 1e-15);
      CHECK(ub_ours(n, c) <= ub_bs(n, c) + 1e-15);
    }
    for (int k = 0; k <= 20; ++k) {
      const double c = 0.05 * k;
      CHECK(ub_ours(n, c) <= ub_inverse_sqrt(n, c) + 1e-15);
      CHECK(ub_inverse_sqrt(n, c) <= ub_quadratic(n, c) + 1e-15);
    }
  }
}

TEST_CASE("path Laplacian and Fiedler vector") {
  const SymmetricMatrix l = path_laplacian(4);
  CHECK(l(0, 0) == 1.0);
  CHECK(l(1, 1) == 2.0);
  CHECK(l(3, 3) == 1.0);
  CHECK(l(1, 2) == -1.0);
  CHECK(l(0, 2) == 0.0);

  CHECK(std::abs(fiedler(2).value - 2.0) <= 1e-14);
  const FiedlerPair f3 = fiedler(3);
  CHECK(std::abs(f3.value - 1.0) <= 1e-14);
  CHECK(std::abs(f3.vector[0] - std::sqrt(0.5)) <= 1e-12);
  CHECK(std::abs(f3.vector[1]) <= 1e-12);
  CHECK(std::abs(f3.vector[2] + std::sqrt(0.5)) <= 1e-12);

  for (int n = 2; n <= 50; ++n) {
    const FiedlerPair f = fiedler(n);
    CHECK(std::abs(f.value - 4.0 * sin2_half_angle(n)) <= 1e-10);
    // closed form cos((2k-1) pi / (2n)), normalized
    double norm = 0.0, sum = 0.0;
    for (int k = 1; k <= n; ++k) norm += std::pow(std::cos((2 * k - 1) * std::numbers::pi / (2 * n)), 2);
    for (int k = 1; k <= n; ++k) {
      const double want = std::cos((2 * k - 1) * std::numbers::pi / (2 * n)) / std::sqrt(norm);
      CHECK(std::abs(f.vector[k - 1] - want) <= 1e-8);
      sum += f.vector[k - 1];
    }
    CHECK(std::abs(sum) <= 1e-10);
  }
}

TEST_CASE("difference inequality") {
  CHECK(std::abs(dn_constant(2) - 1.0) <= 1e-15);
  CHECK(std::abs(dn_constant(3) - 3.0) <= 1e-14);
  const auto two = check_difference_inequality(std::vector<double>{0.3, -1.2});
  CHECK(std::abs(two.lhs - two.rhs) <= 1e-14);
  const auto eq = check_difference_inequality(std::vector<double>{1.0, 0.0, -1.0});
  CHECK(std::abs(eq.lhs - 6.0) <= 1e-14);
  CHECK(std::abs(eq.rhs - 6.0) <= 1e-13);

  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(7);
    for (double& x : a) x = rng.uniform(-1.0, 1.0);
    const auto s = check_difference_inequality(a);
    CHECK(s.lhs <= s.rhs * (1.0 + 1e-12));
  }
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(7), d = 1 + rng.below(6);
    std::vector<CVector> v(n, CVector(d));
    for (auto& x : v)
      for (auto& z : x) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const auto s = check_difference_inequality(v);
    CHECK(s.lhs <= s.rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("lower-bound probe") {
  const LowerBoundProbe p0 = lower_bound_probe(4, 0.0);
  CHECK(p0.c_of_tau == 1.0);
  CHECK(p0.product_norm == 1.0);

  // two lines at angle sqrt(2) tau: c and the product are both cos(sqrt(2) tau)
  const LowerBoundProbe p2 = lower_bound_probe(2, 0.3);
  CHECK(std::abs(p2.c_of_tau - std::cos(std::sqrt(2.0) * 0.3)) <= 1e-14);
  CHECK(std::abs(p2.product_norm - std::cos(std::sqrt(2.0) * 0.3)) <= 1e-14);

  const LowerBoundProbe p3 = lower_bound_probe(3, 0.1);
  CHECK(std::abs(p3.c_of_tau - 0.9950083277797614) <= 1e-13);
  CHECK(std::abs(p3.product_norm - 0.9950083277797614) <= 1e-13);
  CHECK(std::abs(p3.system_dixmier - p3.c_of_tau) <= 1e-9);
  const double u = 1.0 - p3.c_of_tau;
  const double k = fit_lower_bound_envelope(3).curvature;
  CHECK(p3.product_norm >= 1.0 - a_coefficient(3) * u - std::max(k, 0.0) * u * u - 1e-12);
  // at the unit Fiedler vector s1 = n |alpha|^2 - (sum alpha)^2 = n and s2 = alpha^T L alpha = lambda_2
  CHECK(std::abs(p3.s1 - 3.0) <= 1e-12);
  CHECK(std::abs(p3.s2 - 1.0) <= 1e-12);
}

TEST_CASE("construction value by inverting c(tau)") {
  CHECK(std::abs(lb_construction(4, 0.6) - 0.6401540104870609) <= 1e-9);
  CHECK(std::abs(lb_construction(4, 0.9) - 0.9117084724872376) <= 1e-9);
  CHECK(std::abs(lb_construction(5, 0.9) - 0.9228412269975496) <= 1e-9);
  CHECK(lb_construction(4, 0.3) == 0.0);
  CHECK(lb_construction(3, 1.0) == 1.0);
  // the construction reaches down to c = 1/4 for n = 3 and 1/3 for n = 4
  CHECK(lb_construction(3, 0.25 + 1e-6) > 0.0);
  CHECK(lb_construction(3, 0.25 - 1e-6) == 0.0);
  CHECK(lb_construction(4, 1.0 / 3.0 + 1e-6) > 0.0);
  CHECK(lb_construction(4, 1.0 / 3.0 - 1e-6) == 0.0);
}

TEST_CASE("envelope slope matches a_n") {
  for (int n : {3, 4, 5}) {
    const EnvelopeFit fit = fit_lower_bound_envelope(n);
    CHECK(std::abs(fit.slope - a_coefficient(n)) <= 0.02 * a_coefficient(n));
  }
}

TEST_CASE("bounds table") {
  const auto rows = bounds_table(3, {0.0, 0.25, 0.5, 1.0});
  const std::vector<double> want{0.0, 0.25, 0.5, 1.0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].f_closed.value() == want[i]);
    CHECK(!rows[i].f_solver.has_value());
    CHECK(rows[i].lb_construction <= rows[i].ub_ours);
  }
  for (const BoundRow& r : bounds_table(2, {0.0, 0.2, 0.5, 0.8, 1.0})) {
    CHECK(r.f_closed.value() == r.c);
    CHECK(r.c <= r.ub_ours + 1e-15);
    CHECK(std::abs(r.ub_ours * r.ub_ours - r.c / (2.0 - r.c)) <= 1e-15);
  }
  TableOptions opts;
  opts.with_solver = true;
  for (const BoundRow& r : bounds_table(4, {0.1, 0.5, 0.9}, opts)) {
    CHECK(r.lb_construction <= r.f_solver.value());
    CHECK(r.f_solver.value() <= r.ub_ours + 1e-6);
  }
  const auto one = bounds_table(2, {1.0});
  CHECK(one[0].ub_ours == 1.0);
  CHECK(one[0].ub_bgm == 1.0);
  CHECK(one[0].ub_bs == 1.0);
  CHECK(one[0].ub_quadratic == 1.0);
  CHECK(one[0].lb_construction == 1.0);
}
