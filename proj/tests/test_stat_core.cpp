#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "roto/stat_core.hpp"

using namespace roto;

namespace {

// Phi2(x, y, rho) = int_{-inf}^{x} phi(s) Phi((y - rho s) / sqrt(1 - rho^2)) ds,
// integrated with Gauss-Kronrod as an oracle independent of the library path.
double bvn_by_conditioning(double x, double y, double rho) {
  const double root = std::sqrt(1.0 - rho * rho);
  auto f = [&](double s) { return norm_pdf(s) * norm_cdf((y - rho * s) / root); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, -std::numeric_limits<double>::infinity(), x, 15, 1e-14);
}

}  // namespace

TEST_CASE("normal pdf and cdf") {
  CHECK(norm_cdf(0.0) == 0.5);
  CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-10));
  // 0.5 (1 + erf(1/sqrt 2)) to 13 digits.
  CHECK(std::abs(norm_cdf(1.0) - 0.8413447460685429) < 1e-12);
  CHECK(std::abs(norm_cdf(-3.0) - 0.0013498980316301) < 1e-15);
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    CHECK(std::abs(norm_cdf(x) + norm_cdf(-x) - 1.0) <= 1e-12);
  }
  CHECK(norm_cdf(-40.0) >= 0.0);
  CHECK(norm_cdf(40.0) == 1.0);
}

TEST_CASE("bvn approximation") {
  CHECK(bvn_cdf_approx(0.0, 0.0, 0.0) == 0.25);
  CHECK(bvn_cdf_approx(0.0, 0.0, 0.1) == doctest::Approx(0.2659155).epsilon(1e-7));
  const double exact = 0.25 + std::asin(0.1) / (2.0 * std::numbers::pi);
  CHECK(std::abs(bvn_cdf_approx(0.0, 0.0, 0.1) - exact) <= 3e-5);
  for (double x = -2.0; x <= 2.0; x += 0.5) {
    for (double y = -2.0; y <= 2.0; y += 0.5) {
      CHECK(bvn_cdf_approx(x, y, 0.0) == norm_cdf(x) * norm_cdf(y));
    }
  }
  CHECK(bvn_cdf_approx(3.0, 3.0, 1.0) <= 1.0);
  CHECK(bvn_cdf_approx(-6.0, -6.0, -1.0) >= 0.0);
}

TEST_CASE("bvn reference against the arcsin identity and conditioning") {
  for (double rho : {-0.95, -0.5, -0.2, 0.0, 0.1, 0.3, 0.7, 0.99}) {
    const double exact = 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
    CHECK(std::abs(bvn_cdf_reference(0.0, 0.0, rho) - exact) <= 1e-10);
  }
  for (double x : {-2.0, -0.7, 0.0, 1.3, 2.5}) {
    for (double y : {-1.5, 0.4, 2.0}) {
      CHECK(std::abs(bvn_cdf_reference(x, y, 0.0) - norm_cdf(x) * norm_cdf(y)) <= 1e-12);
      for (double rho : {-0.6, -0.2, 0.2, 0.6}) {
        CHECK(std::abs(bvn_cdf_reference(x, y, rho) - bvn_by_conditioning(x, y, rho)) <= 1e-9);
      }
    }
  }
  CHECK(bvn_cdf_reference(0.0, 0.0, 1.0) == 0.5);
  CHECK(bvn_cdf_reference(0.3, 0.3, -1.0) == doctest::Approx(2 * norm_cdf(0.3) - 1));
  CHECK_THROWS_AS(bvn_cdf_reference(0.0, 0.0, 1.5), ValidationError);
}

TEST_CASE("bvn approximation error over the small-rho grid") {
  double worst = 0.0;
  for (int i = -20; i <= 20; ++i) {
    for (int j = -20; j <= 20; ++j) {
      for (int k = -2; k <= 2; ++k) {
        const double x = 0.1 * i;
        const double y = 0.1 * j;
        const double rho = 0.1 * k;
        worst = std::max(worst, std::abs(bvn_cdf_approx(x, y, rho) - bvn_cdf_reference(x, y, rho)));
      }
    }
  }
  CHECK(worst <= 0.01);
}

TEST_CASE("max order statistics table") {
  const auto& t = max_order_stats_table();
  CHECK(t[0].n == 1);
  CHECK(t[0].mev == 0.0);
  CHECK(t[0].ex2 == 1.0);
  CHECK(t[0].mvar == 1.0);
  CHECK(t[1].mev == 0.564189584);
  CHECK(t[1].mvar == 0.681690114);
  CHECK(t[10].mev == 1.586436352);
  CHECK(t[10].mvar == 0.333247443);
  CHECK(t[11].mvar == 0.323636387);
  CHECK(t[19].mev == 1.86747506);
  // E[max of 2] = 1/sqrt(pi), Var = 1 - 1/pi.
  CHECK(std::abs(t[1].mev - 1.0 / std::sqrt(std::numbers::pi)) < 5e-10);
  CHECK(std::abs(t[1].mvar - (1.0 - 1.0 / std::numbers::pi)) < 5e-10);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t[i].n == static_cast<int>(i) + 1);
    // Nine-decimal rounding of ex2 and mev bounds the identity residual by
    // 5e-10 (1 + 2 mev), about 2.4e-9 at n = 20.
    CHECK(std::abs(t[i].mvar - (t[i].ex2 - t[i].mev * t[i].mev)) <= 5e-10 * (2.0 + 2.0 * t[i].mev));
    if (i > 0) {
      CHECK(t[i].mev > t[i - 1].mev);
    }
    if (i > 1) {
      CHECK(t[i].mvar <= t[i - 1].mvar);
    }
  }
  const auto s = max_order_stats(11);
  CHECK(s.mev == 1.586436352);
  CHECK(s.mvar == 0.333247443);
  CHECK_THROWS_AS(max_order_stats(0), UnsupportedLeagueSize);
  CHECK_THROWS_AS(max_order_stats(21), UnsupportedLeagueSize);
}

TEST_CASE("scenario count") {
  CHECK(scenario_count(2, 1) == 1);
  CHECK(scenario_count(3, 2) == 12);
  CHECK(scenario_count(4, 1) == 6);
  const auto big = scenario_count(12, 9);
  CHECK(big.str().size() > 77);
  CHECK(big.str().size() == 78);
  // 479001600^9 / 12
  boost::multiprecision::cpp_int f = 479001600;
  CHECK(big == boost::multiprecision::pow(f, 9) / 12);
  CHECK_THROWS_AS(scenario_count(1, 9), ValidationError);
  CHECK_THROWS_AS(scenario_count(12, 0), ValidationError);
}

TEST_CASE("nearest psd") {
  const MatrixXd id = MatrixXd::Identity(4, 4);
  CHECK(nearest_psd(id).isApprox(id));

  MatrixXd m(3, 3);
  // eigenvalues 1.01, 1 + 0.505 +- ..., built with a min eigenvalue of -0.01
  const double a = 0.505;
  m << 1, a, -a, a, 1, a, -a, a, 1;
  Eigen::SelfAdjointEigenSolver<MatrixXd> before(m);
  CHECK(before.eigenvalues().minCoeff() == doctest::Approx(-0.01));
  const MatrixXd r = nearest_psd(m);
  Eigen::SelfAdjointEigenSolver<MatrixXd> after(r);
  CHECK(after.eigenvalues().minCoeff() >= -1e-12);
  CHECK((r - m).cwiseAbs().maxCoeff() <= 0.02);
  for (int i = 0; i < 3; ++i) {
    CHECK(r(i, i) == 1.0);
  }
  CHECK(is_symmetric(r));
  // idempotent on its own output
  CHECK((nearest_psd(r) - r).cwiseAbs().maxCoeff() < 1e-12);

  MatrixXd bad = id;
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(nearest_psd(bad), ValidationError);
  CHECK_THROWS_AS(nearest_psd(MatrixXd(2, 3)), ValidationError);
}

TEST_CASE("validate correlation") {
  MatrixXd r = MatrixXd::Identity(3, 3);
  CHECK_NOTHROW(validate_correlation(r));
  r(0, 0) = 0.9;
  CHECK_THROWS_AS(validate_correlation(r), ValidationError);
  r = MatrixXd::Identity(3, 3);
  r(0, 1) = r(1, 0) = 1.2;
  CHECK_THROWS_AS(validate_correlation(r), ValidationError);
}
