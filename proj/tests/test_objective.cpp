#include <cmath>
#include <numeric>

#include "doctest.h"
#include "roto/objective.hpp"
#include "roto/oracle.hpp"

using namespace roto;

namespace {

constexpr double kPi = std::numbers::pi;
const double kPhi0 = 1.0 / std::sqrt(2.0 * kPi);

void check_same(const ObjectiveBreakdown& a, const ObjectiveBreakdown& b, double tol = 1e-12) {
  CHECK(a.mu_T == doctest::Approx(b.mu_T).epsilon(tol));
  CHECK(a.sigma2_T == doctest::Approx(b.sigma2_T).epsilon(tol));
  CHECK(a.e_sigma2_M == doctest::Approx(b.e_sigma2_M).epsilon(tol));
  CHECK(a.mu_L == doctest::Approx(b.mu_L).epsilon(tol));
  CHECK(a.sigma2_L == doctest::Approx(b.sigma2_L).epsilon(tol));
  CHECK(a.mu_D == doctest::Approx(b.mu_D).epsilon(tol));
  CHECK(a.sigma2_D == doctest::Approx(b.sigma2_D).epsilon(tol));
  CHECK(a.v == doctest::Approx(b.v).epsilon(tol));
}

}  // namespace

TEST_CASE("helpers at the symmetric point") {
  const MatrixXd zero = MatrixXd::Zero(2, 3);
  const auto h = helpers_T(zero, 0, 0);
  CHECK(h.F_a == doctest::Approx(1.196827).epsilon(1e-6));
  // brute-force F^2 - G
  double F = 0, G = 0;
  for (int o = 0; o < 3; ++o) {
    F += kPhi0;
    G += kPhi0 * kPhi0;
  }
  CHECK(h.H_ab == doctest::Approx(F * F - G));
  CHECK(h.H_ab == doctest::Approx(0.954930).epsilon(1e-6));
  CHECK(h.H_ab == doctest::Approx(kPhi0 * kPhi0 * 3 * 2));
  const auto off = helpers_T(zero, 0, 1);
  CHECK(off.H_ab == doctest::Approx(1.909859).epsilon(1e-6));
  CHECK_THROWS_AS(helpers_T(zero, 0, 2), ValidationError);

  auto shape = LeagueShape::independent(2, 3, 0.0);
  CHECK(helper_H_M(shape, 0, 0) == doctest::Approx(6.0 / (2 * kPi)));
  CHECK(helper_H_M(shape, 0, 1) == doctest::Approx(12.0 / (2 * kPi)));
  shape.sigma_c.setOnes();
  CHECK(helper_H_M(shape, 0, 0) == doctest::Approx(6.0 / (4 * kPi)));
  CHECK(helper_H_M(shape, 1, 1) == doctest::Approx(0.477465).epsilon(1e-6));
}

TEST_CASE("opponent variance") {
  auto shape = LeagueShape::independent(2, 3, 0.0);
  // 3 * 2 * acos(0) / 2pi + (2 * 6 / 2pi) / 2
  CHECK(opponent_variance(shape) == doctest::Approx(1.5 + 6.0 / (2 * kPi)));
  CHECK(opponent_variance(shape) == doctest::Approx(2.454930).epsilon(1e-6));

  // The surpass count of one opponent in a category is a sum of |O| indicators
  // that share that opponent's score: pairwise covariance 1/3 - 1/4, so the
  // exact variance is |O|/4 + |O|(|O|-1)/12 per category (2.5 here). The
  // first-order bivariate approximation lands 1.8% low.
  CHECK(opponent_variance(shape) / 2.5 == doctest::Approx(0.982).epsilon(1e-3));

  // sigma_c -> infinity kills the Bernoulli term
  shape.sigma_c.setConstant(1e9);
  CHECK(opponent_variance(shape) < 1e-6);
}

TEST_CASE("team moments at the symmetric point") {
  const auto shape = LeagueShape::independent(9, 11, 0.0);
  const MatrixXd zero = MatrixXd::Zero(9, 11);
  const auto t = team_moments(zero, shape);
  CHECK(t.mu_T == 49.5);
  // 99/4 + 9 * 110 phi(0)^2 / 2
  const double by_hand = 99.0 / 4.0 + 9.0 * 110.0 * kPhi0 * kPhi0 / 2.0;
  CHECK(t.sigma2_T == doctest::Approx(by_hand).epsilon(1e-13));
  CHECK(t.sigma2_T == doctest::Approx(103.5317).epsilon(1e-6));
  // Exact: 9 * (11/4 + 110/12) = 107.25; the approximation is 3.5% low.
  CHECK(t.sigma2_T / 107.25 == doctest::Approx(0.9653).epsilon(1e-3));

  const MatrixXd sure = MatrixXd::Constant(9, 11, 8.0);
  const auto s = team_moments(sure, shape);
  CHECK(s.mu_T == doctest::Approx(99.0));
  CHECK(s.sigma2_T < 1e-9 + 1e-12);
  CHECK(s.sigma2_T >= kSigma2TFloor);

  CHECK_THROWS_AS(team_moments(MatrixXd(MatrixXd::Zero(9, 10)), shape), ValidationError);
  MatrixXd nan = zero;
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(team_moments(nan, shape), ValidationError);
}

TEST_CASE("gap moments") {
  const auto shape = LeagueShape::independent(9, 11, 0.0);
  auto g = gap_moments(1.0, shape);
  CHECK(g.mu_L == 1.586436352);
  CHECK(g.sigma2_L == 0.333247443);
  g = gap_moments(0.0, shape);
  CHECK(g.mu_L == 0.0);
  CHECK(g.sigma2_L == 0.0);
  const auto two = LeagueShape::independent(9, 2, 0.0);
  CHECK(gap_moments(4.0, two).mu_L == doctest::Approx(1.128379).epsilon(1e-6));
  CHECK_THROWS_AS(gap_moments(-1.0, shape), ValidationError);
}

TEST_CASE("differential and v") {
  const auto shape = LeagueShape::independent(9, 11, 0.0);
  const auto avg = differential_and_v(49.5, 10.0, 3.0, 1.0, shape);
  CHECK(avg.mu_D == doctest::Approx(-3.0));
  // |O| = 4 keeps the average-team arithmetic exact: 18 * 5/4 = 9 * 5/2.
  const auto four = LeagueShape::independent(9, 4, 0.0);
  const auto even = differential_and_v(18.0, 10.0, 0.0, 1.0, four);
  CHECK(even.mu_D == 0.0);
  CHECK(even.v == 0.5);
  CHECK(differential_and_v(20.0, 0.0, 0.0, 0.0, four).v == 1.0);
  CHECK(differential_and_v(16.0, 0.0, 0.0, 0.0, four).v == 0.0);
  CHECK(differential_and_v(18.0, 0.0, 0.0, 0.0, four).v == 0.5);
  CHECK_THROWS_AS(differential_and_v(49.5, -1.0, 0.0, 0.0, shape), ValidationError);

  // v strictly increasing in mu_T with everything else held
  double last = -1;
  for (double m = 30; m <= 80; m += 2.5) {
    const double v = differential_and_v(m, 50.0, 5.0, 10.0, shape).v;
    CHECK(v > last);
    last = v;
  }
}

TEST_CASE("symmetric league of twelve") {
  const auto shape = LeagueShape::independent(9, 11, 0.0);
  const MatrixXd zero = MatrixXd::Zero(9, 11);
  const auto bd = evaluate(zero, shape);
  CHECK(bd.v > 0.0);
  CHECK(bd.v < 0.5);
  CHECK(bd.mu_D == doctest::Approx(-bd.mu_L).epsilon(1e-12));
  CHECK(bd.v == doctest::Approx(0.092).epsilon(0.01));
  CHECK(std::abs(bd.v - 1.0 / 12.0) <= 0.06);
  // Full chain by hand.
  const double e = opponent_variance(shape);
  const double mu_L = 1.586436352 * std::sqrt(e);
  const double s2 = 12.0 / 11.0 * bd.sigma2_T + 0.333247443 * e;
  CHECK(bd.v == doctest::Approx(norm_cdf(-mu_L / std::sqrt(s2))).epsilon(1e-14));

  const MatrixXd up = MatrixXd::Constant(9, 11, 3.0);
  CHECK(evaluate(up, shape).v > bd.v);
}

TEST_CASE("identity between team and opponent variance at sigma_c = 0") {
  SeededRng rng(11, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const int nc = 1 + trial % 9;
    const int no = 1 + (trial * 7) % 20;
    LeagueShape shape;
    shape.num_opponents = no;
    shape.rho = random_correlation(nc, 0.3, rng);
    shape.sigma_c = VectorXd::Zero(nc);
    const auto t = team_moments(MatrixXd(MatrixXd::Zero(nc, no)), shape);
    CHECK(std::abs(opponent_variance(shape) - t.sigma2_T) <= 1e-9);
  }
}

TEST_CASE("permutation invariance and equivariance") {
  SeededRng rng(5, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_state(6, 7, 2.0, 0.2, rng);
    const auto base = evaluate(s.mu, s.shape);

    std::vector<int> cols(7);
    std::iota(cols.begin(), cols.end(), 0);
    std::reverse(cols.begin(), cols.end());
    std::swap(cols[1], cols[4]);
    MatrixXd permuted(6, 7);
    for (int o = 0; o < 7; ++o) permuted.col(o) = s.mu.col(cols[o]);
    check_same(evaluate(permuted, s.shape), base);

    Eigen::PermutationMatrix<Eigen::Dynamic> p(6);
    p.indices() << 3, 0, 5, 1, 2, 4;
    LeagueShape ps = s.shape;
    ps.rho = p * s.shape.rho * p.transpose();
    ps.sigma_c = p * s.shape.sigma_c;
    check_same(evaluate(MatrixXd(p * s.mu), ps), base, 1e-11);
  }
}

TEST_CASE("bernoulli term peaks at zero") {
  for (double m = -4.0; m <= 4.0; m += 0.125) {
    const double p = norm_cdf(m);
    if (m == 0.0) {
      CHECK(p * (1 - p) == 0.25);
    } else {
      CHECK(p * (1 - p) < 0.25);
    }
  }
}

TEST_CASE("finite outputs and range") {
  SeededRng rng(17, 0);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = random_state(9, 11, 6.0, 0.2, rng);
    const auto bd = evaluate(s.mu, s.shape);
    CHECK(std::isfinite(bd.v));
    CHECK(std::isfinite(bd.mu_D));
    CHECK(bd.sigma2_D > 0);
    CHECK(bd.v >= 0.0);
    CHECK(bd.v <= 1.0);
    CHECK(bd.mu_T >= 0.0);
    CHECK(bd.mu_T <= 99.0);
    CHECK(bd.sigma2_T >= kSigma2TFloor);
  }
}

TEST_CASE("shape validation") {
  auto shape = LeagueShape::independent(3, 21, 0.0);
  CHECK_THROWS_AS(shape.validate(), UnsupportedLeagueSize);
  shape = LeagueShape::independent(3, 0, 0.0);
  CHECK_THROWS_AS(shape.validate(), ValidationError);
  shape = LeagueShape::independent(3, 5, -0.1);
  CHECK_THROWS_AS(shape.validate(), ValidationError);
  shape = LeagueShape::independent(3, 5, 0.0);
  shape.sigma_c.resize(2);
  CHECK_THROWS_AS(shape.validate(), ValidationError);
}

TEST_CASE("long double instantiation agrees") {
  const auto s = LeagueShape::independent(9, 11, 0.0);
  LeagueShapeT<long double> sl;
  sl.num_opponents = 11;
  sl.rho = s.rho.cast<long double>();
  sl.sigma_c = s.sigma_c.cast<long double>();
  const auto a = evaluate(MatrixXd::Zero(9, 11).eval(), s);
  const auto b = evaluate(Matrix<long double>::Zero(9, 11).eval(), sl);
  CHECK(static_cast<double>(b.v) == doctest::Approx(a.v).epsilon(1e-13));
}
