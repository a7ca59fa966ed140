// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "roto/data_io.hpp"
#include "roto/gradient.hpp"
#include "roto/league.hpp"
#include "roto/oracle.hpp"
#include "roto/season.hpp"
#include "roto/stat_core.hpp"

using namespace roto;

namespace {

// 1
constexpr double kTableConsistencyTol = 1e-9;
// 2
constexpr double kGridTol = 0.01;
constexpr double kOriginTol = 3e-5;
// 3
constexpr int kGradientStates = 100;
constexpr double kGradientTol = 1e-3;
constexpr double kGradientStep = 1e-4;
// 4
constexpr double kIdentityTol = 1e-9;
// 5
constexpr double kSymmetricTol = 0.06;
constexpr int kCalibrationConfigs = 50;
constexpr std::int64_t kCalibrationDraws = 200000;
constexpr double kMinSpearman = 0.95;
// 6
constexpr int kConservationSeasons = 10000;
// 7
constexpr int kSeasonsPerDraft = 50;
constexpr std::uint64_t kExperimentSeed = 7;
constexpr double kPuntThreshold = 1.5;
// 8
constexpr std::int64_t kSqrtDraws = 1000000;
constexpr double kSqrtMeanTol = 0.01;
constexpr double kSqrtSdRelTol = 0.10;
// 9
constexpr std::size_t kMinDigits = 78;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Published rows quoted alongside the table transcription.
Outcome table_fidelity() {
  const auto& table = max_order_stats_table();
  bool literals = std::abs(table[1].mev - 0.564189584) == 0.0 &&
                  std::abs(table[11].mvar - 0.323636387) == 0.0 &&
                  std::abs(table[19].mev - 1.86747506) == 0.0;
  bool rows = true;
  for (int i = 0; i < 20; ++i) {
    rows = rows && table[static_cast<std::size_t>(i)].n == i + 1;
  }
  double worst = 0;
  int worst_n = 0;
  for (const auto& row : table) {
    const double gap = std::abs(row.mvar - (row.ex2 - row.mev * row.mev));
    if (gap > worst) {
      worst = gap;
      worst_n = row.n;
    }
  }
  const bool consistent = worst <= kTableConsistencyTol;
  return {literals && rows && consistent,
          fmt("20 rows %s, quoted literals %s, max |mvar-(ex2-mev^2)| = %.3g at n=%d (tol %.0e)",
              rows ? "ok" : "bad", literals ? "match" : "differ", worst, worst_n,
              kTableConsistencyTol)};
}

Outcome bvn_accuracy() {
  double worst = 0;
  for (int i = -20; i <= 20; ++i) {
    for (int j = -20; j <= 20; ++j) {
      for (int k = -2; k <= 2; ++k) {
        const double x = 0.1 * i;
        const double y = 0.1 * j;
        const double r = 0.1 * k;
        worst = std::max(worst, std::abs(bvn_cdf_approx(x, y, r) - bvn_cdf_reference(x, y, r)));
      }
    }
  }
  const double exact = 0.25 + std::asin(0.1) / (2.0 * std::numbers::pi);
  const double origin = std::abs(bvn_cdf_approx(0.0, 0.0, 0.1) - exact);
  return {worst <= kGridTol && origin <= kOriginTol,
          fmt("grid max error %.3g (tol %.2g), origin error %.3g (tol %.0e)", worst, kGridTol,
              origin, kOriginTol)};
}

Outcome gradient_correctness() {
  SeededRng rng(2024, 3);
  double worst = 0;
  int failures = 0;
  for (int s = 0; s < kGradientStates; ++s) {
    const auto st = random_state(9, 11, 2.0, 0.2, rng);
    const auto report = gradient_check(st.mu, st.shape, kGradientTol, kGradientStep);
    worst = std::max(worst, report.max_relative_error);
    failures += report.passed ? 0 : 1;
  }
  return {failures == 0, fmt("%d states, max relative error %.3g (tol %.0e, h %.0e), %d failing",
                             kGradientStates, worst, kGradientTol, kGradientStep, failures)};
}

Outcome analytic_identity() {
  SeededRng rng(2024, 4);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int cats = 1 + trial % 9;
    const int opps = 1 + (trial * 7) % 20;
    LeagueShape shape = LeagueShape::independent(cats, opps, 0.0);
    // strongly correlated rho: normalized Gram matrix of random vectors
    MatrixXd g(cats, cats);
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.normal() + (i % 2 == 0 ? 1.0 : -0.5);
    const MatrixXd gram = g * g.transpose();
    const VectorXd inv = gram.diagonal().cwiseSqrt().cwiseInverse();
    shape.rho = inv.asDiagonal() * gram * inv.asDiagonal();
    const double a = opponent_variance(shape);
    const double b = team_moments(MatrixXd(MatrixXd::Zero(cats, opps)), shape).sigma2_T;
    worst = std::max(worst, std::abs(a - b));
  }
  return {worst <= kIdentityTol, fmt("50 shapes, max |diff| %.3g (tol %.0e)", worst, kIdentityTol)};
}

Outcome calibration() {
  const auto sym = LeagueShape::independent(9, 11, 0.0);
  const double v = evaluate(MatrixXd(MatrixXd::Zero(9, 11)), sym).v;
  const double gap = std::abs(v - 1.0 / 12.0);

  CalibrationConfig cfg;
  cfg.configs = kCalibrationConfigs;
  cfg.draws = kCalibrationDraws;
  auto rank = [&](bool consistent) {
    cfg.consistent_shape = consistent;
    const auto cases = calibration_sweep(cfg, SeededRng(2024, 5));
    std::vector<double> analytic;
    std::vector<double> mc;
    for (const auto& c : cases) {
      analytic.push_back(c.analytic_v);
      mc.push_back(c.mc.p_win);
    }
    return spearman(analytic, mc);
  };
  const double consistent = rank(true);
  const double iid = rank(false);
  return {gap <= kSymmetricTol && consistent >= kMinSpearman,
          fmt("symmetric V %.4f (|V-1/12| %.4f, tol %.2g); spearman %.4f over %d leagues x %lld "
              "draws (min %.2f); iid sigma_c=0 sweep %.4f (reported)",
              v, gap, kSymmetricTol, consistent, kCalibrationConfigs,
              static_cast<long long>(kCalibrationDraws), kMinSpearman, iid)};
}

Outcome conservation() {
  const int teams = 12;
  const int cats = 9;
  SeededRng setup(2024, 6);
  MatrixXd projected(teams, cats);
  for (Eigen::Index i = 0; i < projected.size(); ++i) projected(i) = setup.normal();
  const MatrixXd factor = psd_factor(random_correlation(cats, 0.2, setup));
  const std::vector<bool> dir{true, true, true, true, true, true, false, true, true};
  const double expected = cats * (teams - 1) * teams / 2.0;
  SeededRng rng(2024, 7);
  int bad = 0;
  for (int s = 0; s < kConservationSeasons; ++s) {
    const auto season = simulate_season(projected, factor, dir, rng);
    bad += season.standings.totals.sum() == expected ? 0 : 1;
  }
  return {bad == 0, fmt("%d seasons, total %.0f each, %d violations", kConservationSeasons,
                        expected, bad)};
}

Outcome experiment() {
  const auto pool = load_projections(std::string(ROTO_DATA_DIR) + "/synthetic_pool.csv",
                                     default_categories());
  auto run = [&](double chi) {
    ExperimentConfig cfg;
    cfg.league.chi = chi;
    cfg.seasons_per_draft = kSeasonsPerDraft;
    cfg.master_seed = kExperimentSeed;
    cfg.punt_threshold = kPuntThreshold;
    return run_experiment({pool}, cfg, {"synthetic"});
  };
  const auto low = run(0.25);
  const auto high = run(0.75);
  const double base = 1.0 / low.teams;
  const bool a = low.focus_seasons >= 600 && low.mean_win_rate - low.mean_ci_halfwidth > base;
  const bool b = low.mean_win_rate - base >= high.mean_win_rate - base;
  const double punt_low = punt_frequency(low, "ft_pct", kPuntThreshold);
  const double punt_high = punt_frequency(high, "ft_pct", kPuntThreshold);
  const bool c = punt_low >= punt_high;
  return {a && b && c,
          fmt("(a) chi=0.25 H win rate %.3f +/- %.3f over %lld seasons vs %.4f %s; "
              "(b) advantage %.3f vs %.3f at chi=0.75 %s; (c) FT punt rate %.3f vs %.3f %s",
              low.mean_win_rate, low.mean_ci_halfwidth, static_cast<long long>(low.focus_seasons),
              base, a ? "ok" : "fail", low.mean_win_rate - base, high.mean_win_rate - base,
              b ? "ok" : "fail", punt_low, punt_high, c ? "ok" : "fail")};
}

Outcome sqrt_moments() {
  const auto m = sqrt_normal_moments(100.0, 5.0, kSqrtDraws, SeededRng(2024, 8));
  const double mean_err = std::abs(m.mean - 10.0);
  const double sd_err = std::abs(m.sd - 0.25) / 0.25;
  return {mean_err <= kSqrtMeanTol && sd_err <= kSqrtSdRelTol,
          fmt("n=%lld mean %.5f (tol %.2g), sd %.5f (rel err %.3f, tol %.2f)",
              static_cast<long long>(kSqrtDraws), m.mean, kSqrtMeanTol, m.sd, sd_err,
              kSqrtSdRelTol)};
}

Outcome scenario_digits() {
  const auto digits = scenario_count(12, 9).str().size();
  return {digits >= kMinDigits, fmt("%zu digits", digits)};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, table_fidelity}, {2, bvn_accuracy},   {3, gradient_correctness},
      {4, analytic_identity}, {5, calibration}, {6, conservation},
      {7, experiment},     {8, sqrt_moments},   {9, scenario_digits}};
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s  %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
