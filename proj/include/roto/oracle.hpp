#pragma once

// Monte Carlo ground truth for the analytic objective. Generative model: each
// team's category score is its mean plus Normal noise with variance 1/2 per
// category (so a matchup differential has unit variance) and cross-category
// correlation rho; teams are independent.

#include <cstdint>
#include <vector>

#include "roto/objective.hpp"
#include "roto/rng.hpp"

namespace roto {

struct WinProbabilityEstimate {
  double p_win = 0;       // team 0 strictly ahead of every opponent
  double p_tie = 0;       // team 0 shares the top total
  double p_share = 0;     // expected win share, ties split evenly
  double ci_halfwidth = 0;  // 95%, for p_win
  std::int64_t draws = 0;
  bool rho_repaired = false;
};

/// Team score means with team 0 at zero and opponent o at -mu(c, o), so that
/// mean differentials reproduce the matchup matrix. Returns (|O|+1) x |C|.
MatrixXd team_means_from_matchups(const MatrixXd& matchups);

/// `means` is K x C, row 0 is the team of interest. Draws are split into
/// fixed chunks with their own derived streams, so the estimate does not
/// depend on `workers`.
WinProbabilityEstimate mc_win_probability(const MatrixXd& means, const MatrixXd& rho,
                                          std::int64_t draws, const SeededRng& rng,
                                          int workers = 1);

struct VarianceEstimate {
  double mean = 0;
  double ci_halfwidth = 0;
  std::int64_t scenarios = 0;
  std::int64_t inner_draws = 0;
};

/// E(sigma_M^2) by simulation: each scenario draws a generic opponent's
/// matchup means mu(c, o) ~ N(0, sigma_c^2), then measures the variance of
/// that opponent's surpass count over `n_inner` seasons. With every sigma_c
/// zero there is only one scenario, which receives all n_scenarios * n_inner
/// draws.
VarianceEstimate mc_opponent_variance(const LeagueShape& shape, std::int64_t n_scenarios,
                                      std::int64_t n_inner, const SeededRng& rng);

struct SqrtMoments {
  double mean = 0;
  double sd = 0;
};

/// Sample moments of sqrt(max(X, 0)) for X ~ N(mu, sigma^2). Requires
/// mu > 5 sigma; sigma == 0 returns (sqrt(mu), 0) without sampling.
SqrtMoments sqrt_normal_moments(double mu, double sigma, std::int64_t n, SeededRng rng);

/// Symmetric square-root factor S with S S^T = m for a PSD m.
MatrixXd psd_factor(const MatrixXd& m);

/// Random positive-definite correlation matrix with off-diagonal entries
/// drawn uniformly in [-max_offdiag, max_offdiag] (redrawn until PD).
MatrixXd random_correlation(Eigen::Index n, double max_offdiag, SeededRng& rng);

struct RandomState {
  MatrixXd mu;
  LeagueShape shape;
};

/// mu(c, o) ~ U(-max_abs_mu, max_abs_mu), rho from random_correlation and
/// sigma_c ~ U(0, 1).
RandomState random_state(Eigen::Index categories, int opponents, double max_abs_mu,
                         double max_offdiag, SeededRng& rng);

/// Spearman rank correlation; tied values receive their average rank.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct CalibrationConfig {
  int configs = 50;
  std::int64_t draws = 200000;
  int categories = 9;
  int opponents = 11;
  double max_offdiag = 0.2;
  // true: mu(c, o) = t_c - m_oc with opponent means m_oc ~ N(0, s_c^2 / 2)
  // and sigma_c set to sqrt(2) times the empirical spread of m_.c, as a
  // drafted league produces. false: iid mu(c, o) ~ U(-1, 1), sigma_c = 0.
  bool consistent_shape = true;
  int workers = 1;
};

struct CalibrationCase {
  MatrixXd mu;
  LeagueShape shape;
  double analytic_v = 0;
  WinProbabilityEstimate mc;
};

/// Analytic V against the Monte Carlo oracle over random leagues. Case i uses
/// rng.derive(i) for its configuration and MC draws.
std::vector<CalibrationCase> calibration_sweep(const CalibrationConfig& config,
                                               const SeededRng& rng);

}  // namespace roto
