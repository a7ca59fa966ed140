#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roto/draft.hpp"
#include "roto/league.hpp"
#include "roto/rng.hpp"

namespace roto {

struct NoiseModelConfig {
  std::vector<Category> categories;  // tau per category
  int roster_size = 13;
  double chi = 0.5;
  // Per-category team sigma = week-to-week sigma * chi^chi_power.
  double chi_power = 2.0;
  MatrixXd rho;

  static NoiseModelConfig from_league(const LeagueConfig& league);
  void validate() const;
};

/// Category covariance of the per-team season noise: sigma_c from tau and
/// roster size (tau |N| counting, tau / |N| percentage), scaled by
/// chi^chi_power, combined as rho_ab sigma_a sigma_b with rho PSD-repaired.
MatrixXd build_noise_covariance(const NoiseModelConfig& config);

/// Projected season values per team: K x C (rates for percentage categories).
MatrixXd projected_team_values(const DraftState& draft, const PlayerPool& pool,
                               const std::vector<Category>& categories);

struct SeasonResult {
  MatrixXd values;  // K x C realized category values
  Standings standings;
};

/// One season: projected values plus one correlated Gaussian draw per team,
/// then Rotisserie scoring. `noise_factor` is a square root of the noise
/// covariance (see psd_factor).
SeasonResult simulate_season(const MatrixXd& projected, const MatrixXd& noise_factor,
                             const std::vector<bool>& higher_is_better, SeededRng& rng);

enum class AgentLayout { AllGScore, RotatingHScore };

struct ExperimentConfig {
  LeagueConfig league;
  AgentLayout layout = AgentLayout::RotatingHScore;
  int seasons_per_draft = 5;
  std::uint64_t master_seed = 1;
  int workers = 1;
  // Replace league.rho with the player-level correlation of each pool.
  bool estimate_rho_from_pool = true;
  double noise_chi_power = 2.0;
  double punt_threshold = 1.5;
};

/// One drafted team followed through its seasons.
struct TeamRecord {
  int batch = 0;
  int seat = 0;
  double win_rate = 0;
  std::vector<double> mean_standard_points;  // per category
  std::vector<std::string> players;          // drafted ids, pick order
  std::vector<bool> punts;                   // per category, below threshold
};

struct SimReport {
  int schema_version = 1;
  std::string layout;  // "rotating-h" or "all-g"
  double chi = 0;
  int teams = 0;
  int roster_size = 0;
  std::vector<std::string> categories;
  std::uint64_t master_seed = 0;
  int seasons_per_draft = 0;
  double punt_threshold = 1.5;
  std::vector<std::string> batch_labels;
  // batch x seat. Rotating layout: H-score win rate when drafting from that
  // seat. All-G layout: win rate of that seat.
  std::vector<std::vector<double>> win_rate;
  std::vector<double> seat_win_rate;
  std::vector<double> seat_ci_halfwidth;
  double mean_win_rate = 0;
  double mean_ci_halfwidth = 0;
  std::int64_t focus_seasons = 0;  // seasons behind mean_win_rate
  // seat x category mean standard points of the focus team.
  std::vector<std::vector<double>> category_points;
  std::vector<TeamRecord> teams_detail;
};

/// Head-to-head protocol. For each pool (batch) and seat, drafts with one H-score
/// agent at that seat against G-score agents (or all G-score), then samples
/// `seasons_per_draft` seasons. Season noise for (batch, seat, season) comes
/// from SeededRng(master_seed, batch).derive(seat).derive(season), so results
/// do not depend on the worker count.
SimReport run_experiment(const std::vector<PlayerPool>& pools, const ExperimentConfig& config,
                         const std::vector<std::string>& batch_labels = {});

/// Flags categories whose mean standard points fall below `threshold`, one
/// row per team record.
std::vector<std::vector<bool>> detect_punts(const SimReport& report, double threshold);

/// Fraction of team records flagged in `category`.
double punt_frequency(const SimReport& report, const std::string& category, double threshold);

struct SyntheticPoolConfig {
  int players = 260;
  double low_ft_fraction = 0.06;
};

/// Synthetic pool for the default categories: guards, wings, bigs and a small
/// group of strong bigs with very poor free-throw shooting (tagged "low-ft").
PlayerPool generate_synthetic_pool(const SyntheticPoolConfig& config, SeededRng rng);

}  // namespace roto
