#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roto/gradient.hpp"
#include "roto/objective.hpp"

namespace roto {

enum class CategoryKind { Counting, Percentage };

struct Category {
  std::string name;
  CategoryKind kind = CategoryKind::Counting;
  bool higher_is_better = true;
  // Week-to-week scale: team sigma is tau * |N| for counting stats and
  // tau / |N| for percentage stats.
  double tau = 1.0;
};

/// pts, reb, ast, stl, blk, fg3m, tov, fg_pct, ft_pct.
std::vector<Category> default_categories();

/// Identity matrix sized for the default categories.
MatrixXd default_category_correlation();

struct PlayerProjection {
  std::string id;
  std::string name;
  // Counting categories: weekly mean. Percentage categories: success rate.
  std::vector<double> value;
  // Percentage categories: weekly attempts. Zero for counting categories.
  std::vector<double> volume;
  std::vector<std::string> tags;
};

using PlayerPool = std::vector<PlayerProjection>;

/// Checks per-player vector lengths, rates in [0, 1], volumes >= 0 and id
/// uniqueness. Throws ValidationError.
void validate_pool(const PlayerPool& pool, const std::vector<Category>& categories);

struct HScoreConfig {
  int candidate_width = 40;
  int optimizer_steps = 200;
  double step_size = 0.05;  // fraction of the budget radius per step
  double gradient_tolerance = 1e-6;
  // Steering per future pick, in standard deviations of the category
  // profiles available near that pick.
  double future_scale = 1.0;
};

struct LeagueConfig {
  int teams = 12;
  int roster_size = 13;
  std::vector<Category> categories = default_categories();
  MatrixXd rho = default_category_correlation();
  double chi = 0.5;
  // Agents assume season-total sigma = week-to-week sigma * chi^basis_chi_power.
  double basis_chi_power = 1.0;
  HScoreConfig hscore;

  Eigen::Index num_categories() const { return static_cast<Eigen::Index>(categories.size()); }
  std::vector<bool> directions() const;
  void validate() const;
};

/// Per-category sigma of season totals used to normalize differentials.
struct ScoringBasis {
  VectorXd week_sigma;  // team-level week-to-week sigma, category units
  VectorXd sigma;       // season-total sigma seen by the agents

  static ScoringBasis from_config(const LeagueConfig& config);
};

/// Category sums for a set of players. Percentage categories keep made and
/// attempted totals so the team rate is volume weighted.
class TeamAggregate {
 public:
  explicit TeamAggregate(const std::vector<Category>& categories);

  void add(const PlayerProjection& p, double weight = 1.0);
  /// Team value in category units (rate for percentage categories).
  double value(std::size_t c) const;
  VectorXd values() const;

 private:
  const std::vector<Category>* categories_;
  std::vector<double> sum_;
  std::vector<double> attempts_;
};

using Roster = std::vector<int>;  // indices into the pool

struct MatchupContext {
  MatrixXd mu;  // |C| x |O|
  LeagueShape shape;
};

/// Normalized matchup matrix of `mine` against each opponent roster:
/// mu(c, o) = +-(T_c - O_oc) / (sqrt(2) sigma_c), sign flipped for
/// lower-is-better categories. Rosters shorter than the roster size are padded
/// with `phantom`. sigma_c = sqrt(2) * sample sd of mu(c, .) over opponents,
/// or 1 when fewer than two opponents have distinguishable rosters.
MatchupContext build_matchup_state(const Roster& mine, const std::vector<Roster>& opponents,
                                   const PlayerPool& pool, const LeagueConfig& config,
                                   const ScoringBasis& basis,
                                   const PlayerProjection* phantom = nullptr);

/// Static per-player value: standardized weekly production summed over
/// categories. Counting stats use (x - mean) / sqrt(sd^2 + (tau chi^p)^2)
/// over the top K*|N| players; percentage stats use the volume-weighted rate
/// deviation (vol / mean vol)(rate - league rate), standardized the same way.
std::vector<double> gscores(const PlayerPool& pool, const LeagueConfig& config);

/// Indices sorted by G-score descending, ties broken by player id.
std::vector<int> gscore_rank(const std::vector<int>& candidates, const PlayerPool& pool,
                             const std::vector<double>& scores);

/// Pearson correlation across the top K*|N| players by G-score of the
/// per-category player values; percentage categories enter as
/// volume-weighted rate deviations. Raw statistics, so turnovers are not
/// sign-flipped.
MatrixXd estimate_category_correlation(const PlayerPool& pool, const LeagueConfig& config);

/// Snake order: pick p belongs to seat p mod K on even rounds and
/// K - 1 - p mod K on odd rounds.
int seat_for_pick(int pick, int teams);

struct DraftState {
  int teams = 0;
  int roster_size = 0;
  std::vector<Roster> rosters;
  std::vector<char> taken;  // per pool index
  std::vector<int> picks;   // global pick order, pool indices

  DraftState() = default;
  DraftState(int teams, int roster_size, std::size_t pool_size);

  int current_pick() const { return static_cast<int>(picks.size()); }
  int round() const { return current_pick() / teams; }
  int seat_on_clock() const { return seat_for_pick(current_pick(), teams); }
  bool complete() const { return current_pick() >= teams * roster_size; }
  std::vector<int> available() const;

  /// Throws ValidationError if the seat is not on the clock, the player is
  /// taken or out of range, or the draft is complete.
  void apply_pick(int seat, int player);
  /// Reverts the most recent pick.
  void undo_last();
};

/// Replacement-level projection: the median undrafted player by G-score.
PlayerProjection replacement_player(const DraftState& state, const PlayerPool& pool,
                                    const std::vector<double>& scores);

struct CandidateEvaluation {
  int player = -1;
  double v = 0;
  double z = 0;  // mu_D / sigma_D; V = Phi(z), ranks candidates past saturation
  double gscore = 0;
  MatrixXd mu;  // optimized matchup matrix (roster + candidate + future picks)
  LeagueShape shape;
  VectorXd future;  // optimized per-category future-pick contribution
  VectorXd category_win_probability;  // mean over opponents of Phi(mu(c, o))
};

/// Maximizes V over the future-pick shift x = factor * u, ||u||_2 <= budget,
/// applied to every opponent column alike. `factor` (|C| x |C|) maps a unit
/// steering direction to the category change one future pick can buy; the
/// budget is the number of remaining picks. Projected normalized gradient
/// ascent on z = mu_D / sigma_D from u = 0 with a linearly decaying step.
/// Returns the optimized x.
VectorXd optimize_future_picks(const MatrixXd& base_mu, const LeagueShape& shape,
                               const MatrixXd& factor, double budget, const HScoreConfig& config,
                               ObjectiveWithGradient<double>* best = nullptr);

/// Index of the best evaluation: highest V, then highest z, then the earlier
/// entry.
std::size_t best_candidate(const std::vector<CandidateEvaluation>& evals);

/// Evaluates the top `width` available players by G-score for `seat`,
/// sorted by V descending (ties on V by z, then G-score order).
std::vector<CandidateEvaluation> evaluate_candidates(const DraftState& state, int seat,
                                                     const PlayerPool& pool,
                                                     const LeagueConfig& config,
                                                     const std::vector<double>& scores,
                                                     int width);

/// Evaluation of one available player for `seat`, identical to its entry in
/// evaluate_candidates.
CandidateEvaluation evaluate_candidate(const DraftState& state, int seat, const PlayerPool& pool,
                                       const LeagueConfig& config,
                                       const std::vector<double>& scores, int player);

/// Evaluation of the seat's current roster with no candidate added (the open
/// slot is covered by the future-pick budget).
CandidateEvaluation evaluate_baseline(const DraftState& state, int seat, const PlayerPool& pool,
                                      const LeagueConfig& config,
                                      const std::vector<double>& scores);

/// Argmax of V over evaluate_candidates(...) for the seat on the clock.
int hscore_pick(const DraftState& state, const PlayerPool& pool, const LeagueConfig& config,
                const std::vector<double>& scores);

enum class AgentKind { GScore, HScore };

/// Full snake draft. Deterministic: G-score agents take the best remaining
/// player, H-score agents call hscore_pick.
DraftState run_draft(const std::vector<AgentKind>& agents, const PlayerPool& pool,
                     const LeagueConfig& config);

}  // namespace roto
