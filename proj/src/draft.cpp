#include "roto/draft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "roto/oracle.hpp"

namespace roto {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double chi_scale(const LeagueConfig& config) { return std::pow(config.chi, config.basis_chi_power); }

// Per-category normalized team values; mu(c, o) is the difference of two rows.
VectorXd normalized(const VectorXd& values, const ScoringBasis& basis,
                    const std::vector<bool>& directions) {
  VectorXd out(values.size());
  for (Eigen::Index c = 0; c < values.size(); ++c) {
    const double sign = directions[static_cast<std::size_t>(c)] ? 1.0 : -1.0;
    out(c) = sign * values(c) / (kSqrt2 * basis.sigma(c));
  }
  return out;
}

TeamAggregate aggregate(const Roster& roster, const PlayerPool& pool, const LeagueConfig& config,
                        const PlayerProjection* phantom, int extra_slots_taken = 0) {
  TeamAggregate agg(config.categories);
  for (int idx : roster) {
    agg.add(pool.at(static_cast<std::size_t>(idx)));
  }
  const int missing = config.roster_size - static_cast<int>(roster.size()) - extra_slots_taken;
  if (phantom != nullptr && missing > 0) {
    agg.add(*phantom, static_cast<double>(missing));
  }
  return agg;
}

// Opponent spread per category: sqrt(2) * sample sd of the opponents'
// normalized values, falling back to 1 without two distinct rosters.
VectorXd opponent_spread(const MatrixXd& opp_norm, const std::vector<Roster>& opponents) {
  const Eigen::Index cats = opp_norm.cols();
  std::set<Roster> distinct;
  for (const auto& r : opponents) {
    Roster sorted = r;
    std::sort(sorted.begin(), sorted.end());
    distinct.insert(std::move(sorted));
  }
  if (distinct.size() < 2 || opp_norm.rows() < 2) {
    return VectorXd::Ones(cats);
  }
  VectorXd out(cats);
  const double n = static_cast<double>(opp_norm.rows());
  for (Eigen::Index c = 0; c < cats; ++c) {
    const double mean = opp_norm.col(c).mean();
    const double ss = (opp_norm.col(c).array() - mean).square().sum();
    out(c) = kSqrt2 * std::sqrt(ss / (n - 1.0));
  }
  return out;
}

struct CategoryStats {
  std::vector<double> transformed;  // per player, category units
  double mean = 0;
  double sd = 0;
};

// Player values per category as used by the G-score; percentage categories
// become (vol / mean vol)(rate - league rate) with league figures over `q`.
std::vector<std::vector<double>> transformed_values(const PlayerPool& pool,
                                                    const LeagueConfig& config,
                                                    const std::vector<int>& q) {
  const std::size_t cats = config.categories.size();
  std::vector<std::vector<double>> out(cats, std::vector<double>(pool.size()));
  for (std::size_t c = 0; c < cats; ++c) {
    if (config.categories[c].kind == CategoryKind::Counting) {
      for (std::size_t i = 0; i < pool.size(); ++i) {
        out[c][i] = pool[i].value[c];
      }
      continue;
    }
    double made = 0;
    double attempts = 0;
    for (int i : q) {
      made += pool[static_cast<std::size_t>(i)].value[c] * pool[static_cast<std::size_t>(i)].volume[c];
      attempts += pool[static_cast<std::size_t>(i)].volume[c];
    }
    const double league_rate = attempts > 0 ? made / attempts : 0.0;
    const double mean_vol = q.empty() ? 0.0 : attempts / static_cast<double>(q.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const double weight = mean_vol > 0 ? pool[i].volume[c] / mean_vol : 0.0;
      out[c][i] = weight * (pool[i].value[c] - league_rate);
    }
  }
  return out;
}

std::vector<double> score_against(const PlayerPool& pool, const LeagueConfig& config,
                                  const std::vector<int>& q) {
  const auto values = transformed_values(pool, config, q);
  const double within_scale = chi_scale(config);
  std::vector<double> scores(pool.size(), 0.0);
  for (std::size_t c = 0; c < config.categories.size(); ++c) {
    double mean = 0;
    for (int i : q) {
      mean += values[c][static_cast<std::size_t>(i)];
    }
    mean /= static_cast<double>(q.size());
    double ss = 0;
    for (int i : q) {
      const double d = values[c][static_cast<std::size_t>(i)] - mean;
      ss += d * d;
    }
    const double between = q.size() > 1 ? ss / static_cast<double>(q.size() - 1) : 0.0;
    const double within = config.categories[c].tau * within_scale;
    const double denom = std::sqrt(between + within * within);
    const double sign = config.categories[c].higher_is_better ? 1.0 : -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      scores[i] += denom > 0 ? sign * (values[c][i] - mean) / denom : 0.0;
    }
  }
  return scores;
}

std::vector<int> top_players(const PlayerPool& pool, const std::vector<double>& scores,
                             std::size_t count) {
  std::vector<int> all(pool.size());
  std::iota(all.begin(), all.end(), 0);
  auto ranked = gscore_rank(all, pool, scores);
  ranked.resize(std::min(count, ranked.size()));
  return ranked;
}

std::vector<int> reference_set(const PlayerPool& pool, const LeagueConfig& config) {
  std::vector<int> all(pool.size());
  std::iota(all.begin(), all.end(), 0);
  const auto first = score_against(pool, config, all);
  return top_players(pool, first,
                     static_cast<std::size_t>(config.teams) *
                         static_cast<std::size_t>(config.roster_size));
}

}  // namespace

std::vector<Category> default_categories() {
  return {
      {"pts", CategoryKind::Counting, true, 4.5},
      {"reb", CategoryKind::Counting, true, 1.8},
      {"ast", CategoryKind::Counting, true, 1.1},
      {"stl", CategoryKind::Counting, true, 0.35},
      {"blk", CategoryKind::Counting, true, 0.3},
      {"fg3m", CategoryKind::Counting, true, 0.55},
      {"tov", CategoryKind::Counting, false, 0.45},
      {"fg_pct", CategoryKind::Percentage, true, 0.3},
      {"ft_pct", CategoryKind::Percentage, true, 0.5},
  };
}

MatrixXd default_category_correlation() {
  return MatrixXd::Identity(static_cast<Eigen::Index>(default_categories().size()),
                            static_cast<Eigen::Index>(default_categories().size()));
}

void validate_pool(const PlayerPool& pool, const std::vector<Category>& categories) {
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& p = pool[i];
    const std::string where = "player '" + p.id + "'";
    if (p.id.empty()) {
      throw ValidationError("player " + std::to_string(i) + " has an empty id");
    }
    if (!ids.insert(p.id).second) {
      throw ValidationError("duplicate player id '" + p.id + "'");
    }
    if (p.value.size() != categories.size() || p.volume.size() != categories.size()) {
      throw ValidationError(where + ": expected one value and volume per category");
    }
    for (std::size_t c = 0; c < categories.size(); ++c) {
      if (!std::isfinite(p.value[c]) || !std::isfinite(p.volume[c])) {
        throw ValidationError(where + ": non-finite projection");
      }
      if (p.volume[c] < 0) {
        throw ValidationError(where + ": negative volume in " + categories[c].name);
      }
      if (categories[c].kind == CategoryKind::Percentage && (p.value[c] < 0 || p.value[c] > 1)) {
        throw ValidationError(where + ": rate outside [0, 1] in " + categories[c].name);
      }
    }
  }
}

std::vector<bool> LeagueConfig::directions() const {
  std::vector<bool> out;
  out.reserve(categories.size());
  for (const auto& c : categories) {
    out.push_back(c.higher_is_better);
  }
  return out;
}

void LeagueConfig::validate() const {
  if (teams < 2 || teams > 21) {
    throw UnsupportedLeagueSize("league must have between 2 and 21 teams (at most 20 opponents)");
  }
  if (roster_size < 1) {
    throw ValidationError("roster size must be positive");
  }
  if (categories.empty()) {
    throw ValidationError("at least one category is required");
  }
  if (!(chi > 0.0) || chi > 1.0) {
    throw ValidationError("chi must lie in (0, 1]");
  }
  for (const auto& c : categories) {
    if (!(c.tau > 0)) {
      throw ValidationError("category '" + c.name + "' needs tau > 0");
    }
  }
  if (rho.rows() != num_categories()) {
    throw ValidationError("correlation matrix size must match the category count");
  }
  validate_correlation(rho);
}

ScoringBasis ScoringBasis::from_config(const LeagueConfig& config) {
  ScoringBasis basis;
  const Eigen::Index cats = config.num_categories();
  basis.week_sigma.resize(cats);
  const double n = static_cast<double>(config.roster_size);
  for (Eigen::Index c = 0; c < cats; ++c) {
    const auto& cat = config.categories[static_cast<std::size_t>(c)];
    basis.week_sigma(c) = cat.kind == CategoryKind::Counting ? cat.tau * n : cat.tau / n;
  }
  basis.sigma = basis.week_sigma * chi_scale(config);
  return basis;
}

TeamAggregate::TeamAggregate(const std::vector<Category>& categories)
    : categories_(&categories),
      sum_(categories.size(), 0.0),
      attempts_(categories.size(), 0.0) {}

void TeamAggregate::add(const PlayerProjection& p, double weight) {
  for (std::size_t c = 0; c < categories_->size(); ++c) {
    if ((*categories_)[c].kind == CategoryKind::Counting) {
      sum_[c] += weight * p.value[c];
    } else {
      sum_[c] += weight * p.value[c] * p.volume[c];
      attempts_[c] += weight * p.volume[c];
    }
  }
}

double TeamAggregate::value(std::size_t c) const {
  if ((*categories_)[c].kind == CategoryKind::Counting) {
    return sum_[c];
  }
  return attempts_[c] > 0 ? sum_[c] / attempts_[c] : 0.0;
}

VectorXd TeamAggregate::values() const {
  VectorXd out(static_cast<Eigen::Index>(sum_.size()));
  for (std::size_t c = 0; c < sum_.size(); ++c) {
    out(static_cast<Eigen::Index>(c)) = value(c);
  }
  return out;
}

MatchupContext build_matchup_state(const Roster& mine, const std::vector<Roster>& opponents,
                                   const PlayerPool& pool, const LeagueConfig& config,
                                   const ScoringBasis& basis, const PlayerProjection* phantom) {
  if (opponents.empty()) {
    throw ValidationError("build_matchup_state: no opponents");
  }
  const auto directions = config.directions();
  const Eigen::Index cats = config.num_categories();
  const auto own = normalized(aggregate(mine, pool, config, phantom).values(), basis, directions);
  MatrixXd opp_norm(static_cast<Eigen::Index>(opponents.size()), cats);
  for (std::size_t o = 0; o < opponents.size(); ++o) {
    opp_norm.row(static_cast<Eigen::Index>(o)) =
        normalized(aggregate(opponents[o], pool, config, phantom).values(), basis, directions)
            .transpose();
  }
  MatchupContext ctx;
  ctx.mu = own.replicate(1, opp_norm.rows()) - opp_norm.transpose();
  ctx.shape.num_opponents = static_cast<int>(opponents.size());
  ctx.shape.rho = config.rho;
  ctx.shape.sigma_c = opponent_spread(opp_norm, opponents);
  return ctx;
}

std::vector<double> gscores(const PlayerPool& pool, const LeagueConfig& config) {
  if (pool.empty()) {
    throw ValidationError("gscores: empty pool");
  }
  return score_against(pool, config, reference_set(pool, config));
}

std::vector<int> gscore_rank(const std::vector<int>& candidates, const PlayerPool& pool,
                             const std::vector<double>& scores) {
  std::vector<int> out = candidates;
  std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
    const double sa = scores[static_cast<std::size_t>(a)];
    const double sb = scores[static_cast<std::size_t>(b)];
    if (sa != sb) {
      return sa > sb;
    }
    return pool[static_cast<std::size_t>(a)].id < pool[static_cast<std::size_t>(b)].id;
  });
  return out;
}

MatrixXd estimate_category_correlation(const PlayerPool& pool, const LeagueConfig& config) {
  const auto q = reference_set(pool, config);
  const auto values = transformed_values(pool, config, q);
  const Eigen::Index cats = config.num_categories();
  MatrixXd x(static_cast<Eigen::Index>(q.size()), cats);
  for (Eigen::Index c = 0; c < cats; ++c) {
    for (std::size_t r = 0; r < q.size(); ++r) {
      x(static_cast<Eigen::Index>(r), c) =
          values[static_cast<std::size_t>(c)][static_cast<std::size_t>(q[r])];
    }
  }
  const MatrixXd centered = x.rowwise() - x.colwise().mean();
  const MatrixXd cov = centered.transpose() * centered;
  MatrixXd rho = MatrixXd::Identity(cats, cats);
  for (Eigen::Index a = 0; a < cats; ++a) {
    for (Eigen::Index b = 0; b < cats; ++b) {
      const double denom = std::sqrt(cov(a, a) * cov(b, b));
      if (a != b && denom > 0) {
        rho(a, b) = std::clamp(cov(a, b) / denom, -1.0, 1.0);
      }
    }
  }
  return nearest_psd(rho);
}

int seat_for_pick(int pick, int teams) {
  const int round = pick / teams;
  const int slot = pick % teams;
  return round % 2 == 0 ? slot : teams - 1 - slot;
}

DraftState::DraftState(int teams_, int roster_size_, std::size_t pool_size)
    : teams(teams_),
      roster_size(roster_size_),
      rosters(static_cast<std::size_t>(teams_)),
      taken(pool_size, 0) {}

std::vector<int> DraftState::available() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < taken.size(); ++i) {
    if (!taken[i]) {
      out.push_back(static_cast<int>(i));
    }
  }
  return out;
}

void DraftState::apply_pick(int seat, int player) {
  if (complete()) {
    throw ValidationError("draft is complete");
  }
  if (seat != seat_on_clock()) {
    throw ValidationError("seat " + std::to_string(seat) + " is not on the clock (seat " +
                          std::to_string(seat_on_clock()) + " is)");
  }
  if (player < 0 || static_cast<std::size_t>(player) >= taken.size()) {
    throw ValidationError("unknown player index " + std::to_string(player));
  }
  if (taken[static_cast<std::size_t>(player)]) {
    throw ValidationError("player already drafted");
  }
  taken[static_cast<std::size_t>(player)] = 1;
  rosters[static_cast<std::size_t>(seat)].push_back(player);
  picks.push_back(player);
}

void DraftState::undo_last() {
  if (picks.empty()) {
    throw ValidationError("no pick to undo");
  }
  const int player = picks.back();
  picks.pop_back();
  const int seat = seat_for_pick(current_pick(), teams);
  auto& roster = rosters[static_cast<std::size_t>(seat)];
  roster.pop_back();
  taken[static_cast<std::size_t>(player)] = 0;
}

PlayerProjection replacement_player(const DraftState& state, const PlayerPool& pool,
                                    const std::vector<double>& scores) {
  const auto ranked = gscore_rank(state.available(), pool, scores);
  if (ranked.empty()) {
    throw ValidationError("replacement_player: no undrafted players");
  }
  PlayerProjection phantom = pool[static_cast<std::size_t>(ranked[ranked.size() / 2])];
  phantom.id = "__replacement__";
  phantom.name = "replacement";
  phantom.tags = {"phantom"};
  return phantom;
}

VectorXd optimize_future_picks(const MatrixXd& base_mu, const LeagueShape& shape,
                               const MatrixXd& factor, double budget, const HScoreConfig& config,
                               ObjectiveWithGradient<double>* best) {
  const Eigen::Index cats = base_mu.rows();
  const Eigen::Index opps = base_mu.cols();
  if (factor.rows() != cats || factor.cols() != cats) {
    throw ValidationError("optimize_future_picks: factor must be |C| x |C|");
  }
  VectorXd u = VectorXd::Zero(cats);
  VectorXd best_u = u;
  ObjectiveWithGradient<double> best_eval;
  bool have_best = false;
  const int steps = budget > 0 ? config.optimizer_steps : 0;
  for (int k = 0; k <= steps; ++k) {
    const VectorXd x = factor * u;
    const MatrixXd mu = base_mu + x.replicate(1, opps);
    auto eval = evaluate_with_gradient(mu, shape);
    if (!have_best || eval.z > best_eval.z) {
      best_u = u;
      best_eval = eval;
      have_best = true;
    }
    if (k == steps) {
      break;
    }
    const VectorXd g = factor.transpose() * eval.d_z.rowwise().sum();
    const double norm = g.norm();
    if (!(norm > config.gradient_tolerance)) {
      break;
    }
    const double step = config.step_size * budget * (1.0 - static_cast<double>(k) / steps);
    u += (step / norm) * g;
    const double len = u.norm();
    if (len > budget) {
      u *= budget / len;
    }
  }
  if (best != nullptr) {
    *best = std::move(best_eval);
  }
  return factor * best_u;
}

namespace {

struct PickContext {
  ScoringBasis basis;
  PlayerProjection phantom;
  std::vector<bool> directions;
  MatrixXd opp_norm;  // O x C
  LeagueShape shape;
  Roster mine;
  int remaining_after = 0;  // open slots after this pick
  MatrixXd future_factor;   // C x C
};

PickContext make_context(const DraftState& state, int seat, const PlayerPool& pool,
                         const LeagueConfig& config, const std::vector<double>& scores,
                         const std::vector<int>& ranked_available) {
  PickContext ctx;
  ctx.basis = ScoringBasis::from_config(config);
  ctx.phantom = replacement_player(state, pool, scores);
  ctx.directions = config.directions();
  ctx.mine = state.rosters.at(static_cast<std::size_t>(seat));
  std::vector<Roster> opponents;
  for (int s = 0; s < state.teams; ++s) {
    if (s != seat) {
      opponents.push_back(state.rosters[static_cast<std::size_t>(s)]);
    }
  }
  const Eigen::Index cats = config.num_categories();
  ctx.opp_norm.resize(static_cast<Eigen::Index>(opponents.size()), cats);
  for (std::size_t o = 0; o < opponents.size(); ++o) {
    ctx.opp_norm.row(static_cast<Eigen::Index>(o)) =
        normalized(aggregate(opponents[o], pool, config, &ctx.phantom).values(), ctx.basis,
                   ctx.directions)
            .transpose();
  }
  ctx.shape.num_opponents = static_cast<int>(opponents.size());
  ctx.shape.rho = config.rho;
  ctx.shape.sigma_c = opponent_spread(ctx.opp_norm, opponents);

  ctx.remaining_after = std::max(0, config.roster_size - static_cast<int>(ctx.mine.size()) - 1);
  // Future-pick factor: square root of the covariance of category profiles
  // among players near each later pick (about j*K picks away), averaged over
  // the remaining picks. Each profile has its mean across categories removed,
  // so steering trades categories against each other instead of adding value.
  ctx.future_factor = MatrixXd::Zero(cats, cats);
  const VectorXd base =
      normalized(aggregate(ctx.mine, pool, config, &ctx.phantom).values(), ctx.basis,
                 ctx.directions);
  const int half = std::max(1, state.teams / 2);
  for (int j = 1; j <= ctx.remaining_after && !ranked_available.empty(); ++j) {
    const int last = static_cast<int>(ranked_available.size()) - 1;
    const int lo = std::clamp(j * state.teams - half, 0, last);
    const int hi = std::clamp(j * state.teams + half, lo, last);
    MatrixXd deltas(cats, hi - lo + 1);
    for (int r = lo; r <= hi; ++r) {
      TeamAggregate agg = aggregate(ctx.mine, pool, config, &ctx.phantom, 1);
      agg.add(pool[static_cast<std::size_t>(ranked_available[static_cast<std::size_t>(r)])]);
      VectorXd d = normalized(agg.values(), ctx.basis, ctx.directions) - base;
      d.array() -= d.mean();
      deltas.col(r - lo) = d;
    }
    const MatrixXd centered = deltas.colwise() - deltas.rowwise().mean();
    const MatrixXd cov = centered * centered.transpose() / static_cast<double>(deltas.cols());
    ctx.future_factor += psd_factor(cov);
  }
  if (ctx.remaining_after > 0) {
    ctx.future_factor *= config.hscore.future_scale / ctx.remaining_after;
  }
  return ctx;
}

CandidateEvaluation evaluate_with_roster(const PickContext& ctx, const Roster& roster,
                                         const PlayerPool& pool, const LeagueConfig& config) {
  const auto own =
      normalized(aggregate(roster, pool, config, &ctx.phantom, 0).values(), ctx.basis,
                 ctx.directions);
  const MatrixXd base = own.replicate(1, ctx.opp_norm.rows()) - ctx.opp_norm.transpose();
  CandidateEvaluation out;
  ObjectiveWithGradient<double> best;
  out.future = optimize_future_picks(base, ctx.shape, ctx.future_factor,
                                     static_cast<double>(ctx.remaining_after), config.hscore,
                                     &best);
  out.v = best.breakdown.v;
  out.z = best.z;
  out.mu = base + out.future.replicate(1, base.cols());
  out.shape = ctx.shape;
  out.category_win_probability =
      out.mu.unaryExpr([](double m) { return norm_cdf(m); }).rowwise().mean();
  return out;
}

void check_open_seat(const DraftState& state, int seat, const LeagueConfig& config) {
  if (seat < 0 || seat >= state.teams) {
    throw ValidationError("seat out of range");
  }
  if (static_cast<int>(state.rosters[static_cast<std::size_t>(seat)].size()) >=
      config.roster_size) {
    throw ValidationError("roster for seat " + std::to_string(seat) + " is already full");
  }
}

bool better_candidate(const CandidateEvaluation& a, const CandidateEvaluation& b) {
  if (a.v != b.v) {
    return a.v > b.v;
  }
  return a.z > b.z;
}

}  // namespace

std::vector<CandidateEvaluation> evaluate_candidates(const DraftState& state, int seat,
                                                     const PlayerPool& pool,
                                                     const LeagueConfig& config,
                                                     const std::vector<double>& scores,
                                                     int width) {
  check_open_seat(state, seat, config);
  const auto ranked = gscore_rank(state.available(), pool, scores);
  if (ranked.empty()) {
    throw ValidationError("no eligible candidates");
  }
  const auto ctx = make_context(state, seat, pool, config, scores, ranked);
  const std::size_t count = std::min(ranked.size(), static_cast<std::size_t>(std::max(1, width)));
  std::vector<CandidateEvaluation> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Roster roster = ctx.mine;
    roster.push_back(ranked[i]);
    auto eval = evaluate_with_roster(ctx, roster, pool, config);
    eval.player = ranked[i];
    eval.gscore = scores[static_cast<std::size_t>(ranked[i])];
    out.push_back(std::move(eval));
  }
  std::stable_sort(out.begin(), out.end(), better_candidate);
  return out;
}

std::size_t best_candidate(const std::vector<CandidateEvaluation>& evals) {
  if (evals.empty()) {
    throw ValidationError("best_candidate: no evaluations");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < evals.size(); ++i) {
    if (better_candidate(evals[i], evals[best])) {
      best = i;
    }
  }
  return best;
}

CandidateEvaluation evaluate_candidate(const DraftState& state, int seat, const PlayerPool& pool,
                                       const LeagueConfig& config,
                                       const std::vector<double>& scores, int player) {
  check_open_seat(state, seat, config);
  if (player < 0 || static_cast<std::size_t>(player) >= state.taken.size() ||
      state.taken[static_cast<std::size_t>(player)]) {
    throw ValidationError("player is not available");
  }
  const auto ranked = gscore_rank(state.available(), pool, scores);
  const auto ctx = make_context(state, seat, pool, config, scores, ranked);
  Roster roster = ctx.mine;
  roster.push_back(player);
  auto eval = evaluate_with_roster(ctx, roster, pool, config);
  eval.player = player;
  eval.gscore = scores[static_cast<std::size_t>(player)];
  return eval;
}

CandidateEvaluation evaluate_baseline(const DraftState& state, int seat, const PlayerPool& pool,
                                      const LeagueConfig& config,
                                      const std::vector<double>& scores) {
  check_open_seat(state, seat, config);
  const auto ranked = gscore_rank(state.available(), pool, scores);
  if (ranked.empty()) {
    throw ValidationError("no eligible candidates");
  }
  auto ctx = make_context(state, seat, pool, config, scores, ranked);
  return evaluate_with_roster(ctx, ctx.mine, pool, config);
}

int hscore_pick(const DraftState& state, const PlayerPool& pool, const LeagueConfig& config,
                const std::vector<double>& scores) {
  const auto evals = evaluate_candidates(state, state.seat_on_clock(), pool, config, scores,
                                         config.hscore.candidate_width);
  return evals[best_candidate(evals)].player;
}

DraftState run_draft(const std::vector<AgentKind>& agents, const PlayerPool& pool,
                     const LeagueConfig& config) {
  config.validate();
  if (static_cast<int>(agents.size()) != config.teams) {
    throw ValidationError("run_draft: one agent per seat required");
  }
  const std::size_t needed =
      static_cast<std::size_t>(config.teams) * static_cast<std::size_t>(config.roster_size);
  if (pool.size() < needed) {
    throw ValidationError("run_draft: pool smaller than teams * roster size");
  }
  const auto scores = gscores(pool, config);
  std::vector<int> all(pool.size());
  std::iota(all.begin(), all.end(), 0);
  const auto order = gscore_rank(all, pool, scores);

  DraftState state(config.teams, config.roster_size, pool.size());
  std::size_t cursor = 0;
  while (!state.complete()) {
    const int seat = state.seat_on_clock();
    int player = -1;
    if (agents[static_cast<std::size_t>(seat)] == AgentKind::HScore) {
      player = hscore_pick(state, pool, config, scores);
    } else {
      while (state.taken[static_cast<std::size_t>(order[cursor])]) {
        ++cursor;
      }
      player = order[cursor];
    }
    state.apply_pick(seat, player);
  }
  return state;
}

}  // namespace roto
