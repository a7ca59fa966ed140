#include <algorithm>
#include <set>

#include "doctest.h"
#include "roto/draft.hpp"
#include "roto/oracle.hpp"
#include "roto/season.hpp"

using namespace roto;

namespace {

LeagueConfig small_league(int teams = 4, int roster = 3) {
  LeagueConfig cfg;
  cfg.teams = teams;
  cfg.roster_size = roster;
  cfg.hscore.candidate_width = 8;
  return cfg;
}

PlayerPool small_pool(int players, std::uint64_t seed) {
  SyntheticPoolConfig syn;
  syn.players = players;
  return generate_synthetic_pool(syn, SeededRng(seed, 0));
}

// Best in every category: top counting output, fewest turnovers, best rates
// on the largest volume.
PlayerProjection dominant(const PlayerPool& pool, const LeagueConfig& cfg) {
  PlayerProjection star = pool.front();
  star.id = "star";
  star.name = "Star";
  for (std::size_t c = 0; c < cfg.categories.size(); ++c) {
    double hi = -1e300, lo = 1e300, vol = 0;
    for (const auto& p : pool) {
      hi = std::max(hi, p.value[c]);
      lo = std::min(lo, p.value[c]);
      vol = std::max(vol, p.volume[c]);
    }
    const auto& cat = cfg.categories[c];
    if (cat.kind == CategoryKind::Percentage) {
      star.value[c] = std::min(1.0, hi + 0.02);
      star.volume[c] = vol * 1.2;
    } else {
      star.value[c] = cat.higher_is_better ? hi * 1.2 : lo * 0.8;
    }
  }
  return star;
}

}  // namespace

TEST_CASE("snake order") {
  std::vector<int> seat0;
  for (int p = 0; p < 12 * 13; ++p) {
    if (seat_for_pick(p, 12) == 0) seat0.push_back(p);
  }
  REQUIRE(seat0.size() == 13);
  CHECK(seat0[0] == 0);
  CHECK(seat0[1] == 23);
  CHECK(seat0[2] == 24);
  CHECK(seat0[3] == 47);
  CHECK(seat_for_pick(11, 12) == 11);
  CHECK(seat_for_pick(12, 12) == 11);
}

TEST_CASE("draft state picks and undo") {
  DraftState s(3, 2, 10);
  CHECK(s.seat_on_clock() == 0);
  s.apply_pick(0, 4);
  CHECK_THROWS_AS(s.apply_pick(0, 5), ValidationError);  // seat 1 is on the clock
  CHECK_THROWS_AS(s.apply_pick(1, 4), ValidationError);  // already taken
  CHECK_THROWS_AS(s.apply_pick(1, 10), ValidationError); // out of range
  s.apply_pick(1, 5);
  s.apply_pick(2, 6);
  CHECK(s.seat_on_clock() == 2);
  s.apply_pick(2, 7);
  CHECK(s.rosters[2] == Roster{6, 7});
  s.undo_last();
  CHECK(s.rosters[2] == Roster{6});
  CHECK_FALSE(s.taken[7]);
  CHECK(s.current_pick() == 3);
  s.apply_pick(2, 7);
  s.apply_pick(1, 8);
  s.apply_pick(0, 9);
  CHECK(s.complete());
  CHECK_THROWS_AS(s.apply_pick(0, 0), ValidationError);
  DraftState empty(3, 2, 10);
  CHECK_THROWS_AS(empty.undo_last(), ValidationError);
}

TEST_CASE("matchup state antisymmetry and normalization") {
  const auto cfg = small_league(5, 3);
  const auto pool = small_pool(60, 3);
  const auto basis = ScoringBasis::from_config(cfg);
  SeededRng rng(31, 0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> ids(pool.size());
    std::iota(ids.begin(), ids.end(), 0);
    for (std::size_t i = ids.size() - 1; i > 0; --i) {
      std::swap(ids[i], ids[static_cast<std::size_t>(rng.next_u64() % (i + 1))]);
    }
    std::vector<Roster> teams(5);
    for (int t = 0; t < 5; ++t) {
      teams[static_cast<std::size_t>(t)].assign(ids.begin() + t * 3, ids.begin() + t * 3 + 3);
    }
    const Roster mine = teams[0];
    const std::vector<Roster> opps(teams.begin() + 1, teams.end());
    const auto ctx = build_matchup_state(mine, opps, pool, cfg, basis);
    CHECK(ctx.mu.rows() == 9);
    CHECK(ctx.mu.cols() == 4);

    // swap the drafter with opponent 2: that column negates
    std::vector<Roster> swapped = opps;
    swapped[2] = mine;
    const auto other = build_matchup_state(opps[2], swapped, pool, cfg, basis);
    CHECK((other.mu.col(2) + ctx.mu.col(2)).cwiseAbs().maxCoeff() < 1e-12);

    // doubling sigma halves mu
    ScoringBasis wide = basis;
    wide.sigma *= 2.0;
    const auto half = build_matchup_state(mine, opps, pool, cfg, wide);
    CHECK((2.0 * half.mu - ctx.mu).cwiseAbs().maxCoeff() < 1e-12);

    // sigma_c is sqrt(2) times the sample sd of the opponent columns
    for (int c = 0; c < 9; ++c) {
      const VectorXd row = -ctx.mu.row(c).transpose();
      const double mean = row.mean();
      const double sd = std::sqrt((row.array() - mean).square().sum() / 3.0);
      CHECK(ctx.shape.sigma_c(c) == doctest::Approx(std::sqrt(2.0) * sd).epsilon(1e-12));
    }
  }
}

TEST_CASE("identical rosters and the sigma fallback") {
  const auto cfg = small_league(4, 3);
  const auto pool = small_pool(40, 4);
  const auto basis = ScoringBasis::from_config(cfg);
  const Roster r{1, 2, 3};
  const auto ctx = build_matchup_state(r, {r, r, r}, pool, cfg, basis);
  CHECK(ctx.mu.isZero());
  CHECK(ctx.shape.sigma_c.isOnes());
  CHECK_THROWS_AS(build_matchup_state(r, {}, pool, cfg, basis), ValidationError);
}

TEST_CASE("scoring basis") {
  auto cfg = small_league();
  cfg.chi = 0.25;
  const auto b = ScoringBasis::from_config(cfg);
  for (Eigen::Index c = 0; c < b.sigma.size(); ++c) {
    CHECK(b.sigma(c) > 0);
    CHECK(b.sigma(c) == doctest::Approx(b.week_sigma(c) * 0.25));
  }
  cfg.basis_chi_power = 2.0;
  const auto sq = ScoringBasis::from_config(cfg);
  CHECK(sq.sigma(0) == doctest::Approx(sq.week_sigma(0) * 0.0625));
}

TEST_CASE("team aggregate weights rates by volume") {
  std::vector<Category> cats{{"ft", CategoryKind::Percentage, true, 0.01},
                             {"pts", CategoryKind::Counting, true, 1.0}};
  TeamAggregate agg(cats);
  agg.add({"a", "a", {0.5, 10}, {10, 0}, {}});
  agg.add({"b", "b", {0.9, 20}, {30, 0}, {}});
  CHECK(agg.value(0) == doctest::Approx((5.0 + 27.0) / 40.0));
  CHECK(agg.value(1) == 30.0);
}

TEST_CASE("gscore ranking") {
  const auto cfg = small_league();
  auto pool = small_pool(50, 5);
  pool.push_back(dominant(pool, cfg));
  const auto scores = gscores(pool, cfg);
  std::vector<int> all(pool.size());
  std::iota(all.begin(), all.end(), 0);
  const auto order = gscore_rank(all, pool, scores);
  CHECK(pool[static_cast<std::size_t>(order.front())].id == "star");

  // affine change of units in one counting category (with its noise scale)
  auto scaled_cfg = cfg;
  auto scaled_pool = pool;
  scaled_cfg.categories[0].tau *= 3.0;
  for (auto& p : scaled_pool) p.value[0] = 3.0 * p.value[0] + 5.0;
  const auto scaled = gscore_rank(all, scaled_pool, gscores(scaled_pool, scaled_cfg));
  CHECK(scaled == order);

  // ties broken by id
  PlayerPool twins{pool[3], pool[3]};
  twins[0].id = "b";
  twins[1].id = "a";
  const auto tw = gscore_rank({0, 1}, twins, {1.0, 1.0});
  CHECK(tw == std::vector<int>{1, 0});
}

TEST_CASE("category correlation estimate") {
  const auto cfg = small_league(12, 13);
  const auto pool = small_pool(260, 6);
  const MatrixXd rho = estimate_category_correlation(pool, cfg);
  CHECK_NOTHROW(validate_correlation(rho));
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(rho);
  CHECK(eig.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("replacement player is the median undrafted") {
  const auto cfg = small_league();
  const auto pool = small_pool(21, 7);
  const auto scores = gscores(pool, cfg);
  DraftState s(cfg.teams, cfg.roster_size, pool.size());
  const auto ranked = gscore_rank(s.available(), pool, scores);
  const auto ph = replacement_player(s, pool, scores);
  CHECK(ph.value == pool[static_cast<std::size_t>(ranked[10])].value);
}

TEST_CASE("future pick optimizer stays in its ellipsoid") {
  SeededRng rng(41, 0);
  const auto st = random_state(9, 11, 1.0, 0.2, rng);
  MatrixXd factor = 0.3 * MatrixXd::Identity(9, 9);
  HScoreConfig hc;
  ObjectiveWithGradient<double> best;
  const VectorXd x = optimize_future_picks(st.mu, st.shape, factor, 2.0, hc, &best);
  CHECK((factor.inverse() * x).norm() <= 2.0 + 1e-9);
  const double before = evaluate(st.mu, st.shape).v;
  CHECK(best.breakdown.v >= before);
  MatrixXd shifted = st.mu;
  shifted.colwise() += x;
  CHECK(evaluate(shifted, st.shape).v == doctest::Approx(best.breakdown.v).epsilon(1e-12));
  // zero budget leaves the state alone
  CHECK(optimize_future_picks(st.mu, st.shape, factor, 0.0, hc).isZero());
}

TEST_CASE("dominant candidate is picked and recommended first") {
  const auto cfg = small_league();
  auto pool = small_pool(40, 8);
  pool.push_back(dominant(pool, cfg));
  const auto scores = gscores(pool, cfg);
  DraftState s(cfg.teams, cfg.roster_size, pool.size());
  s.apply_pick(0, 0);
  const int pick = hscore_pick(s, pool, cfg, scores);
  CHECK(pool[static_cast<std::size_t>(pick)].id == "star");
  CHECK(hscore_pick(s, pool, cfg, scores) == pick);

  const auto evals = evaluate_candidates(s, 1, pool, cfg, scores, 8);
  REQUIRE(evals.size() == 8);
  CHECK(pool[static_cast<std::size_t>(evals.front().player)].id == "star");
  for (std::size_t i = 1; i < evals.size(); ++i) {
    CHECK(evals[i - 1].v >= evals[i].v);
    CHECK(evals[i].v > 0.0);
    CHECK(evals[i].v < 1.0);
  }
  const auto one = evaluate_candidate(s, 1, pool, cfg, scores, evals[3].player);
  CHECK(one.v == evals[3].v);
  CHECK(one.mu == evals[3].mu);
  CHECK(evaluate(one.mu, one.shape).v == doctest::Approx(one.v).epsilon(1e-14));
}

TEST_CASE("argmax is invariant to a constant shift of V") {
  const auto cfg = small_league(6, 4);
  const auto pool = small_pool(60, 9);
  const auto scores = gscores(pool, cfg);
  DraftState s(cfg.teams, cfg.roster_size, pool.size());
  for (int p = 0; p < 9; ++p) {
    const auto avail = gscore_rank(s.available(), pool, scores);
    s.apply_pick(s.seat_on_clock(), avail[static_cast<std::size_t>(p % 3)]);
  }
  auto evals = evaluate_candidates(s, s.seat_on_clock(), pool, cfg, scores, 10);
  const auto base = best_candidate(evals);
  CHECK(evals[base].player == hscore_pick(s, pool, cfg, scores));
  for (double shift : {-0.5, 0.25, 3.0}) {
    auto shifted = evals;
    for (auto& e : shifted) e.v += shift;
    CHECK(best_candidate(shifted) == base);
  }
  std::reverse(evals.begin(), evals.end());
  CHECK(evals[best_candidate(evals)].player == hscore_pick(s, pool, cfg, scores));
}

TEST_CASE("full drafts conserve players and are deterministic") {
  const auto cfg = small_league(5, 4);
  const auto pool = small_pool(60, 10);
  std::vector<AgentKind> agents(5, AgentKind::GScore);
  const auto g1 = run_draft(agents, pool, cfg);
  const auto g2 = run_draft(agents, pool, cfg);
  CHECK(g1.picks == g2.picks);
  agents[2] = AgentKind::HScore;
  const auto h1 = run_draft(agents, pool, cfg);
  const auto h2 = run_draft(agents, pool, cfg);
  CHECK(h1.picks == h2.picks);
  for (const auto* d : {&g1, &h1}) {
    CHECK(d->complete());
    CHECK(d->picks.size() == 20);
    std::set<int> seen(d->picks.begin(), d->picks.end());
    CHECK(seen.size() == 20);
    for (const auto& r : d->rosters) CHECK(r.size() == 4);
    for (int p = 0; p < 20; ++p) {
      const auto& r = d->rosters[static_cast<std::size_t>(seat_for_pick(p, 5))];
      CHECK(std::find(r.begin(), r.end(), d->picks[static_cast<std::size_t>(p)]) != r.end());
    }
  }
  CHECK_THROWS_AS(run_draft(std::vector<AgentKind>(4, AgentKind::GScore), pool, cfg),
                  ValidationError);
  CHECK_THROWS_AS(run_draft(agents, small_pool(19, 1), cfg), ValidationError);
}

TEST_CASE("league config validation") {
  auto cfg = small_league();
  CHECK_NOTHROW(cfg.validate());
  cfg.teams = 22;
  CHECK_THROWS_AS(cfg.validate(), UnsupportedLeagueSize);
  cfg = small_league();
  cfg.chi = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = small_league();
  cfg.categories[0].tau = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = small_league();
  cfg.rho = MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("pool validation") {
  const auto cfg = small_league();
  auto pool = small_pool(10, 11);
  CHECK_NOTHROW(validate_pool(pool, cfg.categories));
  auto bad = pool;
  bad[1].value[7] = 1.2;
  CHECK_THROWS_AS(validate_pool(bad, cfg.categories), ValidationError);
  bad = pool;
  bad[1].volume[8] = -1;
  CHECK_THROWS_AS(validate_pool(bad, cfg.categories), ValidationError);
  bad = pool;
  bad[2].id = bad[1].id;
  CHECK_THROWS_AS(validate_pool(bad, cfg.categories), ValidationError);
  bad = pool;
  bad[0].value.pop_back();
  CHECK_THROWS_AS(validate_pool(bad, cfg.categories), ValidationError);
}
