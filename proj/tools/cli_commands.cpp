#include "cli_commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "roto/data_io.hpp"
#include "roto/gradient.hpp"
#include "roto/oracle.hpp"
#include "roto/season.hpp"

namespace roto::cli {

namespace {

struct Output {
  bool pretty = false;
};

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

// Shared league flags; unset values keep the defaults or the --league file.
struct LeagueFlags {
  std::string league_file;
  int teams = 0;
  int roster_size = 0;
  double chi = 0;
  int width = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--league", league_file, "League config JSON");
    cmd->add_option("--teams", teams, "Number of teams K (2-21)");
    cmd->add_option("--roster-size", roster_size, "Players per roster |N|");
    cmd->add_option("--chi", chi, "Projection confidence chi in (0, 1]");
    cmd->add_option("--width", width, "H-score candidate pre-filter width");
  }

  LeagueConfig build() const {
    LeagueConfig cfg = league_file.empty() ? LeagueConfig{}
                                           : league_config_from_json(read_json_file(league_file));
    if (teams) cfg.teams = teams;
    if (roster_size) cfg.roster_size = roster_size;
    if (chi != 0) cfg.chi = chi;
    if (width) cfg.hscore.candidate_width = width;
    cfg.validate();
    return cfg;
  }
};

struct PoolFlags {
  std::vector<std::string> projections;
  std::uint64_t synthetic_seed = 1;
  int batches = 1;
  int players = SyntheticPoolConfig{}.players;

  void add(CLI::App* cmd, bool multi) {
    auto* opt = cmd->add_option("--projections", projections,
                                multi ? "Projection CSV, one per batch (repeatable)"
                                      : "Projection CSV");
    if (!multi) {
      opt->expected(1);
    }
    cmd->add_option("--synthetic-seed", synthetic_seed,
                    "Seed of the synthetic pool used without --projections")
        ->capture_default_str();
    if (multi) {
      cmd->add_option("--batches", batches, "Synthetic pools (batches) without --projections")
          ->capture_default_str()
          ->check(CLI::PositiveNumber);
    }
    cmd->add_option("--players", players, "Synthetic pool size")->capture_default_str();
  }

  std::vector<PlayerPool> build(const LeagueConfig& cfg, std::vector<std::string>* labels) const {
    std::vector<PlayerPool> pools;
    if (!projections.empty()) {
      for (const auto& path : projections) {
        pools.push_back(load_projections(path, cfg.categories));
        if (labels) labels->push_back(std::filesystem::path(path).stem().string());
      }
      return pools;
    }
    SyntheticPoolConfig syn;
    syn.players = players;
    for (int b = 0; b < batches; ++b) {
      pools.push_back(generate_synthetic_pool(syn, SeededRng(synthetic_seed, b)));
      if (labels) labels->push_back("synthetic-" + std::to_string(b));
    }
    return pools;
  }
};

std::string fixed(double x, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << x;
  return ss.str();
}

// ---- objective eval ----

struct ObjectiveEval {
  std::string state_file;
  int categories = 9;
  int opponents = 11;
  double sigma = 0;
};

int objective_eval(const ObjectiveEval& o, const Output& out) {
  StateFile state;
  if (!o.state_file.empty()) {
    state = state_from_json(read_json_file(o.state_file));
  } else {
    state.shape = LeagueShape::independent(o.categories, o.opponents, o.sigma);
    state.mu = MatrixXd::Zero(o.categories, o.opponents);
  }
  const auto bd = evaluate(state.mu, state.shape);
  if (out.pretty) {
    for (const auto& [k, v] : breakdown_to_json(bd).items()) {
      std::cout << std::left << std::setw(12) << k << v.get<double>() << "\n";
    }
  } else {
    emit(breakdown_to_json(bd));
  }
  return 0;
}

// ---- gradient check ----

struct GradientFlags {
  std::string state_file;
  int random = 100;
  std::uint64_t seed = 1;
  int categories = 9;
  int opponents = 11;
  double tol = 1e-3;
  double h = 1e-4;
};

int gradient_check_cmd(const GradientFlags& g, const Output& out) {
  std::vector<RandomState> states;
  if (!g.state_file.empty()) {
    auto s = state_from_json(read_json_file(g.state_file));
    states.push_back({s.mu, s.shape});
  } else {
    SeededRng rng(g.seed, 0);
    for (int i = 0; i < g.random; ++i) {
      states.push_back(random_state(g.categories, g.opponents, 2.0, 0.2, rng));
    }
  }
  double worst = 0;
  double worst_abs = 0;
  int failures = 0;
  for (const auto& s : states) {
    const auto r = gradient_check(s.mu, s.shape, g.tol, g.h);
    worst = std::max(worst, r.max_relative_error);
    worst_abs = std::max(worst_abs, r.max_absolute_error);
    failures += r.passed ? 0 : 1;
  }
  const bool passed = failures == 0;
  if (out.pretty) {
    std::cout << "states            " << states.size() << "\n"
              << "max rel error     " << worst << "\n"
              << "max abs error     " << worst_abs << "\n"
              << "tolerance         " << g.tol << "\n"
              << "result            " << (passed ? "PASS" : "FAIL") << "\n";
  } else {
    emit({{"states", states.size()},
          {"max_relative_error", worst},
          {"max_absolute_error", worst_abs},
          {"tolerance", g.tol},
          {"step", g.h},
          {"failures", failures},
          {"passed", passed}});
  }
  return 0;
}

// ---- oracle compare ----

struct OracleFlags {
  int configs = 50;
  std::int64_t draws = 200000;
  std::uint64_t seed = 1;
  int workers = 1;
  bool iid = false;
};

int oracle_compare(const OracleFlags& f, const Output& out) {
  const LeagueShape sym = LeagueShape::independent(9, 11, 0.0);
  const MatrixXd zero = MatrixXd::Zero(9, 11);
  const double v_sym = evaluate(zero, sym).v;
  const auto mc_sym = mc_win_probability(team_means_from_matchups(zero), sym.rho, f.draws,
                                         SeededRng(f.seed, 1), f.workers);

  CalibrationConfig cfg;
  cfg.configs = f.configs;
  cfg.draws = f.draws;
  cfg.workers = f.workers;
  cfg.consistent_shape = !f.iid;
  const auto cases = calibration_sweep(cfg, SeededRng(f.seed, 2));
  std::vector<double> analytic;
  std::vector<double> win;
  std::vector<double> share;
  Json rows = Json::array();
  for (const auto& c : cases) {
    analytic.push_back(c.analytic_v);
    win.push_back(c.mc.p_win);
    share.push_back(c.mc.p_share);
    rows.push_back({{"analytic_v", c.analytic_v},
                    {"mc_p_win", c.mc.p_win},
                    {"mc_p_share", c.mc.p_share},
                    {"mc_ci_halfwidth", c.mc.ci_halfwidth}});
  }
  const double rho_win = spearman(analytic, win);
  const double rho_share = spearman(analytic, share);
  if (out.pretty) {
    std::cout << "symmetric league: analytic " << fixed(v_sym, 5) << "  mc " << fixed(mc_sym.p_share, 5)
              << " +- " << fixed(mc_sym.ci_halfwidth, 5) << "  exact " << fixed(1.0 / 12, 5) << "\n\n";
    std::cout << "  #  analytic    mc_win  mc_share\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
      std::cout << std::setw(3) << i << "  " << fixed(analytic[i], 5) << "  " << fixed(win[i], 5)
                << "  " << fixed(share[i], 5) << "\n";
    }
    std::cout << "\nspearman (win)   " << fixed(rho_win, 4) << "\nspearman (share) "
              << fixed(rho_share, 4) << "\n";
  } else {
    emit({{"symmetric",
           {{"analytic_v", v_sym},
            {"mc_p_share", mc_sym.p_share},
            {"mc_p_win", mc_sym.p_win},
            {"mc_ci_halfwidth", mc_sym.ci_halfwidth},
            {"exact", 1.0 / 12.0}}},
          {"generator", f.iid ? "iid" : "consistent"},
          {"draws", f.draws},
          {"cases", rows},
          {"spearman_win", rho_win},
          {"spearman_share", rho_share}});
  }
  return 0;
}

// ---- draft run ----

struct DraftFlags {
  LeagueFlags league;
  PoolFlags pool;
  std::vector<int> h_seats;
  bool estimate_rho = true;
};

int draft_run(const DraftFlags& f, const Output& out) {
  LeagueConfig cfg = f.league.build();
  const auto pool = f.pool.build(cfg, nullptr).front();
  validate_pool(pool, cfg.categories);
  if (f.estimate_rho) {
    cfg.rho = estimate_category_correlation(pool, cfg);
  }
  std::vector<AgentKind> agents(static_cast<std::size_t>(cfg.teams), AgentKind::GScore);
  for (int s : f.h_seats) {
    if (s < 0 || s >= cfg.teams) {
      throw ValidationError("--h-seat out of range: " + std::to_string(s));
    }
    agents[static_cast<std::size_t>(s)] = AgentKind::HScore;
  }
  const auto state = run_draft(agents, pool, cfg);
  const MatrixXd projected = projected_team_values(state, pool, cfg.categories);
  if (out.pretty) {
    for (int s = 0; s < cfg.teams; ++s) {
      std::cout << "seat " << std::setw(2) << s
                << (agents[static_cast<std::size_t>(s)] == AgentKind::HScore ? " [H]" : " [G]")
                << ":";
      for (int idx : state.rosters[static_cast<std::size_t>(s)]) {
        std::cout << " " << pool[static_cast<std::size_t>(idx)].id;
      }
      std::cout << "\n";
    }
    return 0;
  }
  Json seats = Json::array();
  for (int s = 0; s < cfg.teams; ++s) {
    Json ids = Json::array();
    for (int idx : state.rosters[static_cast<std::size_t>(s)]) {
      ids.push_back(pool[static_cast<std::size_t>(idx)].id);
    }
    std::vector<double> values(static_cast<std::size_t>(projected.cols()));
    for (Eigen::Index c = 0; c < projected.cols(); ++c) {
      values[static_cast<std::size_t>(c)] = projected(s, c);
    }
    seats.push_back({{"seat", s},
                     {"agent", agents[static_cast<std::size_t>(s)] == AgentKind::HScore ? "h" : "g"},
                     {"players", ids},
                     {"projected", values}});
  }
  Json picks = Json::array();
  for (int idx : state.picks) {
    picks.push_back(pool[static_cast<std::size_t>(idx)].id);
  }
  emit({{"league", league_config_to_json(cfg)}, {"seats", seats}, {"picks", picks}});
  return 0;
}

// ---- simulate ----

struct SimulateFlags {
  LeagueFlags league;
  PoolFlags pool;
  int seasons = 5;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string layout = "rotating-h";
  std::string store;
  std::string run_id;
  double punt_threshold = 1.5;
  bool fixed_rho = false;
};

int simulate(const SimulateFlags& f, const Output& out) {
  ExperimentConfig cfg;
  cfg.league = f.league.build();
  cfg.layout = f.layout == "all-g" ? AgentLayout::AllGScore : AgentLayout::RotatingHScore;
  cfg.seasons_per_draft = f.seasons;
  cfg.master_seed = f.seed;
  cfg.workers = f.workers;
  cfg.punt_threshold = f.punt_threshold;
  cfg.estimate_rho_from_pool = !f.fixed_rho;
  std::vector<std::string> labels;
  const auto pools = f.pool.build(cfg.league, &labels);

  std::string store = f.store;
  if (store.empty()) {
    const char* env = std::getenv("ROTO_STORE");
    store = env != nullptr && *env != '\0' ? env : "runs";
  }
  // The config snapshot excludes the worker count, which never changes results.
  const Json run_config = {{"schema_version", kSchemaVersion},
                           {"league", league_config_to_json(cfg.league)},
                           {"layout", f.layout},
                           {"seasons_per_draft", cfg.seasons_per_draft},
                           {"master_seed", cfg.master_seed},
                           {"estimate_rho_from_pool", cfg.estimate_rho_from_pool},
                           {"noise_chi_power", cfg.noise_chi_power},
                           {"punt_threshold", cfg.punt_threshold},
                           {"pools", labels},
                           {"projections", f.pool.projections},
                           {"synthetic_seed", f.pool.projections.empty()
                                                  ? Json(f.pool.synthetic_seed)
                                                  : Json(nullptr)},
                           {"synthetic_players", f.pool.players}};
  const auto report = run_experiment(pools, cfg, labels);
  RunStore rs(store);
  const auto id = rs.write_report(report, run_config, f.run_id);
  const double ft = std::find(report.categories.begin(), report.categories.end(), "ft_pct") !=
                            report.categories.end()
                        ? punt_frequency(report, "ft_pct", cfg.punt_threshold)
                        : 0.0;
  if (out.pretty) {
    std::cout << "run " << id << " in " << store << "\n" << report_to_csv(report);
    std::cout << "mean win rate " << fixed(report.mean_win_rate, 4) << " +- "
              << fixed(report.mean_ci_halfwidth, 4) << " over " << report.focus_seasons
              << " seasons\n";
  } else {
    emit({{"run_id", id},
          {"store", store},
          {"layout", report.layout},
          {"mean_win_rate", report.mean_win_rate},
          {"mean_ci_halfwidth", report.mean_ci_halfwidth},
          {"focus_seasons", report.focus_seasons},
          {"seat_win_rate", report.seat_win_rate},
          {"ft_pct_punt_frequency", ft}});
  }
  return 0;
}

// ---- table max-stats / scenario-count / pool generate ----

int table_max_stats(const Output& out) {
  const auto& table = max_order_stats_table();
  if (out.pretty) {
    std::cout << "  N          MEV     E(X^2)         MVAR\n";
    for (const auto& r : table) {
      std::printf("%3d  %.9f  %.9f  %.9f\n", r.n, r.mev, r.ex2, r.mvar);
    }
    return 0;
  }
  Json rows = Json::array();
  for (const auto& r : table) {
    rows.push_back({{"n", r.n}, {"mev", r.mev}, {"ex2", r.ex2}, {"mvar", r.mvar}});
  }
  emit(rows);
  return 0;
}

int scenario_count_cmd(int teams, int categories, const Output& out) {
  const auto count = scenario_count(teams, categories);
  const std::string digits = count.str();
  if (out.pretty) {
    std::cout << digits << "\n(" << digits.size() << " digits)\n";
  } else {
    emit({{"teams", teams},
          {"categories", categories},
          {"count", digits},
          {"digits", digits.size()}});
  }
  return 0;
}

int pool_generate(std::uint64_t seed, int players, const std::string& path) {
  SyntheticPoolConfig syn;
  syn.players = players;
  const auto pool = generate_synthetic_pool(syn, SeededRng(seed, 0));
  if (path.empty() || path == "-") {
    write_projections(std::cout, pool, default_categories());
  } else {
    save_projections(path, pool, default_categories());
  }
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Rotisserie win-probability objective, oracles, drafting and simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_flag("--pretty", out.pretty, "Human-readable tables instead of JSON");

  auto* objective = app.add_subcommand("objective", "Objective evaluation");
  objective->require_subcommand(1);
  ObjectiveEval oe;
  auto* eval = objective->add_subcommand("eval", "Evaluate V for a matchup state");
  eval->add_option("--state", oe.state_file, "State JSON (mu, rho, sigma_c, num_opponents)");
  eval->add_option("--categories", oe.categories, "Categories of the all-zero state")
      ->capture_default_str();
  eval->add_option("--opponents", oe.opponents, "Opponents of the all-zero state")
      ->capture_default_str();
  eval->add_option("--sigma", oe.sigma, "sigma_c of the all-zero state")->capture_default_str();

  auto* gradient = app.add_subcommand("gradient", "Gradient tools");
  gradient->require_subcommand(1);
  GradientFlags gf;
  auto* check = gradient->add_subcommand("check", "Analytic vs central-difference gradient");
  check->add_option("--state", gf.state_file, "State JSON; otherwise random states");
  check->add_option("--random", gf.random, "Number of random states")->capture_default_str();
  check->add_option("--seed", gf.seed, "Seed for random states")->capture_default_str();
  check->add_option("--categories", gf.categories, "Categories per random state")
      ->capture_default_str();
  check->add_option("--opponents", gf.opponents, "Opponents per random state")
      ->capture_default_str();
  check->add_option("--tol", gf.tol, "Maximum relative error")->capture_default_str();
  check->add_option("--step", gf.h, "Central-difference step")->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "Monte Carlo oracles");
  oracle->require_subcommand(1);
  OracleFlags of;
  auto* compare = oracle->add_subcommand("compare", "Analytic V against simulated win rates");
  compare->add_option("--configs", of.configs, "Random league configurations")
      ->capture_default_str();
  compare->add_option("--draws", of.draws, "Simulated seasons per configuration")
      ->capture_default_str();
  compare->add_option("--seed", of.seed, "Master seed")->capture_default_str();
  compare->add_option("--workers", of.workers, "Worker threads")->capture_default_str();
  compare->add_flag("--iid", of.iid,
                    "Draw mu entries iid with sigma_c = 0 instead of from opponent means");

  auto* draft = app.add_subcommand("draft", "Draft tools");
  draft->require_subcommand(1);
  DraftFlags df;
  auto* draft_run_cmd = draft->add_subcommand("run", "Run one snake draft");
  df.league.add(draft_run_cmd);
  df.pool.add(draft_run_cmd, false);
  draft_run_cmd->add_option("--h-seat", df.h_seats, "Seat drafted by the H-score agent (repeatable)");
  draft_run_cmd->add_flag("!--fixed-rho", df.estimate_rho,
                          "Use the league rho instead of estimating it from the pool");

  SimulateFlags sf;
  auto* sim = app.add_subcommand("simulate", "Run the seat-rotation experiment into a run store");
  sf.league.add(sim);
  sf.pool.add(sim, true);
  sim->add_option("--seasons", sf.seasons, "Seasons per draft")->capture_default_str();
  sim->add_option("--seed", sf.seed, "Master seed")->capture_default_str();
  sim->add_option("--workers", sf.workers, "Worker threads")->capture_default_str();
  sim->add_option("--layout", sf.layout, "Agent layout")
      ->check(CLI::IsMember({"rotating-h", "all-g"}))
      ->capture_default_str();
  sim->add_option("--store", sf.store, "Run store directory (default $ROTO_STORE or ./runs)");
  sim->add_option("--run-id", sf.run_id, "Run id (default derived from the config)");
  sim->add_option("--punt-threshold", sf.punt_threshold, "Punt threshold in standard points")
      ->capture_default_str();
  sim->add_flag("--fixed-rho", sf.fixed_rho,
                "Use the league rho instead of estimating it from each pool");

  auto* table = app.add_subcommand("table", "Reference tables");
  table->require_subcommand(1);
  table->add_subcommand("max-stats", "Mean and variance of the maximum of N standard Normals");

  int sc_teams = 12;
  int sc_categories = 9;
  auto* sc = app.add_subcommand("scenario-count", "Number of winning category-rank scenarios");
  sc->add_option("--teams", sc_teams, "Teams")->capture_default_str();
  sc->add_option("--categories", sc_categories, "Categories")->capture_default_str();

  auto* pool = app.add_subcommand("pool", "Projection pools");
  pool->require_subcommand(1);
  std::uint64_t pool_seed = 1;
  int pool_players = SyntheticPoolConfig{}.players;
  std::string pool_out;
  auto* gen = pool->add_subcommand("generate", "Write a synthetic projection CSV");
  gen->add_option("--seed", pool_seed, "Seed")->capture_default_str();
  gen->add_option("--players", pool_players, "Players")->capture_default_str();
  gen->add_option("--out", pool_out, "Output path (default standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*eval) return objective_eval(oe, out);
    if (*check) return gradient_check_cmd(gf, out);
    if (*compare) return oracle_compare(of, out);
    if (*draft_run_cmd) return draft_run(df, out);
    if (*sim) return simulate(sf, out);
    if (*table) return table_max_stats(out);
    if (*sc) return scenario_count_cmd(sc_teams, sc_categories, out);
    if (*gen) return pool_generate(pool_seed, pool_players, pool_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace roto::cli
