#include "roto/season.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "roto/oracle.hpp"
#include "parallel.hpp"

namespace roto {

namespace {

constexpr double kGamesPerWeek = 3.3;

double binomial_halfwidth(double p, double n) {
  return n > 0 ? 1.96 * std::sqrt(std::max(0.0, p * (1.0 - p)) / n) : 0.0;
}

struct TaskResult {
  VectorXd win_share;    // per seat, summed over seasons
  MatrixXd points_sum;   // K x C standard points, summed over seasons
};

}  // namespace

NoiseModelConfig NoiseModelConfig::from_league(const LeagueConfig& league) {
  NoiseModelConfig cfg;
  cfg.categories = league.categories;
  cfg.roster_size = league.roster_size;
  cfg.chi = league.chi;
  cfg.rho = league.rho;
  return cfg;
}

void NoiseModelConfig::validate() const {
  if (categories.empty()) {
    throw ValidationError("noise model: no categories");
  }
  for (const auto& c : categories) {
    if (!(c.tau > 0)) {
      throw ValidationError("noise model: tau must be positive for '" + c.name + "'");
    }
  }
  if (roster_size < 1) {
    throw ValidationError("noise model: roster size must be positive");
  }
  if (!(chi > 0) || chi > 1) {
    throw ValidationError("noise model: chi must lie in (0, 1]");
  }
  if (rho.rows() != static_cast<Eigen::Index>(categories.size()) || rho.cols() != rho.rows()) {
    throw ValidationError("noise model: rho must be |C| x |C|");
  }
}

MatrixXd build_noise_covariance(const NoiseModelConfig& config) {
  config.validate();
  const Eigen::Index cats = static_cast<Eigen::Index>(config.categories.size());
  const double n = static_cast<double>(config.roster_size);
  const double scale = std::pow(config.chi, config.chi_power);
  VectorXd sigma(cats);
  for (Eigen::Index c = 0; c < cats; ++c) {
    const auto& cat = config.categories[static_cast<std::size_t>(c)];
    sigma(c) = (cat.kind == CategoryKind::Counting ? cat.tau * n : cat.tau / n) * scale;
  }
  const MatrixXd rho = nearest_psd(config.rho);
  return sigma.asDiagonal() * rho * sigma.asDiagonal();
}

MatrixXd projected_team_values(const DraftState& draft, const PlayerPool& pool,
                               const std::vector<Category>& categories) {
  MatrixXd out(draft.teams, static_cast<Eigen::Index>(categories.size()));
  for (int k = 0; k < draft.teams; ++k) {
    TeamAggregate agg(categories);
    for (int idx : draft.rosters[static_cast<std::size_t>(k)]) {
      agg.add(pool.at(static_cast<std::size_t>(idx)));
    }
    out.row(k) = agg.values().transpose();
  }
  return out;
}

SeasonResult simulate_season(const MatrixXd& projected, const MatrixXd& noise_factor,
                             const std::vector<bool>& higher_is_better, SeededRng& rng) {
  const Eigen::Index cats = projected.cols();
  if (noise_factor.rows() != cats || noise_factor.cols() != cats) {
    throw ValidationError("simulate_season: noise factor must be |C| x |C|");
  }
  SeasonResult out;
  out.values = projected;
  VectorXd z(cats);
  for (Eigen::Index k = 0; k < projected.rows(); ++k) {
    for (Eigen::Index c = 0; c < cats; ++c) {
      z(c) = rng.normal();
    }
    out.values.row(k) += (noise_factor * z).transpose();
  }
  out.standings = score_rotisserie(out.values, higher_is_better);
  return out;
}

SimReport run_experiment(const std::vector<PlayerPool>& pools, const ExperimentConfig& config,
                         const std::vector<std::string>& batch_labels) {
  config.league.validate();
  if (pools.empty()) {
    throw ValidationError("run_experiment: no player pools");
  }
  if (config.seasons_per_draft < 1) {
    throw ValidationError("run_experiment: seasons_per_draft must be >= 1");
  }
  if (!batch_labels.empty() && batch_labels.size() != pools.size()) {
    throw ValidationError("run_experiment: one label per pool required");
  }
  const int teams = config.league.teams;
  const Eigen::Index cats = config.league.num_categories();
  const std::size_t batches = pools.size();
  const bool rotating = config.layout == AgentLayout::RotatingHScore;

  std::vector<LeagueConfig> leagues(batches, config.league);
  std::vector<MatrixXd> factors(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    validate_pool(pools[b], config.league.categories);
    if (config.estimate_rho_from_pool) {
      leagues[b].rho = estimate_category_correlation(pools[b], config.league);
    }
    auto noise = NoiseModelConfig::from_league(leagues[b]);
    noise.chi_power = config.noise_chi_power;
    factors[b] = psd_factor(build_noise_covariance(noise));
  }

  // One draft per (batch, seat) in the rotating layout, one per batch for all-G.
  const std::size_t tasks = batches * static_cast<std::size_t>(teams);
  std::vector<DraftState> drafts(rotating ? tasks : batches);
  detail::parallel_for(drafts.size(), config.workers, [&](std::size_t i) {
    const std::size_t b = rotating ? i / static_cast<std::size_t>(teams) : i;
    std::vector<AgentKind> agents(static_cast<std::size_t>(teams), AgentKind::GScore);
    if (rotating) {
      agents[i % static_cast<std::size_t>(teams)] = AgentKind::HScore;
    }
    drafts[i] = run_draft(agents, pools[b], leagues[b]);
  });

  const auto directions = config.league.directions();
  std::vector<TaskResult> results(tasks);
  detail::parallel_for(tasks, config.workers, [&](std::size_t i) {
    const std::size_t b = i / static_cast<std::size_t>(teams);
    const std::size_t seat = i % static_cast<std::size_t>(teams);
    const auto& draft = drafts[rotating ? i : b];
    const MatrixXd projected = projected_team_values(draft, pools[b], config.league.categories);
    const SeededRng batch_rng(config.master_seed, b);
    const SeededRng seat_rng = batch_rng.derive(seat);
    TaskResult r{VectorXd::Zero(teams), MatrixXd::Zero(teams, cats)};
    for (int s = 0; s < config.seasons_per_draft; ++s) {
      SeededRng rng = seat_rng.derive(static_cast<std::uint64_t>(s));
      const auto season = simulate_season(projected, factors[b], directions, rng);
      r.win_share += season.standings.win_share;
      r.points_sum += season.standings.standard_points();
    }
    results[i] = std::move(r);
  });

  SimReport report;
  report.layout = rotating ? "rotating-h" : "all-g";
  report.chi = config.league.chi;
  report.teams = teams;
  report.roster_size = config.league.roster_size;
  for (const auto& c : config.league.categories) {
    report.categories.push_back(c.name);
  }
  report.master_seed = config.master_seed;
  report.seasons_per_draft = config.seasons_per_draft;
  report.punt_threshold = config.punt_threshold;
  for (std::size_t b = 0; b < batches; ++b) {
    report.batch_labels.push_back(batch_labels.empty() ? std::to_string(b) : batch_labels[b]);
  }

  const double per_task = static_cast<double>(config.seasons_per_draft);
  report.win_rate.assign(batches, std::vector<double>(static_cast<std::size_t>(teams), 0.0));
  report.category_points.assign(static_cast<std::size_t>(teams),
                                std::vector<double>(static_cast<std::size_t>(cats), 0.0));
  auto add_record = [&](std::size_t b, int seat, double win_rate, const VectorXd& points,
                        const DraftState& draft) {
    TeamRecord rec;
    rec.batch = static_cast<int>(b);
    rec.seat = seat;
    rec.win_rate = win_rate;
    rec.mean_standard_points.assign(points.data(), points.data() + points.size());
    for (int idx : draft.rosters[static_cast<std::size_t>(seat)]) {
      rec.players.push_back(pools[b][static_cast<std::size_t>(idx)].id);
    }
    for (double p : rec.mean_standard_points) {
      rec.punts.push_back(p < config.punt_threshold);
    }
    report.teams_detail.push_back(std::move(rec));
  };

  if (rotating) {
    for (std::size_t b = 0; b < batches; ++b) {
      for (int seat = 0; seat < teams; ++seat) {
        const auto& r = results[b * static_cast<std::size_t>(teams) + static_cast<std::size_t>(seat)];
        const double rate = r.win_share(seat) / per_task;
        const VectorXd points = r.points_sum.row(seat).transpose() / per_task;
        report.win_rate[b][static_cast<std::size_t>(seat)] = rate;
        for (Eigen::Index c = 0; c < cats; ++c) {
          report.category_points[static_cast<std::size_t>(seat)][static_cast<std::size_t>(c)] +=
              points(c) / static_cast<double>(batches);
        }
        add_record(b, seat, rate, points,
                   drafts[b * static_cast<std::size_t>(teams) + static_cast<std::size_t>(seat)]);
      }
    }
  } else {
    const double per_batch = per_task * teams;
    for (std::size_t b = 0; b < batches; ++b) {
      VectorXd share = VectorXd::Zero(teams);
      MatrixXd points = MatrixXd::Zero(teams, cats);
      for (int t = 0; t < teams; ++t) {
        const auto& r = results[b * static_cast<std::size_t>(teams) + static_cast<std::size_t>(t)];
        share += r.win_share;
        points += r.points_sum;
      }
      share /= per_batch;
      points /= per_batch;
      for (int seat = 0; seat < teams; ++seat) {
        report.win_rate[b][static_cast<std::size_t>(seat)] = share(seat);
        for (Eigen::Index c = 0; c < cats; ++c) {
          report.category_points[static_cast<std::size_t>(seat)][static_cast<std::size_t>(c)] +=
              points(seat, c) / static_cast<double>(batches);
        }
        add_record(b, seat, share(seat), points.row(seat).transpose(), drafts[b]);
      }
    }
  }

  // Seasons behind each seat's rate: the H seat's own seasons, or every
  // season of the batch in the all-G layout.
  const double seat_seasons =
      static_cast<double>(batches) * per_task * (rotating ? 1.0 : static_cast<double>(teams));
  report.seat_win_rate.assign(static_cast<std::size_t>(teams), 0.0);
  report.seat_ci_halfwidth.assign(static_cast<std::size_t>(teams), 0.0);
  double total = 0;
  for (int seat = 0; seat < teams; ++seat) {
    double sum = 0;
    for (std::size_t b = 0; b < batches; ++b) {
      sum += report.win_rate[b][static_cast<std::size_t>(seat)];
    }
    const double p = sum / static_cast<double>(batches);
    report.seat_win_rate[static_cast<std::size_t>(seat)] = p;
    report.seat_ci_halfwidth[static_cast<std::size_t>(seat)] = binomial_halfwidth(p, seat_seasons);
    total += p;
  }
  report.mean_win_rate = total / teams;
  report.focus_seasons = static_cast<std::int64_t>(seat_seasons) * (rotating ? teams : 1);
  report.mean_ci_halfwidth =
      binomial_halfwidth(report.mean_win_rate, static_cast<double>(report.focus_seasons));
  return report;
}

std::vector<std::vector<bool>> detect_punts(const SimReport& report, double threshold) {
  std::vector<std::vector<bool>> out;
  out.reserve(report.teams_detail.size());
  for (const auto& rec : report.teams_detail) {
    std::vector<bool> flags;
    flags.reserve(rec.mean_standard_points.size());
    for (double p : rec.mean_standard_points) {
      flags.push_back(p < threshold);
    }
    out.push_back(std::move(flags));
  }
  return out;
}

double punt_frequency(const SimReport& report, const std::string& category, double threshold) {
  const auto it = std::find(report.categories.begin(), report.categories.end(), category);
  if (it == report.categories.end()) {
    throw ValidationError("unknown category '" + category + "'");
  }
  if (report.teams_detail.empty()) {
    return 0.0;
  }
  const auto c = static_cast<std::size_t>(it - report.categories.begin());
  const auto flags = detect_punts(report, threshold);
  double count = 0;
  for (const auto& row : flags) {
    count += row[c] ? 1.0 : 0.0;
  }
  return count / static_cast<double>(flags.size());
}

PlayerPool generate_synthetic_pool(const SyntheticPoolConfig& config, SeededRng rng) {
  if (config.players < 1) {
    throw ValidationError("synthetic pool: need at least one player");
  }
  if (config.low_ft_fraction < 0 || config.low_ft_fraction > 1) {
    throw ValidationError("synthetic pool: low_ft_fraction must lie in [0, 1]");
  }
  const auto cats = default_categories();
  // Per-game means for an average player of each archetype, in category
  // order, plus field-goal and free-throw attempts.
  struct Archetype {
    const char* tag;
    double per_game[7];
    double fg_pct;
    double ft_pct;
    double fga;
    double fta;
  };
  static const Archetype kGuard{"guard", {14.0, 3.5, 5.5, 1.1, 0.25, 1.9, 2.2}, 0.445, 0.84, 12.0, 3.5};
  static const Archetype kWing{"wing", {13.0, 5.0, 2.6, 0.9, 0.5, 1.5, 1.5}, 0.46, 0.80, 11.0, 3.0};
  static const Archetype kBig{"big", {12.0, 8.5, 1.8, 0.7, 1.3, 0.4, 1.5}, 0.53, 0.73, 9.0, 3.2};
  static const Archetype kLowFt{"low-ft", {15.0, 11.0, 2.2, 0.9, 1.8, 0.1, 2.2}, 0.58, 0.53, 10.0, 6.5};

  const int low_ft = static_cast<int>(std::lround(config.low_ft_fraction * config.players));
  PlayerPool pool;
  pool.reserve(static_cast<std::size_t>(config.players));
  for (int i = 0; i < config.players; ++i) {
    const Archetype* arch = nullptr;
    if (i < low_ft) {
      arch = &kLowFt;
    } else {
      const double u = rng.uniform();
      arch = u < 0.38 ? &kGuard : (u < 0.72 ? &kWing : &kBig);
    }
    // Quality spreads production; low-FT bigs are drawn from the upper half.
    double quality = std::exp(0.32 * rng.normal());
    if (arch == &kLowFt) {
      quality = std::max(quality, 1.0 + 0.15 * std::abs(rng.normal()));
    }
    const double minutes = std::clamp(quality, 0.45, 2.0);

    PlayerProjection p;
    char id[16];
    std::snprintf(id, sizeof id, "p%03d", i);
    p.id = id;
    p.name = std::string(arch->tag) + " " + std::to_string(i);
    p.tags = {arch->tag};
    p.value.assign(cats.size(), 0.0);
    p.volume.assign(cats.size(), 0.0);
    for (std::size_t c = 0; c < 7; ++c) {
      const double jitter = std::exp(0.18 * rng.normal());
      p.value[c] = kGamesPerWeek * arch->per_game[c] * minutes * jitter;
    }
    p.value[7] = std::clamp(arch->fg_pct + 0.025 * rng.normal() + 0.01 * (quality - 1.0), 0.35, 0.70);
    p.volume[7] = kGamesPerWeek * arch->fga * minutes * std::exp(0.15 * rng.normal());
    const double ft_sd = arch == &kLowFt ? 0.05 : 0.045;
    p.value[8] = std::clamp(arch->ft_pct + ft_sd * rng.normal(), 0.35, 0.95);
    p.volume[8] = kGamesPerWeek * arch->fta * minutes * std::exp(0.2 * rng.normal());
    pool.push_back(std::move(p));
  }
  return pool;
}

}  // namespace roto
