#include "roto/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "parallel.hpp"

namespace roto {

namespace {

constexpr std::int64_t kChunk = 1 << 14;

struct WinCounts {
  std::int64_t wins = 0;
  std::int64_t ties = 0;
  double share = 0;
};

// Surpass-count totals for one draw; ties inside a category split the point.
void draw_totals(const MatrixXd& means, const MatrixXd& factor, SeededRng& rng,
                 std::vector<double>& z, MatrixXd& scores, std::vector<double>& totals) {
  const Eigen::Index teams = means.rows();
  const Eigen::Index cats = means.cols();
  for (Eigen::Index t = 0; t < teams; ++t) {
    for (Eigen::Index c = 0; c < cats; ++c) {
      z[static_cast<std::size_t>(c)] = rng.normal();
    }
    for (Eigen::Index c = 0; c < cats; ++c) {
      double acc = means(t, c);
      for (Eigen::Index k = 0; k < cats; ++k) {
        acc += factor(c, k) * z[static_cast<std::size_t>(k)];
      }
      scores(t, c) = acc;
    }
  }
  std::fill(totals.begin(), totals.end(), 0.0);
  for (Eigen::Index c = 0; c < cats; ++c) {
    for (Eigen::Index i = 0; i < teams; ++i) {
      for (Eigen::Index j = i + 1; j < teams; ++j) {
        const double a = scores(i, c);
        const double b = scores(j, c);
        if (a > b) {
          totals[static_cast<std::size_t>(i)] += 1.0;
        } else if (b > a) {
          totals[static_cast<std::size_t>(j)] += 1.0;
        } else {
          totals[static_cast<std::size_t>(i)] += 0.5;
          totals[static_cast<std::size_t>(j)] += 0.5;
        }
      }
    }
  }
}

WinCounts run_chunk(const MatrixXd& means, const MatrixXd& factor, SeededRng rng,
                    std::int64_t draws) {
  WinCounts counts;
  std::vector<double> z(static_cast<std::size_t>(means.cols()));
  MatrixXd scores(means.rows(), means.cols());
  std::vector<double> totals(static_cast<std::size_t>(means.rows()));
  for (std::int64_t d = 0; d < draws; ++d) {
    draw_totals(means, factor, rng, z, scores, totals);
    const double best = *std::max_element(totals.begin(), totals.end());
    if (totals[0] == best) {
      const auto leaders = std::count(totals.begin(), totals.end(), best);
      if (leaders == 1) {
        ++counts.wins;
      } else {
        ++counts.ties;
      }
      counts.share += 1.0 / static_cast<double>(leaders);
    }
  }
  return counts;
}

}  // namespace

MatrixXd psd_factor(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (m + m.transpose()));
  const VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

MatrixXd team_means_from_matchups(const MatrixXd& matchups) {
  MatrixXd means = MatrixXd::Zero(matchups.cols() + 1, matchups.rows());
  means.bottomRows(matchups.cols()) = -matchups.transpose();
  return means;
}

WinProbabilityEstimate mc_win_probability(const MatrixXd& means, const MatrixXd& rho,
                                          std::int64_t draws, const SeededRng& rng,
                                          int workers) {
  if (draws < 1) {
    throw ValidationError("mc_win_probability: need at least one draw");
  }
  if (means.rows() < 2 || means.cols() != rho.rows()) {
    throw ValidationError("mc_win_probability: means must be K x C with K >= 2 and C = rho size");
  }
  WinProbabilityEstimate est;
  MatrixXd corr = rho;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (rho + rho.transpose()));
  if (!is_symmetric(rho, 1e-9) || eig.eigenvalues().minCoeff() < -1e-12) {
    corr = nearest_psd(0.5 * (rho + rho.transpose()));
    est.rho_repaired = true;
  }
  const MatrixXd factor = psd_factor(0.5 * corr);

  const std::int64_t chunks = (draws + kChunk - 1) / kChunk;
  std::vector<WinCounts> partial(static_cast<std::size_t>(chunks));
  detail::parallel_for(static_cast<std::size_t>(chunks), workers, [&](std::size_t i) {
    const auto k = static_cast<std::int64_t>(i);
    const std::int64_t n = std::min(kChunk, draws - k * kChunk);
    partial[static_cast<std::size_t>(k)] =
        run_chunk(means, factor, rng.derive(static_cast<std::uint64_t>(k)), n);
  });
  WinCounts total;
  for (const auto& p : partial) {
    total.wins += p.wins;
    total.ties += p.ties;
    total.share += p.share;
  }
  const double n = static_cast<double>(draws);
  est.draws = draws;
  est.p_win = static_cast<double>(total.wins) / n;
  est.p_tie = static_cast<double>(total.ties) / n;
  est.p_share = total.share / n;
  est.ci_halfwidth = 1.96 * std::sqrt(std::max(est.p_win * (1.0 - est.p_win), 0.0) / n);
  return est;
}

VarianceEstimate mc_opponent_variance(const LeagueShape& shape, std::int64_t n_scenarios,
                                      std::int64_t n_inner, const SeededRng& rng) {
  shape.validate();
  if (n_scenarios < 1 || n_inner < 2) {
    throw ValidationError("mc_opponent_variance: need >= 1 scenario and >= 2 inner draws");
  }
  const Eigen::Index cats = shape.num_categories();
  const int opps = shape.num_opponents;
  const bool degenerate = (shape.sigma_c.array() == 0.0).all();
  if (degenerate) {
    n_inner *= n_scenarios;
    n_scenarios = 1;
  }
  const MatrixXd factor = psd_factor(0.5 * nearest_psd(shape.rho));

  SeededRng outer = rng.derive(0);
  std::vector<double> scenario_var;
  double fourth_moment_term = 0;
  std::vector<double> z(static_cast<std::size_t>(cats));
  VectorXd own(cats);
  VectorXd other(cats);
  for (std::int64_t s = 0; s < n_scenarios; ++s) {
    MatrixXd mu(cats, opps);
    for (Eigen::Index c = 0; c < cats; ++c) {
      for (int o = 0; o < opps; ++o) {
        mu(c, o) = shape.sigma_c(c) * outer.normal();
      }
    }
    SeededRng inner = rng.derive(static_cast<std::uint64_t>(s) + 1);
    auto correlated = [&](VectorXd& out) {
      for (auto& v : z) {
        v = inner.normal();
      }
      out = factor * Eigen::Map<const VectorXd>(z.data(), cats);
    };
    double sum = 0;
    double sum2 = 0;
    std::vector<double> points(static_cast<std::size_t>(n_inner));
    for (std::int64_t i = 0; i < n_inner; ++i) {
      correlated(own);
      double pts = 0;
      for (int o = 0; o < opps; ++o) {
        correlated(other);
        for (Eigen::Index c = 0; c < cats; ++c) {
          if (own(c) > other(c) - mu(c, o)) {
            pts += 1.0;
          }
        }
      }
      points[static_cast<std::size_t>(i)] = pts;
      sum += pts;
      sum2 += pts * pts;
    }
    const double n = static_cast<double>(n_inner);
    const double mean = sum / n;
    const double var = (sum2 - n * mean * mean) / (n - 1.0);
    scenario_var.push_back(var);
    if (n_scenarios == 1) {
      double m4 = 0;
      for (double p : points) {
        const double d = p - mean;
        m4 += d * d * d * d;
      }
      m4 /= n;
      fourth_moment_term = std::max(0.0, m4 - var * var) / n;
    }
  }
  VarianceEstimate est;
  est.scenarios = n_scenarios;
  est.inner_draws = n_inner;
  double total = 0;
  for (double v : scenario_var) {
    total += v;
  }
  est.mean = total / static_cast<double>(n_scenarios);
  if (n_scenarios > 1) {
    double ss = 0;
    for (double v : scenario_var) {
      ss += (v - est.mean) * (v - est.mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n_scenarios - 1));
    est.ci_halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(n_scenarios));
  } else {
    est.ci_halfwidth = 1.96 * std::sqrt(fourth_moment_term);
  }
  return est;
}

SqrtMoments sqrt_normal_moments(double mu, double sigma, std::int64_t n, SeededRng rng) {
  if (sigma < 0 || !(mu > 5.0 * sigma) || n < 2) {
    throw ValidationError("sqrt_normal_moments: requires sigma >= 0, mu > 5 sigma and n >= 2");
  }
  if (sigma == 0) {
    return {std::sqrt(mu), 0.0};
  }
  double sum = 0;
  double sum2 = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double y = std::sqrt(std::max(mu + sigma * rng.normal(), 0.0));
    sum += y;
    sum2 += y * y;
  }
  const double dn = static_cast<double>(n);
  const double mean = sum / dn;
  return {mean, std::sqrt(std::max(0.0, (sum2 - dn * mean * mean) / (dn - 1.0)))};
}

MatrixXd random_correlation(Eigen::Index n, double max_offdiag, SeededRng& rng) {
  if (n < 1 || max_offdiag < 0 || max_offdiag >= 1) {
    throw ValidationError("random_correlation: need n >= 1 and 0 <= max_offdiag < 1");
  }
  for (;;) {
    MatrixXd r = MatrixXd::Identity(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a + 1; b < n; ++b) {
        r(a, b) = r(b, a) = rng.uniform(-max_offdiag, max_offdiag);
      }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(r, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() > 1e-6) {
      return r;
    }
  }
}

RandomState random_state(Eigen::Index categories, int opponents, double max_abs_mu,
                         double max_offdiag, SeededRng& rng) {
  RandomState out;
  out.shape.num_opponents = opponents;
  out.shape.rho = random_correlation(categories, max_offdiag, rng);
  out.shape.sigma_c.resize(categories);
  for (Eigen::Index c = 0; c < categories; ++c) {
    out.shape.sigma_c(c) = rng.uniform();
  }
  out.mu.resize(categories, opponents);
  for (Eigen::Index o = 0; o < opponents; ++o) {
    for (Eigen::Index c = 0; c < categories; ++c) {
      out.mu(c, o) = rng.uniform(-max_abs_mu, max_abs_mu);
    }
  }
  return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx[i] = i;
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) {
      ++j;
    }
    const double rank = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) {
      ranks[idx[k]] = rank;
    }
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("spearman: need two equal-length samples of size >= 2");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const Eigen::Map<const VectorXd> a(rx.data(), static_cast<Eigen::Index>(rx.size()));
  const Eigen::Map<const VectorXd> b(ry.data(), static_cast<Eigen::Index>(ry.size()));
  const VectorXd da = a.array() - a.mean();
  const VectorXd db = b.array() - b.mean();
  const double denom = std::sqrt(da.squaredNorm() * db.squaredNorm());
  return denom > 0 ? da.dot(db) / denom : 0.0;
}

std::vector<CalibrationCase> calibration_sweep(const CalibrationConfig& config,
                                               const SeededRng& rng) {
  if (config.configs < 1 || config.draws < 1) {
    throw ValidationError("calibration_sweep: configs and draws must be positive");
  }
  const Eigen::Index nc = config.categories;
  const Eigen::Index no = config.opponents;
  std::vector<CalibrationCase> out(static_cast<std::size_t>(config.configs));
  for (int i = 0; i < config.configs; ++i) {
    SeededRng local = rng.derive(static_cast<std::uint64_t>(i));
    auto& cc = out[static_cast<std::size_t>(i)];
    cc.shape.num_opponents = config.opponents;
    cc.shape.rho = random_correlation(nc, config.max_offdiag, local);
    cc.mu.resize(nc, no);
    cc.shape.sigma_c = VectorXd::Zero(nc);
    if (config.consistent_shape) {
      for (Eigen::Index c = 0; c < nc; ++c) {
        const double team = local.uniform(-0.5, 1.0);
        const double spread = local.uniform(0.0, 1.0);
        VectorXd m(no);
        for (Eigen::Index o = 0; o < no; ++o) {
          m(o) = spread / std::sqrt(2.0) * local.normal();
        }
        cc.mu.row(c) = (team - m.array()).transpose();
        const double var = no > 1 ? (m.array() - m.mean()).square().sum() / (no - 1) : 0.0;
        cc.shape.sigma_c(c) = std::sqrt(2.0 * var);
      }
    } else {
      for (Eigen::Index o = 0; o < no; ++o) {
        for (Eigen::Index c = 0; c < nc; ++c) {
          cc.mu(c, o) = local.uniform(-1.0, 1.0);
        }
      }
    }
    cc.analytic_v = evaluate(cc.mu, cc.shape).v;
    cc.mc = mc_win_probability(team_means_from_matchups(cc.mu), cc.shape.rho, config.draws,
                               local.derive(0x6d63), config.workers);
  }
  return out;
}

}  // namespace roto
