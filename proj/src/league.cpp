#include "roto/league.hpp"

namespace roto {

Standings score_rotisserie(const MatrixXd& values, const std::vector<bool>& higher_is_better) {
  const Eigen::Index teams = values.rows();
  const Eigen::Index cats = values.cols();
  if (static_cast<Eigen::Index>(higher_is_better.size()) != cats) {
    throw ValidationError("score_rotisserie: one direction flag per category required");
  }
  Standings s;
  s.internal_points = MatrixXd::Zero(teams, cats);
  for (Eigen::Index c = 0; c < cats; ++c) {
    const double sign = higher_is_better[static_cast<std::size_t>(c)] ? 1.0 : -1.0;
    for (Eigen::Index i = 0; i < teams; ++i) {
      for (Eigen::Index j = i + 1; j < teams; ++j) {
        const double a = sign * values(i, c);
        const double b = sign * values(j, c);
        if (a > b) {
          s.internal_points(i, c) += 1.0;
        } else if (b > a) {
          s.internal_points(j, c) += 1.0;
        } else {
          s.internal_points(i, c) += 0.5;
          s.internal_points(j, c) += 0.5;
        }
      }
    }
  }
  s.totals = s.internal_points.rowwise().sum();
  s.win_share = VectorXd::Zero(teams);
  if (teams > 0) {
    const double best = s.totals.maxCoeff();
    const auto leaders = (s.totals.array() == best).count();
    for (Eigen::Index i = 0; i < teams; ++i) {
      if (s.totals(i) == best) {
        s.win_share(i) = 1.0 / static_cast<double>(leaders);
      }
    }
  }
  return s;
}

Standings score_rotisserie(const MatrixXd& values) {
  return score_rotisserie(values, std::vector<bool>(static_cast<std::size_t>(values.cols()), true));
}

double total_internal_points(Eigen::Index categories, Eigen::Index teams) {
  return static_cast<double>(categories) * static_cast<double>(teams) *
         static_cast<double>(teams - 1) / 2.0;
}

}  // namespace roto
