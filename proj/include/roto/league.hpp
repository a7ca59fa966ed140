#pragma once

#include <vector>

#include "roto/stat_core.hpp"

namespace roto {

/// Rotisserie outcome for one season. Internal convention: a team earns one
/// point per team it surpasses in a category; tied teams split the contested
/// point, so each category always distributes K(K-1)/2 points in total.
struct Standings {
  MatrixXd internal_points;  // K x C
  VectorXd totals;           // K, internal convention
  VectorXd win_share;        // K, 1/k for each of k teams tied on the top total

  /// Standard convention: last place earns one point per category.
  MatrixXd standard_points() const { return internal_points.array() + 1.0; }
};

/// `values` is K x C (team rows); `higher_is_better` has one flag per column.
Standings score_rotisserie(const MatrixXd& values, const std::vector<bool>& higher_is_better);

/// Same, all categories higher-is-better.
Standings score_rotisserie(const MatrixXd& values);

/// Total internal points any season must distribute: C * K(K-1)/2.
double total_internal_points(Eigen::Index categories, Eigen::Index teams);

}  // namespace roto
