#pragma once

// Tractable approximation of the probability that a team wins a Rotisserie
// league, built from its matrix of normalized matchup means.
//
// Conventions: mu(c, o) is the expected score differential against opponent o
// in category c divided by sqrt(2) * sigma, so each matchup differential has
// unit variance and the team wins that matchup with probability Phi(mu(c, o)).
// Fantasy points follow the surpass-count convention (0..|O| per category).

#include <cmath>
#include <numbers>

#include "roto/stat_core.hpp"

namespace roto {

/// |C| x |O| matrix of normalized matchup means.
template <typename Scalar>
using MatchupMatrix = Matrix<Scalar>;

template <typename Scalar>
struct LeagueShapeT {
  int num_opponents = 0;
  Matrix<Scalar> rho;      // |C| x |C| category correlation
  Vector<Scalar> sigma_c;  // opponent spread per category, sqrt(2)-scaled

  Eigen::Index num_categories() const { return rho.rows(); }

  void validate() const {
    if (rho.rows() < 1 || rho.rows() != rho.cols()) {
      throw ValidationError("league shape: rho must be a non-empty square matrix");
    }
    if (sigma_c.size() != rho.rows()) {
      throw ValidationError("league shape: sigma_c length must equal the category count");
    }
    if (num_opponents < 1) {
      throw ValidationError("league shape: need at least one opponent");
    }
    if (num_opponents > 20) {
      throw UnsupportedLeagueSize("league shape: at most 20 opponents are supported");
    }
    if (!sigma_c.allFinite() || (sigma_c.array() < Scalar(0)).any()) {
      throw ValidationError("league shape: sigma_c entries must be finite and >= 0");
    }
    if (!rho.allFinite()) {
      throw ValidationError("league shape: rho must be finite");
    }
  }

  static LeagueShapeT independent(Eigen::Index categories, int opponents,
                                  Scalar sigma = Scalar(0)) {
    LeagueShapeT shape;
    shape.num_opponents = opponents;
    shape.rho = Matrix<Scalar>::Identity(categories, categories);
    shape.sigma_c = Vector<Scalar>::Constant(categories, sigma);
    return shape;
  }
};

using LeagueShape = LeagueShapeT<double>;

template <typename Scalar>
struct ObjectiveBreakdownT {
  Scalar mu_T{};
  Scalar sigma2_T{};
  Scalar e_sigma2_M{};
  Scalar mu_L{};
  Scalar sigma2_L{};
  Scalar mu_D{};
  Scalar sigma2_D{};
  Scalar v{};
};

using ObjectiveBreakdown = ObjectiveBreakdownT<double>;

template <typename Scalar>
struct TeamHelpers {
  Scalar F_a{};
  Scalar F_b{};
  Scalar G_ab{};
  Scalar H_ab{};
};

template <typename Scalar>
struct TeamMoments {
  Scalar mu_T{};
  Scalar sigma2_T{};
};

template <typename Scalar>
struct GapMoments {
  Scalar mu_L{};
  Scalar sigma2_L{};
};

template <typename Scalar>
struct DifferentialMoments {
  Scalar mu_D{};
  Scalar sigma2_D{};
  Scalar v{};
};

inline constexpr double kSigma2TFloor = 1e-9;

template <typename Scalar>
void check_dimensions(const MatchupMatrix<Scalar>& state, const LeagueShapeT<Scalar>& shape) {
  shape.validate();
  if (state.rows() != shape.num_categories() || state.cols() != shape.num_opponents) {
    throw ValidationError("matchup matrix must be |C| x |O| (" +
                          std::to_string(shape.num_categories()) + " x " +
                          std::to_string(shape.num_opponents) + "), got " +
                          std::to_string(state.rows()) + " x " + std::to_string(state.cols()));
  }
  if (!state.allFinite()) {
    throw ValidationError("matchup matrix entries must be finite");
  }
}

/// F, G and H for one category pair. F(c) = sum_o phi(mu(c, o)),
/// G(a, b) = sum_o phi(mu(a, o)) phi(mu(b, o)), H(c, c) = F^2 - G,
/// H(a, b) = F_a F_b + G for a != b.
template <typename Scalar>
TeamHelpers<Scalar> helpers_T(const MatchupMatrix<Scalar>& state, Eigen::Index a,
                              Eigen::Index b) {
  if (a < 0 || b < 0 || a >= state.rows() || b >= state.rows()) {
    throw ValidationError("helpers_T: category index out of range");
  }
  TeamHelpers<Scalar> out;
  for (Eigen::Index o = 0; o < state.cols(); ++o) {
    const Scalar pa = norm_pdf(state(a, o));
    const Scalar pb = norm_pdf(state(b, o));
    out.F_a += pa;
    out.F_b += pb;
    out.G_ab += pa * pb;
  }
  out.H_ab = (a == b) ? out.F_a * out.F_a - out.G_ab : out.F_a * out.F_b + out.G_ab;
  return out;
}

/// Expected H for a generic opponent whose matchup means are iid
/// N(0, sigma_c^2).
template <typename Scalar>
Scalar helper_H_M(const LeagueShapeT<Scalar>& shape, Eigen::Index a, Eigen::Index b) {
  const Scalar n = Scalar(shape.num_opponents);
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar sa = shape.sigma_c(a) * shape.sigma_c(a);
  if (a == b) {
    return n * (n - Scalar(1)) / (two_pi * (sa + Scalar(1)));
  }
  const Scalar sb = shape.sigma_c(b) * shape.sigma_c(b);
  return n * (n + Scalar(1)) / (two_pi * std::sqrt((sa + Scalar(1)) * (sb + Scalar(1))));
}

/// Expected fantasy-point variance of a generic opponent, E(sigma_M^2).
template <typename Scalar>
Scalar opponent_variance(const LeagueShapeT<Scalar>& shape) {
  shape.validate();
  const Eigen::Index nc = shape.num_categories();
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar bernoulli = 0;
  for (Eigen::Index c = 0; c < nc; ++c) {
    const Scalar s2 = shape.sigma_c(c) * shape.sigma_c(c);
    bernoulli += std::acos(s2 / (Scalar(1) + s2)) / two_pi;
  }
  Scalar covariance = 0;
  for (Eigen::Index a = 0; a < nc; ++a) {
    for (Eigen::Index b = 0; b < nc; ++b) {
      covariance += shape.rho(a, b) * helper_H_M(shape, a, b);
    }
  }
  return std::max(Scalar(0), Scalar(shape.num_opponents) * bernoulli + covariance / Scalar(2));
}

namespace detail {

// Per-entry Phi and phi plus row sums of phi; shared by the objective and its
// gradient so both walk the matrix in the same order.
template <typename Scalar>
struct TeamTerms {
  Matrix<Scalar> cdf;
  Matrix<Scalar> pdf;
  Vector<Scalar> F;
  Scalar mu_T{};
  Scalar raw_sigma2_T{};
};

template <typename Scalar>
TeamTerms<Scalar> team_terms(const MatchupMatrix<Scalar>& state, const Matrix<Scalar>& rho) {
  const Eigen::Index nc = state.rows();
  const Eigen::Index no = state.cols();
  TeamTerms<Scalar> t;
  t.cdf.resize(nc, no);
  t.pdf.resize(nc, no);
  t.F = Vector<Scalar>::Zero(nc);
  Scalar bernoulli = 0;
  for (Eigen::Index c = 0; c < nc; ++c) {
    for (Eigen::Index o = 0; o < no; ++o) {
      const Scalar p = norm_cdf(state(c, o));
      const Scalar d = norm_pdf(state(c, o));
      t.cdf(c, o) = p;
      t.pdf(c, o) = d;
      t.mu_T += p;
      bernoulli += p * (Scalar(1) - p);
      t.F(c) += d;
    }
  }
  const Matrix<Scalar> G = t.pdf * t.pdf.transpose();
  Scalar covariance = 0;
  for (Eigen::Index a = 0; a < nc; ++a) {
    for (Eigen::Index b = 0; b < nc; ++b) {
      const Scalar h = (a == b) ? t.F(a) * t.F(a) - G(a, a) : t.F(a) * t.F(b) + G(a, b);
      covariance += rho(a, b) * h;
    }
  }
  t.raw_sigma2_T = bernoulli + covariance / Scalar(2);
  return t;
}

}  // namespace detail

/// Mean and variance of the team's own fantasy-point total. The variance is
/// floored at 1e-9; strongly negative correlations can push the first-order
/// covariance sum slightly below zero.
template <typename Scalar>
TeamMoments<Scalar> team_moments(const MatchupMatrix<Scalar>& state,
                                 const LeagueShapeT<Scalar>& shape) {
  check_dimensions(state, shape);
  const auto t = detail::team_terms(state, shape.rho);
  return {t.mu_T, std::max(Scalar(kSigma2TFloor), t.raw_sigma2_T)};
}

/// Mean and variance of L, the best opponent's lead over the average one.
template <typename Scalar>
GapMoments<Scalar> gap_moments(Scalar e_sigma2_M, const LeagueShapeT<Scalar>& shape) {
  if (!(e_sigma2_M >= Scalar(0))) {
    throw ValidationError("gap_moments: expected opponent variance must be >= 0");
  }
  const auto stats = max_order_stats(shape.num_opponents);
  return {Scalar(stats.mev) * std::sqrt(e_sigma2_M), Scalar(stats.mvar) * e_sigma2_M};
}

/// D = T (|O|+1)/|O| - |C|(|O|+1)/2 - L and V = Phi(mu_D / sigma_D).
/// With sigma_D = 0, V is 1, 0 or 1/2 by the sign of mu_D.
template <typename Scalar>
DifferentialMoments<Scalar> differential_and_v(Scalar mu_T, Scalar sigma2_T, Scalar mu_L,
                                               Scalar sigma2_L,
                                               const LeagueShapeT<Scalar>& shape) {
  if (sigma2_T < Scalar(0) || sigma2_L < Scalar(0)) {
    throw ValidationError("differential_and_v: variances must be >= 0");
  }
  const Scalar n = Scalar(shape.num_opponents);
  const Scalar scale = (n + Scalar(1)) / n;
  DifferentialMoments<Scalar> out;
  out.mu_D = mu_T * scale - Scalar(shape.num_categories()) * (n + Scalar(1)) / Scalar(2) - mu_L;
  out.sigma2_D = scale * sigma2_T + sigma2_L;
  if (out.sigma2_D > Scalar(0)) {
    out.v = norm_cdf(out.mu_D / std::sqrt(out.sigma2_D));
  } else if (out.mu_D > Scalar(0)) {
    out.v = Scalar(1);
  } else if (out.mu_D < Scalar(0)) {
    out.v = Scalar(0);
  } else {
    out.v = Scalar(0.5);
  }
  return out;
}

template <typename Scalar>
ObjectiveBreakdownT<Scalar> evaluate(const MatchupMatrix<Scalar>& state,
                                     const LeagueShapeT<Scalar>& shape) {
  check_dimensions(state, shape);
  ObjectiveBreakdownT<Scalar> out;
  out.e_sigma2_M = opponent_variance(shape);
  const auto team = team_moments(state, shape);
  out.mu_T = team.mu_T;
  out.sigma2_T = team.sigma2_T;
  const auto gap = gap_moments(out.e_sigma2_M, shape);
  out.mu_L = gap.mu_L;
  out.sigma2_L = gap.sigma2_L;
  const auto diff = differential_and_v(out.mu_T, out.sigma2_T, out.mu_L, out.sigma2_L, shape);
  out.mu_D = diff.mu_D;
  out.sigma2_D = diff.sigma2_D;
  out.v = diff.v;
  return out;
}

}  // namespace roto
