#pragma once

#include <algorithm>
#include <cmath>

#include "roto/objective.hpp"

namespace roto {

/// dV/dmu(c, o), same shape as the matchup matrix.
template <typename Scalar>
using GradientMatrix = Matrix<Scalar>;

template <typename Scalar>
struct ObjectiveWithGradient {
  ObjectiveBreakdownT<Scalar> breakdown;
  GradientMatrix<Scalar> d_v;
  // z = mu_D / sigma_D and its gradient; V = Phi(z), and d_v = phi(z) d_z.
  // d_z stays informative where V has saturated at 0 or 1.
  Scalar z{};
  GradientMatrix<Scalar> d_z;
};

/// Evaluates V and its gradient in one pass. mu_L, sigma2_L and E(sigma_M^2)
/// depend only on the league shape, so they are constants here.
///
/// The sigma_T^2 term is scaled by (|O|+1)/|O| because sigma_D^2 carries that
/// factor; this is the exact derivative of evaluate(). Throws ValidationError
/// when sigma_D is zero.
template <typename Scalar>
ObjectiveWithGradient<Scalar> evaluate_with_gradient(const MatchupMatrix<Scalar>& state,
                                                     const LeagueShapeT<Scalar>& shape) {
  check_dimensions(state, shape);
  const auto terms = detail::team_terms(state, shape.rho);

  ObjectiveWithGradient<Scalar> out;
  auto& bd = out.breakdown;
  bd.e_sigma2_M = opponent_variance(shape);
  bd.mu_T = terms.mu_T;
  bd.sigma2_T = std::max(Scalar(kSigma2TFloor), terms.raw_sigma2_T);
  const auto gap = gap_moments(bd.e_sigma2_M, shape);
  bd.mu_L = gap.mu_L;
  bd.sigma2_L = gap.sigma2_L;
  const auto diff = differential_and_v(bd.mu_T, bd.sigma2_T, bd.mu_L, bd.sigma2_L, shape);
  bd.mu_D = diff.mu_D;
  bd.sigma2_D = diff.sigma2_D;
  bd.v = diff.v;
  if (!(bd.sigma2_D > Scalar(0))) {
    throw ValidationError("gradient undefined: sigma_D is zero");
  }

  const Eigen::Index nc = state.rows();
  const Eigen::Index no = state.cols();
  const Scalar n = Scalar(shape.num_opponents);
  const Scalar scale = (n + Scalar(1)) / n;
  const Scalar sigma_D = std::sqrt(bd.sigma2_D);
  out.z = bd.mu_D / sigma_D;
  const Scalar pdf_z = norm_pdf(out.z);
  const Scalar lead = Scalar(1) / (bd.sigma2_D * sigma_D);
  // The floor on sigma_T^2 is flat, so its derivative vanishes while active.
  const bool floored = terms.raw_sigma2_T < Scalar(kSigma2TFloor);

  out.d_z.resize(nc, no);
  for (Eigen::Index o = 0; o < no; ++o) {
    for (Eigen::Index c = 0; c < nc; ++c) {
      const Scalar mu = state(c, o);
      const Scalar pdf = terms.pdf(c, o);
      const Scalar d_mu_D = scale * pdf;
      Scalar d_sigma2_T = 0;
      if (!floored) {
        Scalar cross = 0;
        for (Eigen::Index b = 0; b < nc; ++b) {
          if (b != c) {
            cross += shape.rho(b, c) * (-terms.pdf(b, o) - terms.F(b));
          }
        }
        cross += shape.rho(c, c) * (pdf - terms.F(c));
        d_sigma2_T = mu * pdf * cross + pdf - Scalar(2) * terms.cdf(c, o) * pdf;
      }
      const Scalar d_sigma2_D = scale * d_sigma2_T;
      out.d_z(c, o) = lead * (bd.sigma2_D * d_mu_D - bd.mu_D / Scalar(2) * d_sigma2_D);
    }
  }
  out.d_v = pdf_z * out.d_z;
  return out;
}

template <typename Scalar>
GradientMatrix<Scalar> analytic_gradient(const MatchupMatrix<Scalar>& state,
                                         const LeagueShapeT<Scalar>& shape) {
  return evaluate_with_gradient(state, shape).d_v;
}

/// Central differences of evaluate(...).v, entry by entry.
template <typename Scalar>
GradientMatrix<Scalar> fd_gradient(const MatchupMatrix<Scalar>& state,
                                   const LeagueShapeT<Scalar>& shape, Scalar h) {
  if (!(h > Scalar(0))) {
    throw ValidationError("fd_gradient: step must be positive");
  }
  check_dimensions(state, shape);
  GradientMatrix<Scalar> out(state.rows(), state.cols());
  MatchupMatrix<Scalar> probe = state;
  for (Eigen::Index o = 0; o < state.cols(); ++o) {
    for (Eigen::Index c = 0; c < state.rows(); ++c) {
      const Scalar saved = probe(c, o);
      probe(c, o) = saved + h;
      const Scalar up = evaluate(probe, shape).v;
      probe(c, o) = saved - h;
      const Scalar down = evaluate(probe, shape).v;
      probe(c, o) = saved;
      out(c, o) = (up - down) / (Scalar(2) * h);
    }
  }
  return out;
}

struct GradientCheckReport {
  double max_relative_error = 0;
  double max_absolute_error = 0;
  Eigen::Index worst_category = 0;
  Eigen::Index worst_opponent = 0;
  bool passed = false;
};

inline constexpr double kRelativeErrorFloor = 1e-8;

/// |a - f| / max(|a|, |f|, 1e-8) over all entries.
template <typename Scalar>
GradientCheckReport gradient_check(const MatchupMatrix<Scalar>& state,
                                   const LeagueShapeT<Scalar>& shape, double tol,
                                   Scalar h = Scalar(1e-4)) {
  if (!(tol > 0)) {
    throw ValidationError("gradient_check: tolerance must be positive");
  }
  const auto analytic = analytic_gradient(state, shape);
  const auto numeric = fd_gradient(state, shape, h);
  GradientCheckReport report;
  for (Eigen::Index o = 0; o < state.cols(); ++o) {
    for (Eigen::Index c = 0; c < state.rows(); ++c) {
      const double a = static_cast<double>(analytic(c, o));
      const double f = static_cast<double>(numeric(c, o));
      const double abs_err = std::abs(a - f);
      const double rel = abs_err / std::max({std::abs(a), std::abs(f), kRelativeErrorFloor});
      report.max_absolute_error = std::max(report.max_absolute_error, abs_err);
      if (rel > report.max_relative_error) {
        report.max_relative_error = rel;
        report.worst_category = c;
        report.worst_opponent = o;
      }
    }
  }
  report.passed = report.max_relative_error <= tol;
  return report;
}

}  // namespace roto
