#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace roto {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Input failed a documented precondition (bad dimensions, out-of-range value, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// League needs an order-statistic row the tabulated data does not carry.
class UnsupportedLeagueSize : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

template <typename Scalar>
inline Scalar norm_pdf(Scalar x) {
  constexpr Scalar inv_sqrt_2pi = Scalar(0.398942280401432677939946059934381868L);
  return inv_sqrt_2pi * std::exp(-x * x / Scalar(2));
}

// erfc keeps full relative precision in the lower tail, so Phi(-x) does not
// cancel; absolute error is at the ulp level everywhere.
template <typename Scalar>
inline Scalar norm_cdf(Scalar x) {
  constexpr Scalar inv_sqrt2 = Scalar(0.707106781186547524400844362104849039L);
  return Scalar(0.5) * std::erfc(-x * inv_sqrt2);
}

/// First-order approximation of the standard bivariate Normal CDF for small
/// correlation: Phi(x)Phi(y) + rho phi(x) phi(y), clamped to [0, 1].
template <typename Scalar>
inline Scalar bvn_cdf_approx(Scalar x, Scalar y, Scalar rho) {
  const Scalar raw = norm_cdf(x) * norm_cdf(y) + rho * norm_pdf(x) * norm_pdf(y);
  return std::clamp(raw, Scalar(0), Scalar(1));
}

/// Standard bivariate Normal CDF P(X <= x, Y <= y) with corr(X, Y) = rho,
/// integrated numerically over the correlation path (absolute error ~1e-12).
/// |rho| == 1 uses the closed-form degenerate limit; |rho| > 1 throws.
double bvn_cdf_reference(double x, double y, double rho);

struct MaxOrderStatsRow {
  int n;
  double mev;  // E[max of n iid N(0,1)]
  double ex2;  // E[max^2]
  double mvar; // Var[max]
};

/// Moments of the maximum of n iid standard Normals, 1 <= n <= 20. Literal
/// transcription of Teichroew's tables (1956) to nine decimals.
const std::array<MaxOrderStatsRow, 20>& max_order_stats_table();

struct MaxOrderStats {
  double mev;
  double mvar;
};

/// Throws UnsupportedLeagueSize for n outside [1, 20].
MaxOrderStats max_order_stats(int n);

/// (teams!)^categories / teams, exact.
boost::multiprecision::cpp_int scenario_count(int teams, int categories);

/// Eigenvalue-clipped correlation matrix: negative eigenvalues set to zero,
/// then rescaled to unit diagonal. Throws ValidationError for non-square or
/// non-symmetric input.
MatrixXd nearest_psd(const MatrixXd& m);

bool is_symmetric(const MatrixXd& m, double tol = 1e-12);

/// Symmetric, unit diagonal, entries in [-1, 1]. Does not test definiteness.
void validate_correlation(const MatrixXd& rho);

}  // namespace roto
