#include "roto/stat_core.hpp"

#include <cmath>
#include <functional>

namespace roto {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double bvn_cdf_reference(double x, double y, double rho) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(rho)) {
    throw ValidationError("bvn_cdf_reference: non-finite argument");
  }
  if (std::abs(rho) > 1.0) {
    throw ValidationError("bvn_cdf_reference: |rho| must not exceed 1");
  }
  if (rho == 1.0) {
    return norm_cdf(std::min(x, y));
  }
  if (rho == -1.0) {
    return std::max(0.0, norm_cdf(x) - norm_cdf(-y));
  }
  // d/drho Phi2 = phi2; with rho = sin(t) the Jacobian cancels the
  // 1/sqrt(1 - rho^2) singularity of the density.
  const auto integrand = [x, y](double t) {
    const double s = std::sin(t);
    const double c2 = 1.0 - s * s;
    return std::exp(-(x * x + y * y - 2.0 * x * y * s) / (2.0 * c2)) /
           (2.0 * std::numbers::pi);
  };
  const double upper = std::asin(rho);
  double correction = 0.0;
  if (upper != 0.0) {
    const double fa = integrand(0.0);
    const double fb = integrand(upper);
    const double fm = integrand(0.5 * upper);
    correction = adaptive_simpson(integrand, 0.0, upper, fa, fm, fb,
                                  simpson(fa, fm, fb, 0.0, upper), 1e-13, 40);
  }
  return std::clamp(norm_cdf(x) * norm_cdf(y) + correction, 0.0, 1.0);
}

const std::array<MaxOrderStatsRow, 20>& max_order_stats_table() {
  // Columns as published. The N = 16 mean is about 1e-3 above the exact
  // integral; the variance column was derived from it, so the row is
  // internally consistent and kept verbatim.
  static const std::array<MaxOrderStatsRow, 20> table{{
      {1, 0.0, 1.0, 1.0},
      {2, 0.564189584, 1.0, 0.681690114},
      {3, 0.846284375, 1.275664448, 0.559467204},
      {4, 1.029375373, 1.551328895, 0.491715237},
      {5, 1.162964474, 1.800020436, 0.447534069},
      {6, 1.267206361, 2.021739069, 0.415927109},
      {7, 1.352178376, 2.220304137, 0.391917777},
      {8, 1.423600306, 2.399534975, 0.372897143},
      {9, 1.485013162, 2.562617418, 0.357353326},
      {10, 1.538752731, 2.71210379, 0.344343823},
      {11, 1.586436352, 2.850027741, 0.333247443},
      {12, 1.62922764, 2.97801909, 0.323636387},
      {13, 1.667990177, 3.097396615, 0.315205384},
      {14, 1.703381554, 3.209238821, 0.307730102},
      {15, 1.735913445, 3.314427059, 0.30103157},
      {16, 1.766991393, 3.413735409, 0.291476826},
      {17, 1.793941081, 3.507760835, 0.289536233},
      {18, 1.820031879, 3.59704617, 0.28453013},
      {19, 1.844481512, 3.682047852, 0.279935805},
      {20, 1.86747506, 3.763159715, 0.275696616},
  }};
  return table;
}

MaxOrderStats max_order_stats(int n) {
  if (n < 1 || n > 20) {
    throw UnsupportedLeagueSize("max-order statistics are tabulated for 1..20 opponents, got " +
                                std::to_string(n));
  }
  const auto& row = max_order_stats_table()[static_cast<std::size_t>(n - 1)];
  return {row.mev, row.mvar};
}

boost::multiprecision::cpp_int scenario_count(int teams, int categories) {
  if (teams < 2 || categories < 1) {
    throw ValidationError("scenario_count: need teams >= 2 and categories >= 1");
  }
  boost::multiprecision::cpp_int factorial = 1;
  for (int k = 2; k <= teams; ++k) {
    factorial *= k;
  }
  return boost::multiprecision::pow(factorial, static_cast<unsigned>(categories)) / teams;
}

bool is_symmetric(const MatrixXd& m, double tol) {
  return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

void validate_correlation(const MatrixXd& rho) {
  if (rho.rows() == 0 || !is_symmetric(rho, 1e-9)) {
    throw ValidationError("correlation matrix must be square, non-empty and symmetric");
  }
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    if (std::abs(rho(i, i) - 1.0) > 1e-9) {
      throw ValidationError("correlation matrix must have unit diagonal");
    }
  }
  if (!rho.allFinite() || rho.cwiseAbs().maxCoeff() > 1.0 + 1e-12) {
    throw ValidationError("correlation entries must lie in [-1, 1]");
  }
}

MatrixXd nearest_psd(const MatrixXd& m) {
  if (m.rows() == 0 || !is_symmetric(m, 1e-9)) {
    throw ValidationError("nearest_psd: input must be square and symmetric");
  }
  const MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym);
  const VectorXd& values = eig.eigenvalues();
  if (values.minCoeff() >= 0.0) {
    MatrixXd out = sym;
    out.diagonal().setOnes();
    return out;
  }
  const VectorXd clipped = values.cwiseMax(0.0);
  MatrixXd out = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  const VectorXd d = out.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  out = d.asDiagonal() * out * d.asDiagonal();
  out = 0.5 * (out + out.transpose());
  out.diagonal().setOnes();
  return out;
}

}  // namespace roto
