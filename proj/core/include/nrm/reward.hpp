#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace nrm {

enum class RewardKind { Uniform, TruncatedLinear, PointMass };

/// Reward law on an interval [l, u] with density bounded in [alpha, beta].
/// Three built-in kinds keep the quantile, the tail expectation and the
/// top-quantile mean in closed form; external laws can plug in through
/// invert_cdf() below.
class RewardDistribution {
 public:
  static RewardDistribution uniform(double l, double u);
  // Density rises linearly from `alpha` at l to `beta` at u;
  // (alpha + beta) * (u - l) / 2 must equal 1.
  static RewardDistribution truncated_linear(double l, double u, double alpha, double beta);
  static RewardDistribution point_mass(double v);

  RewardKind kind() const { return kind_; }
  double lower() const { return l_; }
  double upper() const { return u_; }
  double density_floor() const { return alpha_; }
  double density_ceiling() const { return beta_; }

  double mean() const;

  // F(r), right-continuous; 0 below l, 1 at and above u.
  double cdf(double r) const;
  // F^{-1}(p) for p in [0, 1]; throws std::domain_error outside.
  double quantile(double p) const;
  double density(double r) const;

  // P(r > z) computed as 1 - F(z); for the point mass this is 1{z < atom}.
  double tail_prob(double z) const { return 1.0 - cdf_raw(z); }
  // P(r >= z): differs from tail_prob only at the point-mass atom.
  double accept_prob(double z) const;

  // E[(r - z)^+], closed form.
  double mean_above(double z) const;
  // E[r * 1{r >= z}].
  double mean_tail(double z) const;

  // top_mean(q) = integral of F^{-1}(p) over p in [1-q, 1].
  double top_mean(double q) const;

 private:
  RewardDistribution(RewardKind k, double l, double u, double a, double b)
      : kind_(k), l_(l), u_(u), alpha_(a), beta_(b) {}
  double cdf_raw(double r) const;

  RewardKind kind_;
  double l_, u_;
  double alpha_, beta_;
};

// Numeric quantile inversion for user-defined laws with a monotone CDF.
template <class Cdf>
double invert_cdf(Cdf&& F, double lo, double hi, double p, double tol = 1e-12) {
  if (p < 0.0 || p > 1.0) throw std::domain_error("invert_cdf: p outside [0,1]");
  double a = lo, b = hi;
  while (b - a > tol) {
    double mid = 0.5 * (a + b);
    if (F(mid) < p)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

// Adaptive Simpson quadrature with an absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abstol = 1e-10);

}  // namespace nrm
