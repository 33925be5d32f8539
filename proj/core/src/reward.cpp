#include "nrm/reward.hpp"

#include <algorithm>

namespace nrm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RewardDistribution RewardDistribution::uniform(double l, double u) {
  if (!(u > l) || l < 0.0)
    throw std::invalid_argument("uniform reward requires 0 <= l < u");
  double d = 1.0 / (u - l);
  return RewardDistribution(RewardKind::Uniform, l, u, d, d);
}

RewardDistribution RewardDistribution::truncated_linear(double l, double u, double alpha,
                                                        double beta) {
  if (!(u > l) || l < 0.0)
    throw std::invalid_argument("truncated-linear reward requires 0 <= l < u");
  if (alpha < 0.0 || beta < alpha)
    throw std::invalid_argument("truncated-linear reward requires 0 <= alpha <= beta");
  if (std::abs(0.5 * (alpha + beta) * (u - l) - 1.0) > 1e-9)
    throw std::invalid_argument("truncated-linear density does not integrate to 1");
  return RewardDistribution(RewardKind::TruncatedLinear, l, u, alpha, beta);
}

RewardDistribution RewardDistribution::point_mass(double v) {
  if (v < 0.0) throw std::invalid_argument("point-mass reward must be nonnegative");
  return RewardDistribution(RewardKind::PointMass, v, v, kInf, kInf);
}

double RewardDistribution::mean() const {
  switch (kind_) {
    case RewardKind::Uniform:
      return 0.5 * (l_ + u_);
    case RewardKind::TruncatedLinear: {
      // integral of r * (alpha + s*(r-l)) over [l, u]
      double w = u_ - l_, s = (beta_ - alpha_) / w;
      return alpha_ * 0.5 * (u_ * u_ - l_ * l_) +
             s * (w * w * w / 3.0 + l_ * w * w / 2.0);
    }
    case RewardKind::PointMass:
      return l_;
  }
  return 0.0;
}

double RewardDistribution::cdf_raw(double r) const {
  if (kind_ == RewardKind::PointMass) return r >= l_ ? 1.0 : 0.0;
  if (r <= l_) return 0.0;
  if (r >= u_) return 1.0;
  double x = r - l_;
  if (kind_ == RewardKind::Uniform) return x / (u_ - l_);
  double s = (beta_ - alpha_) / (u_ - l_);
  return alpha_ * x + 0.5 * s * x * x;
}

double RewardDistribution::cdf(double r) const { return cdf_raw(r); }

double RewardDistribution::quantile(double p) const {
  if (p < 0.0 || p > 1.0) throw std::domain_error("quantile: p outside [0,1]");
  switch (kind_) {
    case RewardKind::PointMass:
      return l_;
    case RewardKind::Uniform:
      return l_ + p * (u_ - l_);
    case RewardKind::TruncatedLinear: {
      double w = u_ - l_, s = (beta_ - alpha_) / w;
      if (s == 0.0) return l_ + p / alpha_;
      // alpha*x + s*x^2/2 = p, take the nonnegative root
      double x = (-alpha_ + std::sqrt(alpha_ * alpha_ + 2.0 * s * p)) / s;
      return l_ + std::clamp(x, 0.0, w);
    }
  }
  return l_;
}

double RewardDistribution::density(double r) const {
  if (kind_ == RewardKind::PointMass) return r == l_ ? kInf : 0.0;
  if (r < l_ || r > u_) return 0.0;
  if (kind_ == RewardKind::Uniform) return alpha_;
  return alpha_ + (beta_ - alpha_) * (r - l_) / (u_ - l_);
}

double RewardDistribution::accept_prob(double z) const {
  if (kind_ == RewardKind::PointMass) return l_ >= z ? 1.0 : 0.0;
  return 1.0 - cdf_raw(z);
}

double RewardDistribution::mean_above(double z) const {
  if (kind_ == RewardKind::PointMass) return std::max(l_ - z, 0.0);
  if (z >= u_) return 0.0;
  if (z <= l_) return mean() - z;
  // integral of (r - z) f(r) over [z, u]
  double w = u_ - l_;
  if (kind_ == RewardKind::Uniform) {
    return 0.5 * (u_ - z) * (u_ - z) / w;
  }
  double s = (beta_ - alpha_) / w;
  auto anti = [&](double r) {
    // antiderivative of (r - z)(alpha + s(r - l))
    double t = r - l_;
    return alpha_ * (0.5 * r * r - z * r) + s * (t * t * t / 3.0 + (l_ - z) * 0.5 * t * t);
  };
  return anti(u_) - anti(z);
}

double RewardDistribution::mean_tail(double z) const {
  return mean_above(z) + z * accept_prob(z);
}

double RewardDistribution::top_mean(double q) const {
  if (q < 0.0 || q > 1.0) throw std::domain_error("top_mean: q outside [0,1]");
  if (kind_ == RewardKind::PointMass) return q * l_;
  if (q == 0.0) return 0.0;
  double r0 = quantile(1.0 - q);
  // integral of F^{-1}(p) dp over [1-q, 1] equals integral of r f(r) dr over [r0, u]
  return mean_above(r0) + r0 * q;
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b,
                double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, lm, flm);
  double right = simpson(f, m, fm, b, fb, rm, frm);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abstol) {
  if (a == b) return 0.0;
  // Pre-split into panels so a kink that happens to agree with the
  // polynomial model at the coarse nodes cannot fake early convergence.
  const int panels = 8;
  double h = (b - a) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    double lo = a + k * h, hi = k + 1 == panels ? b : a + (k + 1) * h;
    double m = 0.5 * (lo + hi);
    double flo = f(lo), fhi = f(hi), fm = f(m);
    double whole = simpson(f, lo, flo, hi, fhi, m, fm);
    total += adaptive(f, lo, flo, hi, fhi, m, fm, whole, abstol / panels, 48);
  }
  return total;
}

}  // namespace nrm
