#include "nrm/instance.hpp"

#include <cmath>
#include <stdexcept>

namespace nrm {

std::vector<double> InstanceSpec::initial_capacity() const {
  std::vector<double> c(capacity_ratio.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = capacity_ratio[i] * static_cast<double>(horizon);
  return c;
}

void InstanceSpec::validate() const {
  if (resources <= 0) throw std::invalid_argument("instance: resources must be positive");
  if (static_cast<int>(capacity_ratio.size()) != resources)
    throw std::invalid_argument("instance: capacity_ratio length must equal resources");
  for (double r : capacity_ratio)
    if (!(r > 0.0)) throw std::invalid_argument("instance: capacity ratios must be positive");
  if (types.empty()) throw std::invalid_argument("instance: at least one type required");
  if (horizon < 1) throw std::invalid_argument("instance: horizon must be >= 1");
  double psum = 0.0;
  for (const auto& t : types) {
    if (static_cast<int>(t.consumption.size()) != resources)
      throw std::invalid_argument("instance: consumption vector length must equal resources");
    for (double a : t.consumption)
      if (a < 0.0) throw std::invalid_argument("instance: consumption must be nonnegative");
    if (!(t.probability > 0.0 && t.probability <= 1.0))
      throw std::invalid_argument("instance: type probability must be in (0,1]");
    psum += t.probability;
  }
  if (std::abs(psum - 1.0) > 1e-12 * types.size())
    throw std::invalid_argument("instance: type probabilities must sum to 1");
}

bool InstanceSpec::single_resource_unit_demand() const {
  if (resources != 1) return false;
  for (const auto& t : types)
    if (t.consumption[0] != 1.0) return false;
  return true;
}

InstanceSpec make_degenerate_triangle(double eps, std::int64_t horizon) {
  InstanceSpec spec;
  spec.resources = 3;
  double denom = 1.0 + 5.0 * eps;
  double rho = 2.0 * eps * (1.0 + eps) / denom;
  spec.capacity_ratio = {rho, rho, rho};
  spec.horizon = horizon;
  auto u01 = RewardDistribution::uniform(0.0, 1.0);
  spec.types = {
      {{0.0, 1.0, 1.0}, 2.0 * eps / denom, u01},
      {{1.0, 0.0, 1.0}, (1.0 + eps) / denom, u01},
      {{1.0, 1.0, 0.0}, 2.0 * eps / denom, u01},
  };
  spec.validate();
  return spec;
}

InstanceSpec make_single_uniform(double capacity_ratio, std::int64_t horizon) {
  InstanceSpec spec;
  spec.resources = 1;
  spec.capacity_ratio = {capacity_ratio};
  spec.horizon = horizon;
  spec.types = {{{1.0}, 1.0, RewardDistribution::uniform(0.0, 1.0)}};
  spec.validate();
  return spec;
}

}  // namespace nrm
