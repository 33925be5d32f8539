#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nrm/instance.hpp"
#include "nrm/sample_path.hpp"

namespace nrm {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

/// Box domain [0, gamma] for dual prices; the default upper bound is
/// twice the largest per-unit reward u_j / a_{j,i}, so projection is
/// never active at a true optimum.
struct DualDomain {
  std::vector<double> gamma;
  static DualDomain for_instance(const InstanceSpec& spec, double scale = 2.0);
};

struct FluidSolution {
  std::vector<double> quantiles;  // q*_j
  std::vector<double> dual;       // mu*_i
  double objective = 0.0;
  double kkt_residual = 0.0;
};

/// Ex-ante (fluid) relaxation with weights p_j * s: maximizes
/// sum_j p_j s * top_mean_j(q_j) subject to the capacity rows.
/// Solved through its dual; `warm` seeds the dual iteration.
FluidSolution solve_fluid(const InstanceSpec& spec, const std::vector<double>& capacity,
                          std::int64_t periods_left, const std::vector<double>* warm = nullptr);

/// Semi-fluid relaxation: identical program with realized counts d_j as
/// weights.  Types with d_j = 0 get q_j = 0 by convention.
FluidSolution solve_semifluid(const InstanceSpec& spec, const std::vector<std::int64_t>& counts,
                              const std::vector<double>& capacity,
                              const std::vector<double>* warm = nullptr);
FluidSolution solve_semifluid(const InstanceSpec& spec, const std::vector<double>& counts,
                              const std::vector<double>& capacity,
                              const std::vector<double>* warm = nullptr);

enum class DualMode { Population, Sample };

struct DualResult {
  std::vector<double> mu;
  double value = 0.0;     // L(mu) at the returned point
  double residual = 0.0;  // projected-(sub)gradient optimality residual
};

/// Minimizes L(mu) = (c/(s-1))' mu + avg[(r - a' mu)^+] over the box
/// domain.  Population mode evaluates the expectation in closed form;
/// sample mode averages over the realized suffix starting at
/// `from_period` (s-1 queries).
DualResult minimize_dual(const InstanceSpec& spec, const std::vector<double>& capacity,
                         std::int64_t periods_left, DualMode mode,
                         const SamplePath* path = nullptr, std::int64_t from_period = 1,
                         const std::vector<double>* warm = nullptr);

}  // namespace nrm
