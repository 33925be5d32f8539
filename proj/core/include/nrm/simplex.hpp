#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace nrm {

/// Solution of  max r^T x  s.t.  A x <= c,  0 <= x <= 1.
struct LpSolution {
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> dual;  // one price per row, nonnegative at optimum
  int iterations = 0;
  bool ok = false;
};

/// Dense revised primal simplex with bounded variables; the basis is
/// m x m, so this is intended for LPs with few rows and many columns.
/// `column(j)` must return a pointer to the m consumption entries of
/// variable j.  `warm_prices`, when given, seeds the initial bound
/// statuses by thresholding r_j against the priced consumption.
LpSolution solve_packing_lp(int rows, std::int64_t cols,
                            const std::function<const double*(std::int64_t)>& column,
                            const std::vector<double>& reward, const std::vector<double>& capacity,
                            const std::vector<double>* warm_prices = nullptr);

}  // namespace nrm
