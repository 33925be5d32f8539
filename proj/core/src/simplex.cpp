#include "nrm/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nrm {

namespace {

constexpr double kPivTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status : unsigned char { Lower, Upper, Basic };

struct Tableau {
  int m;
  std::int64_t n;  // structural variables; slacks are n..n+m-1
  const std::function<const double*(std::int64_t)>* col;
  std::vector<double> binv;  // m*m row-major, B^{-1}
  std::vector<int> basis;    // variable index per basis row
  std::vector<double> xb;
  std::vector<Status> status;  // n+m entries

  double upper_bound(std::int64_t v) const { return v < n ? 1.0 : kInf; }

  void column_of(std::int64_t v, double* out) const {
    if (v < n) {
      const double* a = (*col)(v);
      std::copy(a, a + m, out);
    } else {
      std::fill(out, out + m, 0.0);
      out[v - n] = 1.0;
    }
  }
};

// Gauss-Jordan inverse of the current basis matrix; returns false if singular.
bool refactorize(Tableau& T) {
  int m = T.m;
  std::vector<double> B(m * m), inv(m * m, 0.0), colbuf(m);
  for (int k = 0; k < m; ++k) {
    T.column_of(T.basis[k], colbuf.data());
    for (int i = 0; i < m; ++i) B[i * m + k] = colbuf[i];
    inv[k * m + k] = 1.0;
  }
  for (int p = 0; p < m; ++p) {
    int piv = p;
    for (int i = p + 1; i < m; ++i)
      if (std::abs(B[i * m + p]) > std::abs(B[piv * m + p])) piv = i;
    if (std::abs(B[piv * m + p]) < 1e-13) return false;
    if (piv != p) {
      for (int j = 0; j < m; ++j) {
        std::swap(B[p * m + j], B[piv * m + j]);
        std::swap(inv[p * m + j], inv[piv * m + j]);
      }
    }
    double d = B[p * m + p];
    for (int j = 0; j < m; ++j) {
      B[p * m + j] /= d;
      inv[p * m + j] /= d;
    }
    for (int i = 0; i < m; ++i) {
      if (i == p) continue;
      double f = B[i * m + p];
      if (f == 0.0) continue;
      for (int j = 0; j < m; ++j) {
        B[i * m + j] -= f * B[p * m + j];
        inv[i * m + j] -= f * inv[p * m + j];
      }
    }
  }
  T.binv = std::move(inv);
  return true;
}

void recompute_xb(Tableau& T, const std::vector<double>& capacity) {
  int m = T.m;
  std::vector<double> rhs(capacity);
  std::vector<double> colbuf(m);
  for (std::int64_t v = 0; v < T.n; ++v) {
    if (T.status[v] == Status::Upper) {
      const double* a = (*T.col)(v);
      for (int i = 0; i < m; ++i) rhs[i] -= a[i];
    }
  }
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += T.binv[i * m + j] * rhs[j];
    T.xb[i] = s;
  }
}

}  // namespace

LpSolution solve_packing_lp(int rows, std::int64_t cols,
                            const std::function<const double*(std::int64_t)>& column,
                            const std::vector<double>& reward, const std::vector<double>& capacity,
                            const std::vector<double>* warm_prices) {
  LpSolution sol;
  const int m = rows;
  const std::int64_t n = cols;
  Tableau T;
  T.m = m;
  T.n = n;
  T.col = &column;
  T.binv.assign(m * m, 0.0);
  for (int i = 0; i < m; ++i) T.binv[i * m + i] = 1.0;
  T.basis.resize(m);
  for (int i = 0; i < m; ++i) T.basis[i] = static_cast<int>(n) + i;
  T.xb.assign(m, 0.0);
  T.status.assign(n + m, Status::Lower);

  // Crash: threshold against scaled warm prices, scaling up until feasible.
  if (warm_prices && m > 0) {
    double kappa = 1.0;
    std::vector<Status> st(n, Status::Lower);
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<double> load(m, 0.0);
      for (std::int64_t j = 0; j < n; ++j) {
        const double* a = column(j);
        double price = 0.0;
        for (int i = 0; i < m; ++i) price += a[i] * (*warm_prices)[i];
        st[j] = reward[j] > kappa * price ? Status::Upper : Status::Lower;
        if (st[j] == Status::Upper)
          for (int i = 0; i < m; ++i) load[i] += a[i];
      }
      bool feasible = true;
      for (int i = 0; i < m; ++i)
        if (load[i] > capacity[i] + 1e-9 * std::max(1.0, capacity[i])) feasible = false;
      if (feasible) {
        for (std::int64_t j = 0; j < n; ++j) T.status[j] = st[j];
        break;
      }
      kappa = kappa == 1.0 && attempt == 0 ? 1.05 : kappa * 1.6;
    }
  }
  recompute_xb(T, capacity);
  for (int i = 0; i < m; ++i) T.xb[i] = std::max(T.xb[i], 0.0);

  double rmax = 1.0;
  for (double r : reward) rmax = std::max(rmax, std::abs(r));
  const double tol_d = 1e-9 * rmax;

  std::vector<double> y(m), w(m), colbuf(m);
  const std::int64_t max_iter = 4 * (n + m) + 20000;
  const std::int64_t bland_after = 2 * (n + m) + 10000;
  std::int64_t iter = 0;
  int pivots_since_refactor = 0;

  for (; iter < max_iter; ++iter) {
    // duals y = c_B^T B^{-1}
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) {
        int bv = T.basis[k];
        if (bv < n) s += reward[bv] * T.binv[k * m + i];
      }
      y[i] = s;
    }
    // pricing
    bool bland = iter > bland_after;
    std::int64_t enter = -1;
    double best = tol_d;
    int dir = +1;
    for (std::int64_t j = 0; j < n + m; ++j) {
      if (T.status[j] == Status::Basic) continue;
      double d;
      if (j < n) {
        const double* a = column(j);
        d = reward[j];
        for (int i = 0; i < m; ++i) d -= y[i] * a[i];
      } else {
        d = -y[j - n];
      }
      if (T.status[j] == Status::Lower ? d > tol_d : d < -tol_d) {
        double score = std::abs(d);
        if (bland) {
          enter = j;
          dir = T.status[j] == Status::Lower ? +1 : -1;
          break;
        }
        if (score > best) {
          best = score;
          enter = j;
          dir = T.status[j] == Status::Lower ? +1 : -1;
        }
      }
    }
    if (enter < 0) break;  // optimal

    T.column_of(enter, colbuf.data());
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += T.binv[i * m + k] * colbuf[k];
      w[i] = s;
    }

    double tmax = T.upper_bound(enter);
    double limit = tmax;
    int leave = -1;
    bool leave_to_upper = false;
    for (int k = 0; k < m; ++k) {
      double delta = dir * w[k];
      if (delta > kPivTol) {
        double t = T.xb[k] / delta;
        if (t < limit - 1e-14) {
          limit = std::max(t, 0.0);
          leave = k;
          leave_to_upper = false;
        }
      } else if (delta < -kPivTol) {
        double ub = T.upper_bound(T.basis[k]);
        if (ub == kInf) continue;
        double t = (ub - T.xb[k]) / (-delta);
        if (t < limit - 1e-14) {
          limit = std::max(t, 0.0);
          leave = k;
          leave_to_upper = true;
        }
      }
    }
    double t = std::min(limit, tmax);
    if (t == kInf) break;  // unbounded; cannot happen with box bounds

    for (int i = 0; i < m; ++i) T.xb[i] -= dir * t * w[i];
    if (leave < 0) {
      // bound-to-bound flip
      T.status[enter] = T.status[enter] == Status::Lower ? Status::Upper : Status::Lower;
      continue;
    }
    int out = T.basis[leave];
    T.status[out] = leave_to_upper ? Status::Upper : Status::Lower;
    T.status[enter] = Status::Basic;
    T.basis[leave] = static_cast<int>(enter);
    T.xb[leave] = dir > 0 ? t : T.upper_bound(enter) - t;

    double piv = w[leave];
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = w[i] / piv;
      if (f == 0.0) continue;
      for (int j = 0; j < m; ++j) T.binv[i * m + j] -= f * T.binv[leave * m + j];
    }
    for (int j = 0; j < m; ++j) T.binv[leave * m + j] /= piv;

    if (++pivots_since_refactor >= 256) {
      if (refactorize(T)) recompute_xb(T, capacity);
      pivots_since_refactor = 0;
    }
  }

  sol.iterations = static_cast<int>(iter);
  sol.ok = iter < max_iter;
  sol.x.assign(n, 0.0);
  for (std::int64_t j = 0; j < n; ++j)
    if (T.status[j] == Status::Upper) sol.x[j] = 1.0;
  for (int k = 0; k < m; ++k)
    if (T.basis[k] < n) sol.x[T.basis[k]] = std::clamp(T.xb[k], 0.0, 1.0);
  double val = 0.0;
  for (std::int64_t j = 0; j < n; ++j) val += reward[j] * sol.x[j];
  sol.value = val;
  sol.dual.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
      int bv = T.basis[k];
      if (bv < n) s += reward[bv] * T.binv[k * m + i];
    }
    sol.dual[i] = std::max(s, 0.0);
  }
  return sol;
}

}  // namespace nrm
