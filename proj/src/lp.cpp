#include "nsplace/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsplace::lp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-7;
constexpr double kCostTol = 1e-9;
constexpr double kPivTol = 1e-8;
constexpr int kRefactorEvery = 120;
}  // namespace

int Problem::add_col(double lo_, double hi_, double obj_) {
  obj.push_back(obj_);
  lo.push_back(lo_);
  hi.push_back(hi_);
  cols.emplace_back();
  return ncols() - 1;
}

int Problem::add_row(Sense s, double rhs_) {
  sense.push_back(s);
  rhs.push_back(rhs_);
  return nrows() - 1;
}

void Problem::add_entry(int row, int col, double a) {
  if (a != 0.0) cols[col].push_back({row, a});
}

Simplex::Simplex(const Problem& p) : p_(p), m_(p.nrows()) {}

void Simplex::build_columns(const std::vector<double>& lo,
                            const std::vector<double>& hi) {
  int n = p_.ncols();
  cols_.clear();
  cols_.reserve(n + m_);
  for (int j = 0; j < n; ++j) {
    Col c;
    c.a = p_.cols[j];
    c.lo = lo[j];
    c.hi = hi[j];
    c.obj = p_.obj[j];
    if (!std::isfinite(c.lo) || !std::isfinite(c.hi))
      throw std::invalid_argument("structural columns need finite bounds");
    cols_.push_back(std::move(c));
  }
  for (int i = 0; i < m_; ++i) {  // slack per row
    Col c;
    c.a = {{i, 1.0}};
    c.obj = 0;
    switch (p_.sense[i]) {
      case Sense::LE: c.lo = 0; c.hi = kInf; break;
      case Sense::GE: c.lo = -kInf; c.hi = 0; break;
      case Sense::EQ: c.lo = 0; c.hi = 0; break;
    }
    cols_.push_back(std::move(c));
  }
}

void Simplex::ftran(const Col& c, std::vector<double>& w) const {
  w.assign(m_, 0.0);
  for (const auto& [r, a] : c.a) {
    const double av = a;
    for (int i = 0; i < m_; ++i) w[i] += av * binv_[size_t(i) * m_ + r];
  }
}

void Simplex::refactor() {
  // Rebuild the dense inverse of the basis matrix by Gauss-Jordan.
  std::vector<double> B(size_t(m_) * m_, 0.0);
  for (int k = 0; k < m_; ++k)
    for (const auto& [r, a] : cols_[basic_[k]].a) B[size_t(r) * m_ + k] = a;
  binv_.assign(size_t(m_) * m_, 0.0);
  for (int i = 0; i < m_; ++i) binv_[size_t(i) * m_ + i] = 1.0;
  for (int c = 0; c < m_; ++c) {
    int piv = -1;
    double best = kPivTol;
    for (int r = c; r < m_; ++r) {
      double v = std::abs(B[size_t(r) * m_ + c]);
      if (v > best) { best = v; piv = r; }
    }
    if (piv < 0) throw std::runtime_error("singular basis");
    if (piv != c) {
      for (int j = 0; j < m_; ++j) {
        std::swap(B[size_t(piv) * m_ + j], B[size_t(c) * m_ + j]);
        std::swap(binv_[size_t(piv) * m_ + j], binv_[size_t(c) * m_ + j]);
      }
    }
    double inv = 1.0 / B[size_t(c) * m_ + c];
    for (int j = 0; j < m_; ++j) {
      B[size_t(c) * m_ + j] *= inv;
      binv_[size_t(c) * m_ + j] *= inv;
    }
    for (int r = 0; r < m_; ++r) {
      if (r == c) continue;
      double f = B[size_t(r) * m_ + c];
      if (f == 0.0) continue;
      for (int j = 0; j < m_; ++j) {
        B[size_t(r) * m_ + j] -= f * B[size_t(c) * m_ + j];
        binv_[size_t(r) * m_ + j] -= f * binv_[size_t(c) * m_ + j];
      }
    }
  }
  // basic_ is ordered by the column position k used above: basic_[k] pairs
  // with row k of the inverse.
  pivots_since_refactor_ = 0;
}

void Simplex::compute_basics_from_nonbasics() {
  std::vector<double> r(p_.rhs);
  int total = int(cols_.size());
  for (int j = 0; j < total; ++j) {
    if (pos_in_basis_[j] >= 0) continue;
    double v = value_[j];
    if (v == 0.0) continue;
    for (const auto& [row, a] : cols_[j].a) r[row] -= a * v;
  }
  for (int k = 0; k < m_; ++k) {
    double v = 0;
    const double* row = &binv_[size_t(k) * m_];
    for (int i = 0; i < m_; ++i) v += row[i] * r[i];
    value_[basic_[k]] = v;
  }
}

void Simplex::pivot(int row_pos, int enter_col, const std::vector<double>& w) {
  double piv = w[row_pos];
  double inv = 1.0 / piv;
  double* prow = &binv_[size_t(row_pos) * m_];
  for (int j = 0; j < m_; ++j) prow[j] *= inv;
  for (int i = 0; i < m_; ++i) {
    if (i == row_pos) continue;
    double f = w[i];
    if (f == 0.0) continue;
    double* irow = &binv_[size_t(i) * m_];
    for (int j = 0; j < m_; ++j) irow[j] -= f * prow[j];
  }
  int leave = basic_[row_pos];
  pos_in_basis_[leave] = -1;
  basic_[row_pos] = enter_col;
  pos_in_basis_[enter_col] = row_pos;
  if (++pivots_since_refactor_ >= kRefactorEvery) {
    refactor();
    compute_basics_from_nonbasics();
  }
}

double Simplex::reduced_cost(const std::vector<double>& y, int j) const {
  double d = cols_[j].obj;
  for (const auto& [r, a] : cols_[j].a) d -= y[r] * a;
  return d;
}

// Bounded-variable primal simplex on the current column set with the given
// cost vector. Returns false on unboundedness.
bool Simplex::run_primal(const std::vector<double>& cost, int max_iters,
                         int* iters) {
  int total = int(cols_.size());
  std::vector<double> y(m_), w;
  int degen_streak = 0;
  for (int it = 0; it < max_iters; ++it) {
    if (iters) ++*iters;
    // y = c_B Binv
    std::fill(y.begin(), y.end(), 0.0);
    for (int k = 0; k < m_; ++k) {
      double cb = cost[basic_[k]];
      if (cb == 0.0) continue;
      const double* row = &binv_[size_t(k) * m_];
      for (int j = 0; j < m_; ++j) y[j] += cb * row[j];
    }
    bool bland = degen_streak > 40;
    int enter = -1, dir = 0;
    double best = kCostTol;
    for (int j = 0; j < total; ++j) {
      if (pos_in_basis_[j] >= 0) continue;
      const Col& c = cols_[j];
      if (c.lo == c.hi) continue;
      double d = cost[j];
      for (const auto& [r, a] : c.a) d -= y[r] * a;
      double score = 0;
      int dj = 0;
      if (!at_upper_[j] && d < -kCostTol) { score = -d; dj = 1; }
      else if (at_upper_[j] && d > kCostTol) { score = d; dj = -1; }
      else continue;
      if (bland) { enter = j; dir = dj; break; }
      if (score > best) { best = score; enter = j; dir = dj; }
    }
    if (enter < 0) return true;  // optimal for this cost

    ftran(cols_[enter], w);
    // Ratio test: entering moves by dir*t, basics by -dir*t*w.
    double t = cols_[enter].hi - cols_[enter].lo;  // bound flip
    int leave_pos = -1;
    for (int k = 0; k < m_; ++k) {
      double rate = -dir * w[k];
      if (std::abs(rate) < kPivTol) continue;
      int bj = basic_[k];
      double room, tk;
      if (rate > 0) {
        room = cols_[bj].hi - value_[bj];
        if (!std::isfinite(room)) continue;
        tk = room / rate;
      } else {
        room = value_[bj] - cols_[bj].lo;
        if (!std::isfinite(room)) continue;
        tk = room / (-rate);
      }
      if (tk < -1e-9) tk = 0;
      if (tk < t - 1e-12 ||
          (leave_pos >= 0 && tk < t + 1e-12 && basic_[k] < basic_[leave_pos])) {
        t = std::max(tk, 0.0);
        leave_pos = k;
      }
    }
    if (!std::isfinite(t)) return false;  // unbounded

    degen_streak = t < 1e-10 ? degen_streak + 1 : 0;
    value_[enter] += dir * t;
    for (int k = 0; k < m_; ++k) {
      if (w[k] != 0.0) value_[basic_[k]] -= dir * t * w[k];
    }
    if (leave_pos < 0) {
      at_upper_[enter] = !at_upper_[enter];  // bound flip
      value_[enter] = at_upper_[enter] ? cols_[enter].hi : cols_[enter].lo;
    } else {
      int bj = basic_[leave_pos];
      double rate = -dir * w[leave_pos];
      at_upper_[bj] = rate > 0;
      value_[bj] = at_upper_[bj] ? cols_[bj].hi : cols_[bj].lo;
      at_upper_[enter] = false;
      pivot(leave_pos, enter, w);
    }
  }
  throw std::runtime_error("simplex iteration limit");
}

bool Simplex::validate(double tol) const {
  std::vector<double> r(p_.rhs);
  int total = int(cols_.size());
  for (int j = 0; j < total; ++j) {
    double v = value_[j];
    if (v == 0.0) continue;
    for (const auto& [row, a] : cols_[j].a) r[row] -= a * v;
  }
  for (int i = 0; i < m_; ++i)
    if (std::abs(r[i]) > tol) return false;
  for (int j = 0; j < total; ++j) {
    if (value_[j] < cols_[j].lo - tol || value_[j] > cols_[j].hi + tol)
      return false;
  }
  return true;
}

Result Simplex::solve_primal(const std::vector<double>& lo,
                             const std::vector<double>& hi) {
  build_columns(lo, hi);
  int n = p_.ncols();
  int total = n + m_;
  value_.assign(total, 0.0);
  at_upper_.assign(total, 0);
  pos_in_basis_.assign(total, -1);
  basic_.assign(m_, -1);

  for (int j = 0; j < n; ++j) {
    // Rest nonbasic structurals at the bound nearer zero.
    at_upper_[j] = std::abs(cols_[j].hi) < std::abs(cols_[j].lo);
    value_[j] = at_upper_[j] ? cols_[j].hi : cols_[j].lo;
  }
  std::vector<double> resid(p_.rhs);
  for (int j = 0; j < n; ++j) {
    double v = value_[j];
    if (v == 0.0) continue;
    for (const auto& [row, a] : cols_[j].a) resid[row] -= a * v;
  }
  // Slacks basic where their value fits the bounds; artificials elsewhere.
  std::vector<double> cost(total, 0.0);
  for (int i = 0; i < m_; ++i) {
    int sj = n + i;
    double v = resid[i];
    if (v >= cols_[sj].lo - kFeasTol && v <= cols_[sj].hi + kFeasTol) {
      basic_[i] = sj;
      pos_in_basis_[sj] = i;
      value_[sj] = v;
    } else {
      double b = v < cols_[sj].lo ? cols_[sj].lo : cols_[sj].hi;
      if (!std::isfinite(b)) b = 0;
      value_[sj] = b;
      at_upper_[sj] = (b == cols_[sj].hi && cols_[sj].lo != cols_[sj].hi);
      Col art;
      double res = v - b;
      art.a = {{i, res >= 0 ? 1.0 : -1.0}};
      art.lo = 0;
      art.hi = kInf;
      art.obj = 0;
      art.artificial = true;
      cols_.push_back(art);
      cost.push_back(1.0);
      value_.push_back(std::abs(res));
      at_upper_.push_back(0);
      int aj = int(cols_.size()) - 1;
      pos_in_basis_.push_back(i);
      basic_[i] = aj;
    }
  }
  total = int(cols_.size());
  refactor();
  compute_basics_from_nonbasics();

  Result out;
  int max_iters = 200 * (m_ + total) + 2000;
  bool need_phase1 = false;
  for (int j = n + m_; j < total; ++j)
    if (value_[j] > kFeasTol) need_phase1 = true;
  if (need_phase1 || total > n + m_) {
    if (!run_primal(cost, max_iters, &out.iters))
      throw std::runtime_error("phase-1 unbounded");
    double infeas = 0;
    for (int j = n + m_; j < total; ++j) infeas += std::max(0.0, value_[j]);
    if (infeas > 1e-6) {
      out.status = Status::kInfeasible;
      return out;
    }
    // Lock artificials at zero for phase 2.
    for (int j = n + m_; j < total; ++j) {
      cols_[j].lo = cols_[j].hi = 0;
      if (pos_in_basis_[j] < 0) value_[j] = 0;
    }
  }

  std::vector<double> cost2(total, 0.0);
  for (int j = 0; j < n; ++j) cost2[j] = cols_[j].obj;
  if (!run_primal(cost2, max_iters, &out.iters)) {
    out.status = Status::kUnbounded;
    return out;
  }
  if (!validate(1e-6)) {
    refactor();
    compute_basics_from_nonbasics();
    if (!run_primal(cost2, max_iters, &out.iters) || !validate(1e-5))
      throw std::runtime_error("simplex failed to validate");
  }

  out.status = Status::kOptimal;
  out.x.assign(n, 0.0);
  double obj = 0;
  for (int j = 0; j < n; ++j) {
    out.x[j] = value_[j];
    obj += value_[j] * cols_[j].obj;
  }
  out.obj = obj;

  basis_out_.basic = basic_;
  basis_out_.at_upper.assign(at_upper_.begin(), at_upper_.begin() + n + m_);
  basis_out_.clean = true;
  for (int k = 0; k < m_; ++k) {
    if (basic_[k] >= n + m_) {
      // Try to swap the artificial for the row's slack (degenerate pivot).
      std::vector<double> w;
      ftran(cols_[n + k], w);
      if (std::abs(w[k]) > kPivTol) {
        value_[n + k] = at_upper_[n + k] ? cols_[n + k].hi : cols_[n + k].lo;
        pivot(k, n + k, w);
        basis_out_.basic = basic_;
        basis_out_.at_upper.assign(at_upper_.begin(),
                                   at_upper_.begin() + n + m_);
      } else {
        basis_out_.clean = false;
      }
    }
  }
  for (int k = 0; k < m_; ++k)
    if (basis_out_.basic[k] >= n + m_) basis_out_.clean = false;
  return out;
}

Result Simplex::solve_dual(const Basis& start, const std::vector<double>& lo,
                           const std::vector<double>& hi) {
  Result out;
  if (!start.clean || int(start.basic.size()) != m_) return out;  // kStalled
  build_columns(lo, hi);
  int n = p_.ncols();
  int total = n + m_;
  value_.assign(total, 0.0);
  at_upper_.assign(start.at_upper.begin(), start.at_upper.end());
  at_upper_.resize(total, 0);
  pos_in_basis_.assign(total, -1);
  basic_ = start.basic;
  for (int k = 0; k < m_; ++k) pos_in_basis_[basic_[k]] = k;
  for (int j = 0; j < total; ++j) {
    if (pos_in_basis_[j] >= 0) continue;
    const Col& c = cols_[j];
    double v = at_upper_[j] ? c.hi : c.lo;
    if (!std::isfinite(v)) {
      v = std::isfinite(c.lo) ? c.lo : (std::isfinite(c.hi) ? c.hi : 0.0);
      at_upper_[j] = std::isfinite(c.hi) && v == c.hi;
    }
    // Bound changes may have moved the rest position past the new range.
    if (v < c.lo) { v = c.lo; at_upper_[j] = false; }
    if (v > c.hi) { v = c.hi; at_upper_[j] = true; }
    value_[j] = v;
  }
  try {
    refactor();
  } catch (const std::runtime_error&) {
    return out;  // singular start basis -> caller re-solves primal
  }
  compute_basics_from_nonbasics();

  std::vector<double> cost(total, 0.0);
  for (int j = 0; j < n; ++j) cost[j] = cols_[j].obj;
  std::vector<double> y(m_), w, beta(m_);
  int max_iters = 200 * (m_ + total) + 2000;
  int stall = 0;
  for (int it = 0; it < max_iters; ++it) {
    ++out.iters;
    // Most-violated basic leaves; first encounter wins ties.
    int leave_pos = -1;
    double viol = kFeasTol;
    bool below = false;
    for (int k = 0; k < m_; ++k) {
      int bj = basic_[k];
      double vb = cols_[bj].lo - value_[bj];
      double va = value_[bj] - cols_[bj].hi;
      double worst = std::max(vb, va);
      if (worst > viol) {
        viol = worst;
        leave_pos = k;
        below = vb > va;
      }
    }
    if (leave_pos < 0) {
      // Primal feasible; dual feasibility was maintained, so optimal.
      if (!validate(1e-6)) return out;  // kStalled -> fresh primal
      out.status = Status::kOptimal;
      out.x.assign(n, 0.0);
      double obj = 0;
      for (int j = 0; j < n; ++j) {
        out.x[j] = value_[j];
        obj += value_[j] * cols_[j].obj;
      }
      out.obj = obj;
      basis_out_.basic = basic_;
      basis_out_.at_upper.assign(at_upper_.begin(), at_upper_.begin() + n + m_);
      basis_out_.clean = true;
      return out;
    }

    std::fill(y.begin(), y.end(), 0.0);
    for (int k = 0; k < m_; ++k) {
      double cb = cost[basic_[k]];
      if (cb == 0.0) continue;
      const double* row = &binv_[size_t(k) * m_];
      for (int j = 0; j < m_; ++j) y[j] += cb * row[j];
    }
    const double* brow = &binv_[size_t(leave_pos) * m_];
    for (int i = 0; i < m_; ++i) beta[i] = brow[i];

    // Entering: min |d_j / alpha_j| over eligible nonbasics; lowest index
    // wins ties.
    if (stall > 200) return out;  // cycling guard -> caller re-solves primal
    int enter = -1;
    double best_ratio = kInf;
    for (int j = 0; j < total; ++j) {
      if (pos_in_basis_[j] >= 0) continue;
      const Col& c = cols_[j];
      if (c.lo == c.hi) continue;
      double alpha = 0;
      for (const auto& [r, a] : c.a) alpha += beta[r] * a;
      if (std::abs(alpha) < kPivTol) continue;
      // Leaving var below lo must rise: x_B changes by -alpha * delta_j.
      bool ok = below ? ((!at_upper_[j] && alpha < 0) || (at_upper_[j] && alpha > 0))
                      : ((!at_upper_[j] && alpha > 0) || (at_upper_[j] && alpha < 0));
      if (!ok) continue;
      double d = cost[j];
      for (const auto& [r, a] : c.a) d -= y[r] * a;
      double ratio = std::abs(d) / std::abs(alpha);
      if (ratio < best_ratio - 1e-12) {
        best_ratio = ratio;
        enter = j;
      }
    }
    if (enter < 0) {
      out.status = Status::kInfeasible;
      return out;
    }

    ftran(cols_[enter], w);
    if (std::abs(w[leave_pos]) < kPivTol) return out;  // numeric stall
    int bj = basic_[leave_pos];
    double target = below ? cols_[bj].lo : cols_[bj].hi;
    double delta = (value_[bj] - target) / w[leave_pos];
    stall = std::abs(delta) < 1e-12 ? stall + 1 : 0;
    value_[enter] += delta;
    for (int k = 0; k < m_; ++k)
      if (w[k] != 0.0) value_[basic_[k]] -= delta * w[k];
    value_[bj] = target;
    at_upper_[bj] = !below;
    at_upper_[enter] = false;
    pivot(leave_pos, enter, w);
  }
  return out;  // kStalled
}

}  // namespace nsplace::lp
