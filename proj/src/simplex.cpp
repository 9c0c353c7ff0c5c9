#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "gsplan/error.hpp"
#include "gsplan/lp.hpp"

namespace gsplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Presolve: substitutes out columns that an equality row defines as a
// nonnegative combination of the row's other columns.

struct Substitution {
  int col;
  std::vector<std::pair<int, double>> terms;  // col = sum coef * var
};

struct Reduced {
  int m = 0, n = 0;
  std::vector<int> col_of;  // reduced column -> original variable
  std::vector<std::vector<std::pair<int, double>>> cols;  // (row, value)
  std::vector<double> obj;
  std::vector<RowSense> sense;
  std::vector<double> rhs;
  std::vector<Substitution> stack;
  std::vector<char> fixed_zero;  // original variables fixed at 0
  bool unbounded = false;
};

Reduced presolve(const LinearProgram& lp, bool enabled) {
  const int m = static_cast<int>(lp.rows.size());
  const int n = static_cast<int>(lp.num_vars());
  std::vector<std::map<int, double>> row(static_cast<std::size_t>(m));
  std::vector<std::map<int, double>> col(static_cast<std::size_t>(n));
  for (int r = 0; r < m; ++r)
    for (auto [j, v] : lp.rows[static_cast<std::size_t>(r)].coeffs) {
      if (j < 0 || j >= n) fail(ErrorKind::invalid_argument, "row references unknown variable");
      if (v == 0.0) continue;
      row[static_cast<std::size_t>(r)][j] += v;
      col[static_cast<std::size_t>(j)][r] += v;
    }
  std::vector<char> row_alive(static_cast<std::size_t>(m), 1), col_alive(static_cast<std::size_t>(n), 1);
  Reduced red;
  red.fixed_zero.assign(static_cast<std::size_t>(n), 0);

  auto drop_row = [&](int r) {
    for (auto [j, v] : row[static_cast<std::size_t>(r)]) col[static_cast<std::size_t>(j)].erase(r);
    row[static_cast<std::size_t>(r)].clear();
    row_alive[static_cast<std::size_t>(r)] = 0;
  };
  auto drop_col = [&](int j) {
    for (auto [r, v] : col[static_cast<std::size_t>(j)]) row[static_cast<std::size_t>(r)].erase(j);
    col[static_cast<std::size_t>(j)].clear();
    col_alive[static_cast<std::size_t>(j)] = 0;
  };

  if (enabled) {
    std::vector<int> queue;
    std::vector<char> queued(static_cast<std::size_t>(m), 0);
    auto push = [&](int r) {
      if (!queued[static_cast<std::size_t>(r)]) {
        queued[static_cast<std::size_t>(r)] = 1;
        queue.push_back(r);
      }
    };
    for (int r = m - 1; r >= 0; --r) push(r);
    while (!queue.empty()) {
      const int r = queue.back();
      queue.pop_back();
      queued[static_cast<std::size_t>(r)] = 0;
      const auto& lr = lp.rows[static_cast<std::size_t>(r)];
      if (!row_alive[static_cast<std::size_t>(r)] || lr.sense != RowSense::eq || lr.rhs != 0.0)
        continue;
      auto& R = row[static_cast<std::size_t>(r)];
      if (R.empty()) {
        row_alive[static_cast<std::size_t>(r)] = 0;
        continue;
      }
      if (R.size() == 1) {
        const int j = R.begin()->first;
        for (auto [r2, v] : col[static_cast<std::size_t>(j)]) push(r2);
        drop_col(j);
        red.fixed_zero[static_cast<std::size_t>(j)] = 1;
        row_alive[static_cast<std::size_t>(r)] = 0;
        continue;
      }
      int pick = -1;
      for (auto [k, ak] : R) {
        const auto& C = col[static_cast<std::size_t>(k)];
        if (lp.objective[static_cast<std::size_t>(k)] != 0.0 || C.size() != 2) continue;
        bool opposite = true;
        for (auto [j, aj] : R)
          if (j != k && !((aj > 0) != (ak > 0))) {
            opposite = false;
            break;
          }
        if (opposite) {
          pick = k;
          break;
        }
      }
      if (pick < 0) continue;
      const double ak = R.at(pick);
      int r2 = -1;
      double a2 = 0.0;
      for (auto [rr, v] : col[static_cast<std::size_t>(pick)])
        if (rr != r) {
          r2 = rr;
          a2 = v;
        }
      Substitution sub{pick, {}};
      for (auto [j, aj] : R)
        if (j != pick) sub.terms.emplace_back(j, -aj / ak);
      drop_row(r);
      for (auto [j, coef] : sub.terms)
        for (auto [rr, v] : col[static_cast<std::size_t>(j)]) push(rr);
      // substitute into r2
      col[static_cast<std::size_t>(pick)].erase(r2);
      row[static_cast<std::size_t>(r2)].erase(pick);
      col_alive[static_cast<std::size_t>(pick)] = 0;
      auto& R2 = row[static_cast<std::size_t>(r2)];
      for (auto [j, coef] : sub.terms) {
        double& v = R2[j];
        const double before = v;
        v += a2 * coef;
        if (std::abs(v) <= 1e-14 * std::max(std::abs(before), std::abs(a2 * coef))) {
          R2.erase(j);
          col[static_cast<std::size_t>(j)].erase(r2);
        } else {
          col[static_cast<std::size_t>(j)][r2] = v;
        }
      }
      red.stack.push_back(std::move(sub));
      push(r2);
    }
  }

  std::vector<int> row_id(static_cast<std::size_t>(m), -1);
  for (int r = 0; r < m; ++r) {
    if (!row_alive[static_cast<std::size_t>(r)]) continue;
    const auto& lr = lp.rows[static_cast<std::size_t>(r)];
    if (row[static_cast<std::size_t>(r)].empty()) {
      const bool ok = (lr.sense == RowSense::eq && std::abs(lr.rhs) <= 1e-12) ||
                      (lr.sense == RowSense::le && lr.rhs >= -1e-12) ||
                      (lr.sense == RowSense::ge && lr.rhs <= 1e-12);
      if (ok) continue;  // an infeasible empty row is kept for phase 1 to report
    }
    row_id[static_cast<std::size_t>(r)] = red.m++;
    red.sense.push_back(lr.sense);
    red.rhs.push_back(lr.rhs);
  }
  for (int j = 0; j < n; ++j) {
    if (!col_alive[static_cast<std::size_t>(j)]) continue;
    const auto& C = col[static_cast<std::size_t>(j)];
    const double c = lp.objective[static_cast<std::size_t>(j)];
    if (C.empty()) {
      if (c > 0) red.unbounded = true;
      red.fixed_zero[static_cast<std::size_t>(j)] = 1;
      continue;
    }
    std::vector<std::pair<int, double>> entries;
    for (auto [r, v] : C) entries.emplace_back(row_id[static_cast<std::size_t>(r)], v);
    red.cols.push_back(std::move(entries));
    red.obj.push_back(c);
    red.col_of.push_back(j);
    ++red.n;
  }
  return red;
}

// ---------------------------------------------------------------------------
// Revised simplex. The basis is kept as a sparse LU factorization followed by
// a product-form eta file, refactored periodically.

class Simplex {
 public:
  Simplex(const Reduced& red, const SimplexOptions& opts) : opts_(opts), m_(red.m) {
    n_struct_ = red.n;
    for (int j = 0; j < red.n; ++j)
      add_column(red.cols[static_cast<std::size_t>(j)], red.obj[static_cast<std::size_t>(j)], false);
    b_ = Eigen::VectorXd::Zero(m_);
    basis_.assign(static_cast<std::size_t>(m_), -1);
    std::vector<double> flip(static_cast<std::size_t>(m_), 1.0);
    for (int r = 0; r < m_; ++r) {
      RowSense s = red.sense[static_cast<std::size_t>(r)];
      double rhs = red.rhs[static_cast<std::size_t>(r)];
      if (rhs < 0) {
        flip[static_cast<std::size_t>(r)] = -1.0;
        rhs = -rhs;
        if (s == RowSense::le) s = RowSense::ge;
        else if (s == RowSense::ge) s = RowSense::le;
      }
      b_(r) = rhs;
      if (s == RowSense::le) {
        basis_[static_cast<std::size_t>(r)] = add_column({{r, 1.0}}, 0.0, false);
      } else {
        if (s == RowSense::ge) add_column({{r, -1.0}}, 0.0, false);
        basis_[static_cast<std::size_t>(r)] = add_column({{r, 1.0}}, 0.0, true);
      }
    }
    for (int j = 0; j < n_struct_; ++j)
      for (auto& [r, v] : cols_[static_cast<std::size_t>(j)]) v *= flip[static_cast<std::size_t>(r)];
    N_ = static_cast<int>(cols_.size());
    is_basic_.assign(static_cast<std::size_t>(N_), -1);
    for (int r = 0; r < m_; ++r) is_basic_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = r;
    ub_.assign(static_cast<std::size_t>(N_), kInf);
    max_iter_ = opts.max_iterations > 0 ? opts.max_iterations : 200L * (m_ + N_) + 1000;
  }

  LpStatus run() {
    if (m_ == 0) {
      for (int j = 0; j < N_; ++j)
        if (cost_[static_cast<std::size_t>(j)] > opts_.optimality_tol) return LpStatus::unbounded;
      return LpStatus::optimal;
    }
    refactor();
    double infeas = 0.0;
    for (int r = 0; r < m_; ++r)
      if (artificial_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])]) infeas += x_(r);
    if (infeas > opts_.feasibility_tol) {
      std::vector<double> phase1(static_cast<std::size_t>(N_), 0.0);
      for (int j = 0; j < N_; ++j)
        if (artificial_[static_cast<std::size_t>(j)]) phase1[static_cast<std::size_t>(j)] = -1.0;
      if (iterate(phase1) != LpStatus::optimal)
        fail(ErrorKind::numerical, "phase 1 did not terminate at an optimum");
      infeas = 0.0;
      for (int r = 0; r < m_; ++r)
        if (artificial_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])]) infeas += std::max(0.0, x_(r));
      if (infeas > opts_.feasibility_tol * (1.0 + b_.lpNorm<Eigen::Infinity>()))
        return LpStatus::infeasible;
    }
    for (int j = 0; j < N_; ++j)
      if (artificial_[static_cast<std::size_t>(j)]) ub_[static_cast<std::size_t>(j)] = 0.0;
    for (;;) {
      const LpStatus status = iterate(cost_);
      if (status != LpStatus::optimal || refactor()) return status;
    }
  }

  std::vector<double> structural_values() const {
    std::vector<double> out(static_cast<std::size_t>(n_struct_), 0.0);
    for (int r = 0; r < m_; ++r) {
      int j = basis_[static_cast<std::size_t>(r)];
      if (j < n_struct_) out[static_cast<std::size_t>(j)] = std::max(0.0, x_(r));
    }
    return out;
  }
  int iterations() const { return iterations_; }
  double condition_estimate() const { return cond_; }

 private:
  using SpMat = Eigen::SparseMatrix<double>;

  struct Eta {
    int row;
    double pivot;
    std::vector<std::pair<int, double>> entries;  // off-pivot alpha values
  };

  SimplexOptions opts_;
  int m_ = 0, N_ = 0, n_struct_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> cost_;
  std::vector<char> artificial_;
  std::vector<double> ub_;
  std::vector<int> basis_, is_basic_;
  Eigen::VectorXd b_, x_;
  mutable Eigen::SparseLU<SpMat> lu_;
  std::vector<Eta> etas_;
  int iterations_ = 0;
  long max_iter_ = 0;
  double cond_ = 0.0;
  double pivot_scale_ = 1.0;
  std::vector<int> good_basis_;

  int add_column(std::vector<std::pair<int, double>> entries, double c, bool artificial) {
    cols_.push_back(std::move(entries));
    cost_.push_back(c);
    artificial_.push_back(artificial ? 1 : 0);
    return static_cast<int>(cols_.size()) - 1;
  }

  // w <- B^-1 w
  void ftran(Eigen::VectorXd& w) const {
    w = lu_.solve(w).eval();
    for (const auto& e : etas_) {
      const double wr = w(e.row) / e.pivot;
      w(e.row) = wr;
      if (wr != 0.0)
        for (auto [i, a] : e.entries) w(i) -= a * wr;
    }
  }

  // u <- B^-T u
  void btran(Eigen::VectorXd& u) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = u(it->row);
      for (auto [i, a] : it->entries) s -= a * u(i);
      u(it->row) = s / it->pivot;
    }
    u = lu_.transpose().solve(u).eval();
  }

  bool factorize() {
    std::vector<Eigen::Triplet<double>> trips;
    for (int r = 0; r < m_; ++r)
      for (auto [row, v] : cols_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])])
        trips.emplace_back(row, r, v);
    SpMat B(m_, m_);
    B.setFromTriplets(trips.begin(), trips.end());
    B.makeCompressed();
    lu_.analyzePattern(B);
    lu_.factorize(B);
    if (lu_.info() != Eigen::Success) return false;
    etas_.clear();
    cond_ = one_norm(B) * inverse_one_norm();
    if (!std::isfinite(cond_) || cond_ > 1e15) return false;
    x_ = b_;
    ftran(x_);
    return true;
  }

  static double one_norm(const SpMat& B) {
    double norm = 0.0;
    for (int k = 0; k < B.outerSize(); ++k) {
      double s = 0.0;
      for (SpMat::InnerIterator it(B, k); it; ++it) s += std::abs(it.value());
      norm = std::max(norm, s);
    }
    return norm;
  }

  // Hager's estimate of ||B^-1||_1.
  double inverse_one_norm() const {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(m_, 1.0 / m_);
    double est = 0.0;
    int last = -1;
    for (int pass = 0; pass < 5; ++pass) {
      Eigen::VectorXd y = lu_.solve(v);
      est = std::max(est, y.lpNorm<1>());
      Eigen::VectorXd xi = y.unaryExpr([](double a) { return a >= 0 ? 1.0 : -1.0; });
      Eigen::VectorXd z = lu_.transpose().solve(xi);
      int j = 0;
      const double zmax = z.cwiseAbs().maxCoeff(&j);
      if (zmax <= z.dot(v) || j == last) break;
      v.setZero();
      v(j) = 1.0;
      last = j;
    }
    return est;
  }

  // Refactors the current basis. A basis that drifted into singularity is
  // replaced by the last good one and later pivots use a stricter tolerance.
  // Returns false when the basis had to be rolled back.
  bool refactor() {
    if (factorize()) {
      good_basis_ = basis_;
      return true;
    }
    if (good_basis_.empty() || pivot_scale_ >= 1e4)
      fail(ErrorKind::numerical, "singular or ill-conditioned basis (condition estimate " +
                                     std::to_string(cond_) + ")");
    pivot_scale_ *= 10.0;
    basis_ = good_basis_;
    std::fill(is_basic_.begin(), is_basic_.end(), -1);
    for (int r = 0; r < m_; ++r) is_basic_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = r;
    if (!factorize()) fail(ErrorKind::numerical, "cannot refactor the last good basis");
    return false;
  }

  Eigen::VectorXd column(int j) const {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(m_);
    for (auto [r, v] : cols_[static_cast<std::size_t>(j)]) a(r) = v;
    ftran(a);
    return a;
  }

  LpStatus iterate(const std::vector<double>& c) {
    int degenerate_run = 0;
    bool bland = false;
    Eigen::VectorXd y(m_);
    for (;;) {
      if (++iterations_ > max_iter_)
        fail(ErrorKind::numerical, "simplex iteration limit reached (condition estimate " +
                                       std::to_string(cond_) + ")");
      for (int r = 0; r < m_; ++r) y(r) = c[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
      btran(y);

      int enter = -1;
      double best = opts_.optimality_tol;
      for (int j = 0; j < N_; ++j) {
        if (is_basic_[static_cast<std::size_t>(j)] >= 0 || ub_[static_cast<std::size_t>(j)] <= 0.0) continue;
        double d = c[static_cast<std::size_t>(j)];
        for (auto [r, v] : cols_[static_cast<std::size_t>(j)]) d -= y(r) * v;
        if (d > best) {
          enter = j;
          best = d;
          if (bland) break;
        }
      }
      if (enter < 0) return LpStatus::optimal;

      const Eigen::VectorXd alpha = column(enter);
      const double tol = opts_.pivot_tol * pivot_scale_ * std::max(1.0, alpha.lpNorm<Eigen::Infinity>());
      auto ratio = [&](int r, double slack) {
        const double a = alpha(r);
        const int bj = basis_[static_cast<std::size_t>(r)];
        if (a > tol) return (x_(r) + slack) / a;
        if (a < -tol && ub_[static_cast<std::size_t>(bj)] < kInf)
          return (x_(r) - ub_[static_cast<std::size_t>(bj)] - slack) / a;
        return kInf;
      };
      int leave = -1;
      double theta = kInf;
      if (bland) {
        for (int r = 0; r < m_; ++r) {
          const double t = std::max(ratio(r, 0.0), 0.0);
          if (t == kInf) continue;
          if (leave < 0 || t < theta - 1e-12 * (1.0 + theta) ||
              (t <= theta + 1e-12 * (1.0 + theta) &&
               basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
            leave = r;
            theta = t;
          }
        }
      } else {
        // Harris: bound the step with relaxed ratios, then take the largest pivot.
        double bound = kInf;
        for (int r = 0; r < m_; ++r) bound = std::min(bound, ratio(r, opts_.feasibility_tol));
        double pivot_mag = 0.0;
        bool art_best = false;
        for (int r = 0; r < m_; ++r) {
          const double t = ratio(r, 0.0);
          if (t == kInf || t > bound) continue;
          const bool art = artificial_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])];
          const double mag = std::abs(alpha(r));
          if (leave < 0 || (art && !art_best) || (art == art_best && mag > pivot_mag)) {
            leave = r;
            theta = std::max(t, 0.0);
            pivot_mag = mag;
            art_best = art;
          }
        }
      }
      if (leave < 0) return LpStatus::unbounded;

      pivot(enter, leave, alpha, theta);
      if (theta <= 1e-12) {
        if (++degenerate_run > opts_.degenerate_before_bland) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  void pivot(int enter, int r, const Eigen::VectorXd& alpha, double theta) {
    x_.noalias() -= theta * alpha;
    x_(r) = theta;
    const int old = basis_[static_cast<std::size_t>(r)];
    is_basic_[static_cast<std::size_t>(old)] = -1;
    basis_[static_cast<std::size_t>(r)] = enter;
    is_basic_[static_cast<std::size_t>(enter)] = r;
    if (static_cast<int>(etas_.size()) + 1 >= opts_.refactor_every) {
      refactor();
      return;
    }
    Eta e{r, alpha(r), {}};
    for (int i = 0; i < m_; ++i)
      if (i != r && alpha(i) != 0.0) e.entries.emplace_back(i, alpha(i));
    etas_.push_back(std::move(e));
    for (int i = 0; i < m_; ++i)
      if (x_(i) < 0 && x_(i) > -1e-11) x_(i) = 0.0;
  }
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SimplexOptions& opts) {
  if (lp.objective.size() != lp.num_vars())
    fail(ErrorKind::invalid_argument, "objective size does not match variable count");
  Reduced red = presolve(lp, opts.presolve);
  LpSolution sol;
  const std::size_t n = lp.num_vars();
  sol.x.assign(n, 0.0);
  if (red.unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }
  Simplex simplex(red, opts);
  sol.status = simplex.run();
  sol.iterations = simplex.iterations();
  sol.condition_estimate = simplex.condition_estimate();
  if (sol.status != LpStatus::optimal) return sol;

  const auto xr = simplex.structural_values();
  for (int k = 0; k < red.n; ++k)
    sol.x[static_cast<std::size_t>(red.col_of[static_cast<std::size_t>(k)])] = xr[static_cast<std::size_t>(k)];
  for (auto it = red.stack.rbegin(); it != red.stack.rend(); ++it) {
    double v = 0.0;
    for (auto [j, coef] : it->terms) v += coef * sol.x[static_cast<std::size_t>(j)];
    sol.x[static_cast<std::size_t>(it->col)] = std::max(0.0, v);
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];
  sol.max_residual = max_residual(lp, sol.x);
  return sol;
}

LpSolution solve_least_flow(const LinearProgram& lp, double optimum, const SimplexOptions& opts) {
  LinearProgram second = lp;
  LpRow keep{"keep_optimum", {}, RowSense::ge, optimum - 1e-10 * std::max(1.0, std::abs(optimum))};
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (lp.objective[j] != 0.0) keep.coeffs.emplace_back(static_cast<int>(j), lp.objective[j]);
    second.objective[j] = -1.0;
  }
  second.rows.push_back(std::move(keep));
  LpSolution sol = solve(second, opts);
  if (sol.status != LpStatus::optimal) return sol;
  sol.objective = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) sol.objective += lp.objective[j] * sol.x[j];
  sol.max_residual = max_residual(lp, sol.x);
  return sol;
}

double max_residual(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (auto [j, v] : row.coeffs) lhs += v * x[static_cast<std::size_t>(j)];
    double viol = 0.0;
    switch (row.sense) {
      case RowSense::eq: viol = std::abs(lhs - row.rhs); break;
      case RowSense::le: viol = lhs - row.rhs; break;
      case RowSense::ge: viol = row.rhs - lhs; break;
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

}  // namespace gsplan
