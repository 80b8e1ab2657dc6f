#include "nnc/linprog.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nnc/errors.hpp"

namespace nnc {
namespace {

constexpr double kPivotTol = 1e-10;

// Simplex loop on an (m+1)×(cols+1) tableau: last row holds reduced costs,
// last column the right-hand side, T(m, cols) is minus the objective.
// Entering columns are restricted to j < n_enterable (phase two uses this to
// lock out artificials). Bland's rule on both the entering and leaving
// choice, so the loop cannot cycle.
LpStatus run_simplex(Matrix& T, std::vector<int>& basis, int n_enterable,
                     int max_iterations) {
  const Index m = T.rows() - 1;
  const Index rhs = T.cols() - 1;
  for (int iter = 0; iter < max_iterations; ++iter) {
    int enter = -1;
    for (int j = 0; j < n_enterable; ++j) {
      if (T(m, j) < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return LpStatus::Optimal;

    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < m; ++i) {
      if (T(i, enter) <= kPivotTol) continue;
      const double ratio = T(i, rhs) / T(i, enter);
      if (ratio < best - 1e-12) {
        best = ratio;
        leave = static_cast<int>(i);
      } else if (ratio < best + 1e-12 && leave >= 0 &&
                 basis[i] < basis[leave]) {
        leave = static_cast<int>(i);
      }
    }
    if (leave < 0) return LpStatus::Unbounded;

    T.row(leave) /= T(leave, enter);
    for (Index i = 0; i < T.rows(); ++i) {
      if (i != leave && T(i, enter) != 0.0) {
        T.row(i) -= T(i, enter) * T.row(leave);
      }
    }
    basis[leave] = enter;
  }
  return LpStatus::IterationLimit;
}

}  // namespace

LpResult solve_equality_lp(const Matrix& A_in, const Vector& b_in,
                           const Vector& c, int max_iterations) {
  const Index m = A_in.rows();
  const Index n = A_in.cols();
  if (b_in.size() != m || c.size() != n) {
    throw std::invalid_argument("solve_equality_lp: shape mismatch");
  }

  Matrix A = A_in;
  Vector b = b_in;
  for (Index i = 0; i < m; ++i) {
    if (b(i) < 0) {
      A.row(i) = -A.row(i);
      b(i) = -b(i);
    }
  }

  const Index cols = n + m;  // original variables + one artificial per row
  Matrix T = Matrix::Zero(m + 1, cols + 1);
  T.block(0, 0, m, n) = A;
  T.block(0, n, m, m) = Matrix::Identity(m, m);
  T.col(cols).head(m) = b;

  std::vector<int> basis(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) basis[static_cast<size_t>(i)] = static_cast<int>(n + i);

  // Phase one: minimize the artificial sum. With the artificials basic, the
  // reduced cost of column j is -Σ_i A(i,j) and the objective starts at Σb.
  for (Index j = 0; j < n; ++j) T(m, j) = -A.col(j).sum();
  T(m, cols) = -b.sum();

  LpStatus st = run_simplex(T, basis, static_cast<int>(cols), max_iterations);
  if (st == LpStatus::IterationLimit) return {LpStatus::IterationLimit, Vector(), 0.0};
  const double residual = -T(m, cols);
  if (residual > 1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>())) {
    return {LpStatus::Infeasible, Vector(), 0.0};
  }

  // Drive still-basic artificials (value ~0) out where possible; a row with
  // no real pivot candidate is redundant and can keep its zero artificial.
  for (Index i = 0; i < m; ++i) {
    if (basis[static_cast<size_t>(i)] < n) continue;
    int enter = -1;
    for (Index j = 0; j < n; ++j) {
      if (std::abs(T(i, j)) > kPivotTol) {
        enter = static_cast<int>(j);
        break;
      }
    }
    if (enter < 0) continue;
    T.row(i) /= T(i, enter);
    for (Index r = 0; r < T.rows(); ++r) {
      if (r != i && T(r, enter) != 0.0) T.row(r) -= T(r, enter) * T.row(i);
    }
    basis[static_cast<size_t>(i)] = enter;
  }

  // Phase two: real objective, artificials barred from entering.
  T.row(m).setZero();
  for (Index j = 0; j < n; ++j) T(m, j) = c(j);
  for (Index i = 0; i < m; ++i) {
    const int bi = basis[static_cast<size_t>(i)];
    if (bi < n) T.row(m) -= c(bi) * T.row(i);
  }
  st = run_simplex(T, basis, static_cast<int>(n), max_iterations);
  if (st != LpStatus::Optimal) return {st, Vector(), 0.0};

  Vector x = Vector::Zero(n);
  for (Index i = 0; i < m; ++i) {
    const int bi = basis[static_cast<size_t>(i)];
    if (bi < n) x(bi) = T(i, cols);
  }
  return {LpStatus::Optimal, x, c.dot(x)};
}

LpResult maximize_linear(const Matrix& A, const Vector& b, const Vector& c,
                         int max_iterations) {
  const Index m = A.rows();
  const Index n = A.cols();
  if (b.size() != m || c.size() != n) {
    throw std::invalid_argument("maximize_linear: shape mismatch");
  }
  // Standard form over [x⁺, x⁻, s]: A·x⁺ − A·x⁻ + s = b, minimize −cᵀ(x⁺−x⁻).
  Matrix E(m, 2 * n + m);
  E << A, -A, Matrix::Identity(m, m);
  Vector cost = Vector::Zero(2 * n + m);
  cost.head(n) = -c;
  cost.segment(n, n) = c;

  LpResult inner = solve_equality_lp(E, b, cost, max_iterations);
  LpResult out;
  out.status = inner.status;
  if (inner.status == LpStatus::Optimal) {
    out.x = inner.x.head(n) - inner.x.segment(n, n);
    out.objective = c.dot(out.x);
  }
  return out;
}

bool polyhedron_nonempty(const Matrix& A, const Vector& b) {
  LpResult r = maximize_linear(A, b, Vector::Zero(A.cols()));
  if (r.status == LpStatus::IterationLimit) {
    throw NumericalFailure("feasibility probe hit the simplex iteration limit");
  }
  return r.status == LpStatus::Optimal;
}

bool in_convex_hull(const std::vector<Vector>& points, const Vector& target,
                    double tolerance) {
  if (points.empty()) return false;
  const Index d = target.size();
  const Index q = static_cast<Index>(points.size());
  Matrix E(d + 1, q);
  for (Index j = 0; j < q; ++j) {
    if (points[static_cast<size_t>(j)].size() != d) {
      throw std::invalid_argument("in_convex_hull: dimension mismatch");
    }
    E.col(j).head(d) = points[static_cast<size_t>(j)];
    E(d, j) = 1.0;
  }
  Vector b(d + 1);
  b.head(d) = target;
  b(d) = 1.0;

  // The solver's internal feasibility threshold is kGeomTol-scaled; rescaling
  // the whole system maps that threshold onto the caller's tolerance.
  const double scale = kGeomTol / std::max(tolerance, 1e-300);
  LpResult r = solve_equality_lp(E * scale, b * scale, Vector::Zero(q));
  if (r.status == LpStatus::IterationLimit) {
    throw NumericalFailure("convex-hull membership probe hit the simplex iteration limit");
  }
  return r.status == LpStatus::Optimal;
}

}  // namespace nnc
