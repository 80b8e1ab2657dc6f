#pragma once

#include <vector>

#include "nnc/types.hpp"

namespace nnc {

// Minimal dense simplex solver for the small linear programs the geometry
// module needs (recession-cone probes, convex-hull membership, feasibility
// certificates). Deterministic: Bland's rule, so it never cycles. Not a
// general-purpose LP package and not meant to scale past a few dozen
// variables.

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  Vector x;
  double objective = 0.0;
};

// min cᵀx  subject to  Ax = b, x ≥ 0. Two-phase tableau simplex; rows with
// negative b are flipped, artificials are added for phase one.
LpResult solve_equality_lp(const Matrix& A, const Vector& b, const Vector& c,
                           int max_iterations = 50000);

// max cᵀx  subject to  Ax ≤ b, x free (split internally into x⁺ − x⁻ plus
// slacks). result.objective is the maximum of cᵀx.
LpResult maximize_linear(const Matrix& A, const Vector& b, const Vector& c,
                         int max_iterations = 50000);

// Is { x : Ax ≤ b } nonempty?
bool polyhedron_nonempty(const Matrix& A, const Vector& b);

// Is target a convex combination of `points`? Decided by phase-one
// feasibility of the combination system; `tolerance` scales the acceptable
// residual.
bool in_convex_hull(const std::vector<Vector>& points, const Vector& target,
                    double tolerance = kGeomTol);

}  // namespace nnc
