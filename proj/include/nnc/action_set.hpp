#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nnc/types.hpp"

namespace nnc {

// A finite set of control actions with one designated base action — the
// action the nearest-neighbor selector settles on once the regulated output
// has converged. Actions are pairwise distinct and share one dimension.
struct ActionSet {
  std::vector<Vector> actions;
  int base_index = 0;

  Index dim() const { return actions.empty() ? 0 : actions.front().size(); }
  int count() const { return static_cast<int>(actions.size()); }
  const Vector& base() const { return actions.at(static_cast<size_t>(base_index)); }
};

enum class SimplexVariant { NonCentered, Centered };

// The m+1 vertices λ·e₁, …, λ·e_m and (λ/m)(1−√(m+1))·𝟙 of a regular
// m-simplex (edge length λ√2), with the origin prepended as base action
// (index 0).
ActionSet regular_simplex(int m, double lambda);

// The same simplex translated so its barycenter sits at the origin; the
// origin is appended as base action (index 0).
ActionSet centered_regular_simplex(int m, double lambda);

// Full grid λ·{−n_half, …, n_half}^m with the origin as base action.
// Guarded: m·(2·n_half+1)^m must not exceed 1e6.
ActionSet grid_set(int m, int n_half, double lambda);

// Planar four-action set: the origin plus three directions of length alpha
// at 120° spacing, rotated by theta. Base is the origin (index 0).
ActionSet planar_trine(double theta, double alpha);

// Tight covering radius of the base Voronoi cell for the two simplex
// families (closed forms; the geometry tests cross-check them against
// vertex enumeration). Both scale linearly in lambda.
double noncentered_simplex_radius(int m, double lambda);
double centered_simplex_radius(int m, double lambda);

// Smallest-cardinality set (m+2 actions: base + m+1) whose base cell has
// covering radius `delta`, rotated by `rotation` (orthogonal, else
// NotOrthogonal) and translated so the base action lands on u_star.
// Postcondition: |covering_radius(result) − delta| ≤ 1e−7 (verified
// internally; violations raise NumericalFailure).
ActionSet design_minimal_set(int m, double delta, const Matrix& rotation,
                             const Vector& u_star, SimplexVariant variant);

struct ValidationReport {
  bool assumption_ok = false;        // base strictly inside hull of the rest,
                                     // base cell bounded
  std::optional<double> delta;       // covering radius, when the cell is bounded
  std::optional<double> mu_min1;     // worst-case alignment, when requested
  std::string witness;               // which condition failed, empty when ok
  bool minimal_cardinality = false;  // non-base action count == dim + 1
};

// Checks the geometric hypotheses the nearest-neighbor guarantees rest on.
// Failures are reported, never thrown.
ValidationReport validate(const ActionSet& set, bool want_mu = false);

}  // namespace nnc
