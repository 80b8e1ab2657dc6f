#pragma once

#include <cstdint>
#include <vector>

#include "nnc/action_set.hpp"
#include "nnc/types.hpp"

namespace nnc {

// Intersection of closed halfspaces { x : normals.row(i)·x ≤ offsets(i) }.
struct HalfspaceSystem {
  Matrix normals;  // one row per halfspace
  Vector offsets;

  Index dim() const { return normals.cols(); }
  Index count() const { return normals.rows(); }
};

// Controls the sampled part of min_alignment. Vertices and recession rays
// are always evaluated exactly; boundary_samples random facet points are
// added on top. box_radius_factor sets the clipping box (relative to the
// largest action norm) used to bound unbounded cells before enumeration.
struct SamplingConfig {
  int boundary_samples = 256;
  double box_radius_factor = 16.0;
  std::uint64_t seed = 0x9e3779b9u;
};

struct AlignmentEstimate {
  double value = 1.0;   // worst-case cosine found
  Vector point;         // cell point achieving it
  int action_index = -1;
};

// One bisector halfspace per non-center point: x satisfies the system iff x
// is at least as close to points[center_index] as to every other point.
// Row for point v (center c): normal v − c, offset (‖v‖² − ‖c‖²)/2.
HalfspaceSystem voronoi_halfspaces(const std::vector<Vector>& points,
                                   int center_index);

// All vertices (basic feasible intersections of dim-subsets of rows).
// Exhaustive over row subsets, so the dimension is capped at 8. Returns an
// empty list when the system has no vertex; throws EmptyPolytope when it is
// infeasible altogether.
std::vector<Vector> enumerate_vertices(const HalfspaceSystem& h);

// True iff the recession cone { d : normals·d ≤ 0 } is trivial.
bool is_bounded(const HalfspaceSystem& h);

// True iff p lies strictly inside conv(points): every probe p ± margin·e_j
// must stay inside the hull.
bool contains_in_interior(const std::vector<Vector>& points, const Vector& p,
                          double margin = kInteriorProbe);

// Smallest r such that the base action's Voronoi cell fits in the closed
// ball B_r(base); equals the largest base-to-vertex distance. Throws
// UnboundedCell when the cell is unbounded. Far actions are pruned before
// vertex enumeration (any action farther than twice a known cell radius
// cannot cut the cell), so large sets stay tractable.
double covering_radius(const ActionSet& set);

// Worst-case alignment cos∠(u − base, w − base) between a non-base action u
// and the points w of u's Voronoi cell. The minimum over a cell is attained
// at a vertex or along a recession ray (every cell point keeps a positive
// inner product with its action, so the spherical image of the cell sits in
// an open hemisphere and the cosine is geodesically concave along it);
// random facet samples are added as a cross-check.
AlignmentEstimate min_alignment(const ActionSet& set,
                                const SamplingConfig& sampling = {});

}  // namespace nnc
