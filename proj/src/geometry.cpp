#include "nnc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "nnc/errors.hpp"
#include "nnc/linprog.hpp"

namespace nnc {
namespace {

// Advances idx (strictly increasing k-subset of {0..n−1}) to the next
// combination; returns false after the last one.
bool next_combination(std::vector<Index>& idx, Index n) {
  const Index k = static_cast<Index>(idx.size());
  for (Index i = k; i-- > 0;) {
    if (idx[static_cast<size_t>(i)] < n - k + i) {
      ++idx[static_cast<size_t>(i)];
      for (Index j = i + 1; j < k; ++j) {
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

// Scales each row to unit normal so residuals read as signed distances.
HalfspaceSystem normalized(const HalfspaceSystem& h) {
  HalfspaceSystem out = h;
  for (Index i = 0; i < h.count(); ++i) {
    const double len = h.normals.row(i).norm();
    if (len <= kGeomTol) {
      throw std::invalid_argument("halfspace system has a zero normal");
    }
    out.normals.row(i) /= len;
    out.offsets(i) /= len;
  }
  return out;
}

HalfspaceSystem with_box(const HalfspaceSystem& h, double radius) {
  const Index d = h.dim();
  HalfspaceSystem out;
  out.normals.resize(h.count() + 2 * d, d);
  out.offsets.resize(h.count() + 2 * d);
  out.normals.topRows(h.count()) = h.normals;
  out.offsets.head(h.count()) = h.offsets;
  out.normals.middleRows(h.count(), d) = Matrix::Identity(d, d);
  out.normals.bottomRows(d) = -Matrix::Identity(d, d);
  out.offsets.tail(2 * d).setConstant(radius);
  return out;
}

}  // namespace

HalfspaceSystem voronoi_halfspaces(const std::vector<Vector>& points,
                                   int center_index) {
  const int q = static_cast<int>(points.size());
  if (q < 2) {
    throw std::invalid_argument("voronoi_halfspaces: need at least two points");
  }
  if (center_index < 0 || center_index >= q) {
    throw std::invalid_argument("voronoi_halfspaces: center_index out of range");
  }
  const Index d = points[0].size();
  for (const auto& p : points) {
    if (p.size() != d) {
      throw std::invalid_argument("voronoi_halfspaces: dimension mismatch");
    }
  }
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      if ((points[static_cast<size_t>(i)] - points[static_cast<size_t>(j)])
              .norm() <= kGeomTol) {
        throw DuplicatePoints("voronoi_halfspaces: points " +
                              std::to_string(i) + " and " + std::to_string(j) +
                              " coincide");
      }
    }
  }

  const Vector& c = points[static_cast<size_t>(center_index)];
  HalfspaceSystem h;
  h.normals.resize(q - 1, d);
  h.offsets.resize(q - 1);
  Index row = 0;
  for (int i = 0; i < q; ++i) {
    if (i == center_index) continue;
    const Vector& v = points[static_cast<size_t>(i)];
    h.normals.row(row) = (v - c).transpose();
    h.offsets(row) = 0.5 * (v.squaredNorm() - c.squaredNorm());
    ++row;
  }
  return h;
}

std::vector<Vector> enumerate_vertices(const HalfspaceSystem& h_in) {
  const Index d = h_in.dim();
  if (d < 1) {
    throw std::invalid_argument("enumerate_vertices: empty system");
  }
  if (d > 8) {
    throw DimensionTooLarge(
        "enumerate_vertices: exhaustive subset enumeration capped at dimension 8");
  }
  if (h_in.offsets.size() != h_in.count()) {
    throw std::invalid_argument("enumerate_vertices: normals/offsets mismatch");
  }

  const HalfspaceSystem h = normalized(h_in);
  const Index n = h.count();
  std::vector<Vector> vertices;

  if (n >= d) {
    std::vector<Index> idx(static_cast<size_t>(d));
    std::iota(idx.begin(), idx.end(), Index{0});
    Matrix M(d, d);
    Vector rhs(d);
    do {
      for (Index i = 0; i < d; ++i) {
        M.row(i) = h.normals.row(idx[static_cast<size_t>(i)]);
        rhs(i) = h.offsets(idx[static_cast<size_t>(i)]);
      }
      Eigen::FullPivLU<Matrix> lu(M);
      if (lu.rank() < d) continue;
      Vector x = lu.solve(rhs);
      if (((h.normals * x - h.offsets).array() > kGeomTol).any()) continue;
      const double dup_tol = kGeomTol * (1.0 + x.lpNorm<Eigen::Infinity>());
      bool duplicate = false;
      for (const Vector& v : vertices) {
        if ((v - x).lpNorm<Eigen::Infinity>() <= dup_tol) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) vertices.push_back(std::move(x));
    } while (next_combination(idx, n));
  }

  if (vertices.empty() && !polyhedron_nonempty(h.normals, h.offsets)) {
    throw EmptyPolytope("enumerate_vertices: halfspace system is infeasible");
  }
  return vertices;
}

bool is_bounded(const HalfspaceSystem& h_in) {
  const HalfspaceSystem h = normalized(h_in);
  const Index d = h.dim();
  // The polyhedron is unbounded iff its recession cone {d : normals·d ≤ 0}
  // contains a nonzero direction; probe each signed coordinate inside the
  // unit box.
  const HalfspaceSystem cone = with_box({h.normals, Vector::Zero(h.count())}, 1.0);
  for (Index j = 0; j < d; ++j) {
    for (double sign : {1.0, -1.0}) {
      Vector objective = Vector::Zero(d);
      objective(j) = sign;
      const LpResult r = maximize_linear(cone.normals, cone.offsets, objective);
      if (r.status == LpStatus::IterationLimit) {
        throw NumericalFailure("is_bounded: simplex iteration limit");
      }
      if (r.status == LpStatus::Optimal && r.objective > 1e-7) return false;
    }
  }
  return true;
}

bool contains_in_interior(const std::vector<Vector>& points, const Vector& p,
                          double margin) {
  if (points.size() < 2) return false;
  const Index d = p.size();
  for (const auto& pt : points) {
    if (pt.size() != d) {
      throw std::invalid_argument("contains_in_interior: dimension mismatch");
    }
  }
  // If the whole cross-polytope p ± margin·e_j fits in the hull, p is
  // strictly interior; probing only finitely many directions is sound
  // because hull membership of all 2d probe tips implies membership of
  // their convex hull.
  for (Index j = 0; j < d; ++j) {
    for (double sign : {1.0, -1.0}) {
      Vector probe = p;
      probe(j) += sign * margin;
      if (!in_convex_hull(points, probe)) return false;
    }
  }
  return true;
}

double covering_radius(const ActionSet& set) {
  const int q = set.count();
  if (q == 0) {
    throw std::invalid_argument("covering_radius: empty action set");
  }
  if (set.base_index < 0 || set.base_index >= q) {
    throw std::invalid_argument("covering_radius: base_index out of range");
  }
  const Index d = set.dim();
  if (d > 8) {
    throw DimensionTooLarge("covering_radius: dimension capped at 8");
  }
  if (q < 2) {
    throw UnboundedCell("covering_radius: a single action covers all of space");
  }

  const Vector& c = set.base();
  std::vector<int> order;
  order.reserve(static_cast<size_t>(q) - 1);
  std::vector<double> dist(static_cast<size_t>(q), 0.0);
  for (int i = 0; i < q; ++i) {
    if (i == set.base_index) continue;
    dist[static_cast<size_t>(i)] = (set.actions[static_cast<size_t>(i)] - c).norm();
    order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return dist[static_cast<size_t>(a)] < dist[static_cast<size_t>(b)];
  });

  const auto cell_of = [&](const std::vector<int>& chosen) {
    std::vector<Vector> pts;
    pts.reserve(chosen.size() + 1);
    pts.push_back(c);
    for (int i : chosen) pts.push_back(set.actions[static_cast<size_t>(i)]);
    return voronoi_halfspaces(pts, 0);
  };
  const auto max_vertex_dist = [&](const HalfspaceSystem& hs) {
    const std::vector<Vector> verts = enumerate_vertices(hs);
    if (verts.empty()) {
      throw NumericalFailure("covering_radius: bounded cell produced no vertices");
    }
    double r = 0.0;
    for (const Vector& v : verts) r = std::max(r, (v - c).norm());
    return r;
  };

  // Start from a few nearest neighbors and widen until the cell they induce
  // is bounded; the true cell is contained in it.
  size_t k = std::min(order.size(),
                      std::max<size_t>(4, 4 * static_cast<size_t>(d)));
  std::vector<int> chosen(order.begin(), order.begin() + static_cast<long>(k));
  HalfspaceSystem cell = cell_of(chosen);
  while (!is_bounded(cell)) {
    if (k == order.size()) {
      throw UnboundedCell("covering_radius: base cell is unbounded");
    }
    k = std::min(order.size(), 2 * k);
    chosen.assign(order.begin(), order.begin() + static_cast<long>(k));
    cell = cell_of(chosen);
  }
  double radius = max_vertex_dist(cell);

  // Any action farther than twice the current radius bound has a bisector
  // halfspace containing B(base, radius) ⊇ cell, so it cannot cut the cell;
  // one refinement round with all near actions is exact.
  const double keep = 2.0 * radius + kGeomTol;
  std::vector<int> pruned = chosen;
  for (size_t j = k; j < order.size(); ++j) {
    if (dist[static_cast<size_t>(order[j])] <= keep) pruned.push_back(order[j]);
  }
  if (pruned.size() != chosen.size()) radius = max_vertex_dist(cell_of(pruned));
  return radius;
}

AlignmentEstimate min_alignment(const ActionSet& set,
                                const SamplingConfig& sampling) {
  const int q = set.count();
  const Index d = set.dim();
  if (q < 2) {
    throw Degenerate("min_alignment: need at least one non-base action");
  }
  if (d > 8) {
    throw DimensionTooLarge("min_alignment: dimension capped at 8");
  }

  const Vector base = set.base();
  std::vector<Vector> pts;
  pts.reserve(static_cast<size_t>(q));
  double scale = 0.0;
  for (const auto& a : set.actions) {
    pts.push_back(a - base);
    scale = std::max(scale, pts.back().norm());
  }
  for (int i = 0; i < q; ++i) {
    if (i != set.base_index && pts[static_cast<size_t>(i)].norm() <= kGeomTol) {
      throw Degenerate("min_alignment: an action coincides with the base");
    }
  }
  covering_radius(set);  // the alignment bound presumes a bounded base cell

  const double box_radius = sampling.box_radius_factor * scale;
  AlignmentEstimate out;
  out.value = std::numeric_limits<double>::infinity();

  for (int i = 0; i < q; ++i) {
    if (i == set.base_index) continue;
    const Vector& u = pts[static_cast<size_t>(i)];
    const double u_norm = u.norm();
    const HalfspaceSystem cell = normalized(voronoi_halfspaces(pts, i));

    const auto consider = [&](const Vector& w) {
      const double w_norm = w.norm();
      if (w_norm <= kGeomTol) return;
      const double cosine = u.dot(w) / (u_norm * w_norm);
      if (cosine < out.value) {
        out.value = cosine;
        out.point = base + w;
        out.action_index = i;
      }
    };

    // Recession-cone extreme rays, evaluated exactly: null directions of
    // (d−1)-row subsets that satisfy every cone inequality.
    if (d == 1) {
      for (double s : {1.0, -1.0}) {
        Vector dir(1);
        dir(0) = s;
        if ((cell.normals * dir).maxCoeff() <= 1e-9) consider(dir);
      }
    } else if (cell.count() >= d - 1) {
      std::vector<Index> idx(static_cast<size_t>(d - 1));
      std::iota(idx.begin(), idx.end(), Index{0});
      Matrix M(d - 1, d);
      do {
        for (Index r = 0; r < d - 1; ++r) {
          M.row(r) = cell.normals.row(idx[static_cast<size_t>(r)]);
        }
        Eigen::FullPivLU<Matrix> lu(M);
        if (lu.dimensionOfKernel() != 1) continue;
        Vector dir = lu.kernel().col(0);
        dir.normalize();
        for (double s : {1.0, -1.0}) {
          const Vector cand = s * dir;
          if ((cell.normals * cand).maxCoeff() <= 1e-9) consider(cand);
        }
      } while (next_combination(idx, cell.count()));
    }

    // Vertices of the box-clipped cell (feasible points, so always valid
    // samples; exact cell vertices when the cell is bounded).
    const HalfspaceSystem clipped = with_box(cell, box_radius);
    const std::vector<Vector> verts = enumerate_vertices(clipped);
    for (const Vector& v : verts) consider(v);

    // Random points on each facet: convex combinations of its active
    // vertices (Dirichlet weights), as a cross-check on the exact candidates.
    if (!verts.empty() && sampling.boundary_samples > 0) {
      std::mt19937_64 rng(sampling.seed +
                          0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(i + 1));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const Index facets = clipped.count();
      const int per_facet =
          sampling.boundary_samples / static_cast<int>(facets) + 1;
      const double active_tol = 1e-7 * (1.0 + box_radius);
      std::vector<const Vector*> active;
      for (Index f = 0; f < facets; ++f) {
        active.clear();
        for (const Vector& v : verts) {
          if (std::abs(clipped.normals.row(f).dot(v) - clipped.offsets(f)) <=
              active_tol) {
            active.push_back(&v);
          }
        }
        if (active.size() < 2) continue;
        for (int s = 0; s < per_facet; ++s) {
          Vector w = Vector::Zero(d);
          double total = 0.0;
          for (const Vector* v : active) {
            const double t = -std::log(unit(rng) + 1e-300);
            w += t * (*v);
            total += t;
          }
          consider(w / total);
        }
      }
    }
  }

  if (!std::isfinite(out.value)) {
    throw NumericalFailure("min_alignment: no cell points were evaluated");
  }
  return out;
}

}  // namespace nnc
