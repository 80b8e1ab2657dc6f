#include <doctest.h>

#include <vector>

#include "nnc/errors.hpp"
#include "nnc/linprog.hpp"

using namespace nnc;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("equality-form program with a unique optimum") {
  // min x1 + 2 x2  s.t.  x1 + x2 = 1,  x >= 0  ->  x = (1, 0)
  Matrix a(1, 2);
  a << 1, 1;
  Vector b(1);
  b << 1;
  Vector c(2);
  c << 1, 2;
  LpResult r = solve_equality_lp(a, b, c);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(r.x(0) == doctest::Approx(1.0));
  CHECK(r.x(1) == doctest::Approx(0.0));
}

TEST_CASE("contradictory equality constraints are infeasible") {
  Matrix a(2, 1);
  a << 1, 1;
  Vector b(2);
  b << 1, 2;
  CHECK(solve_equality_lp(a, b, Vector::Zero(1)).status == LpStatus::Infeasible);
}

TEST_CASE("negative right-hand sides are handled by row flips") {
  // -x1 = -3 with x >= 0 has the solution x1 = 3.
  Matrix a(1, 1);
  a << -1;
  Vector b(1);
  b << -3;
  Vector c(1);
  c << 1;
  LpResult r = solve_equality_lp(a, b, c);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x(0) == doctest::Approx(3.0));
}

TEST_CASE("inequality maximization over a box") {
  Matrix a(4, 2);
  a << 1, 0, -1, 0, 0, 1, 0, -1;
  Vector b = Vector::Ones(4);
  Vector c(2);
  c << 1, 1;
  LpResult r = maximize_linear(a, b, c);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(2.0));
  CHECK(r.x(0) == doctest::Approx(1.0));
  CHECK(r.x(1) == doctest::Approx(1.0));
}

TEST_CASE("unbounded objectives are flagged, not looped on") {
  // Only x >= 0 constrains the variable; maximizing x diverges.
  Matrix a(1, 1);
  a << -1;
  Vector b(1);
  b << 0;
  Vector c(1);
  c << 1;
  CHECK(maximize_linear(a, b, c).status == LpStatus::Unbounded);
}

TEST_CASE("feasibility probe for halfspace systems") {
  Matrix a(2, 1);
  a << 1, -1;
  Vector feasible(2);
  feasible << 1, 1;  // -1 <= x <= 1
  CHECK(polyhedron_nonempty(a, feasible));
  Vector empty(2);
  empty << -1, -1;  // x <= -1 and x >= 1
  CHECK_FALSE(polyhedron_nonempty(a, empty));
}

TEST_CASE("convex hull membership in the plane") {
  std::vector<Vector> tri = {v2(0, 0), v2(1, 0), v2(0, 1)};
  CHECK(in_convex_hull(tri, v2(0.25, 0.25)));
  CHECK(in_convex_hull(tri, v2(0, 0)));      // a vertex counts as inside
  CHECK(in_convex_hull(tri, v2(0.5, 0.5)));  // boundary midpoint
  CHECK_FALSE(in_convex_hull(tri, v2(0.6, 0.6)));
  CHECK_FALSE(in_convex_hull(tri, v2(-0.1, 0.0)));
}

TEST_CASE("hull membership respects the caller's tolerance") {
  std::vector<Vector> seg = {v2(0, 0), v2(1, 0)};
  Vector off = v2(0.5, 1e-6);
  CHECK_FALSE(in_convex_hull(seg, off, 1e-9));
  CHECK(in_convex_hull(seg, off, 1e-4));
}
