#include "nnc/action_set.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nnc/errors.hpp"
#include "nnc/geometry.hpp"

namespace nnc {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

void require_dimension(int m, const char* what) {
  if (m < 1) {
    throw std::invalid_argument(std::string(what) + " needs dimension >= 1");
  }
}

}  // namespace

ActionSet regular_simplex(int m, double lambda) {
  require_dimension(m, "regular_simplex");
  require_positive(lambda, "regular_simplex: lambda");
  ActionSet set;
  set.base_index = 0;
  set.actions.reserve(static_cast<size_t>(m) + 2);
  set.actions.push_back(Vector::Zero(m));
  for (int i = 0; i < m; ++i) {
    Vector v = Vector::Zero(m);
    v(i) = lambda;
    set.actions.push_back(std::move(v));
  }
  set.actions.push_back(
      Vector::Constant(m, lambda * (1.0 - std::sqrt(m + 1.0)) / m));
  return set;
}

ActionSet centered_regular_simplex(int m, double lambda) {
  ActionSet plain = regular_simplex(m, lambda);
  Vector barycenter = Vector::Zero(m);
  for (size_t i = 1; i < plain.actions.size(); ++i) barycenter += plain.actions[i];
  barycenter /= static_cast<double>(m + 1);

  ActionSet set;
  set.base_index = 0;
  set.actions.reserve(plain.actions.size());
  set.actions.push_back(Vector::Zero(m));
  for (size_t i = 1; i < plain.actions.size(); ++i) {
    set.actions.push_back(plain.actions[i] - barycenter);
  }
  return set;
}

ActionSet grid_set(int m, int n_half, double lambda) {
  require_dimension(m, "grid_set");
  if (n_half < 0) {
    throw std::invalid_argument("grid_set: n_half must be nonnegative");
  }
  require_positive(lambda, "grid_set: lambda");
  const double side = 2.0 * n_half + 1.0;
  if (static_cast<double>(m) * std::pow(side, m) > 1e6) {
    throw TooManyActions("grid_set: m*(2*n_half+1)^m exceeds 1e6");
  }

  ActionSet set;
  set.base_index = 0;
  set.actions.reserve(static_cast<size_t>(std::pow(side, m)));
  set.actions.push_back(Vector::Zero(m));  // base at the origin, first
  std::vector<int> digits(static_cast<size_t>(m), -n_half);
  while (true) {
    bool all_zero = true;
    for (int dgt : digits) {
      if (dgt != 0) {
        all_zero = false;
        break;
      }
    }
    if (!all_zero) {
      Vector v(m);
      for (int i = 0; i < m; ++i) v(i) = lambda * digits[static_cast<size_t>(i)];
      set.actions.push_back(std::move(v));
    }
    int pos = 0;
    while (pos < m && digits[static_cast<size_t>(pos)] == n_half) {
      digits[static_cast<size_t>(pos)] = -n_half;
      ++pos;
    }
    if (pos == m) break;
    ++digits[static_cast<size_t>(pos)];
  }
  return set;
}

ActionSet planar_trine(double theta, double alpha) {
  require_positive(alpha, "planar_trine: alpha");
  ActionSet set;
  set.base_index = 0;
  set.actions.reserve(4);
  set.actions.push_back(Vector::Zero(2));
  for (int k = 0; k < 3; ++k) {
    const double angle = theta + 2.0 * std::numbers::pi * k / 3.0;
    Vector v(2);
    v << alpha * std::sin(angle), alpha * std::cos(angle);
    set.actions.push_back(std::move(v));
  }
  return set;
}

double noncentered_simplex_radius(int m, double lambda) {
  require_dimension(m, "noncentered_simplex_radius");
  require_positive(lambda, "noncentered_simplex_radius: lambda");
  // The base cell's farthest vertices are the circumcenter mixing the
  // mirrored corner and the all-positive axis vertex (λ/2)·𝟙; the latter
  // dominates only at m = 1.
  const double t = 2.0 - m - std::sqrt(m + 1.0);
  const double corner = std::sqrt(m - 1.0 + t * t);
  const double axis = std::sqrt(static_cast<double>(m));
  return 0.5 * lambda * std::max(corner, axis);
}

double centered_simplex_radius(int m, double lambda) {
  require_dimension(m, "centered_simplex_radius");
  require_positive(lambda, "centered_simplex_radius: lambda");
  return lambda * (0.5 * m) * std::sqrt(m / (m + 1.0));
}

ActionSet design_minimal_set(int m, double delta, const Matrix& rotation,
                             const Vector& u_star, SimplexVariant variant) {
  require_dimension(m, "design_minimal_set");
  require_positive(delta, "design_minimal_set: delta");
  if (rotation.rows() != m || rotation.cols() != m) {
    throw std::invalid_argument("design_minimal_set: rotation must be m-by-m");
  }
  if (u_star.size() != m) {
    throw std::invalid_argument("design_minimal_set: u_star must have length m");
  }
  if ((rotation.transpose() * rotation - Matrix::Identity(m, m))
          .lpNorm<Eigen::Infinity>() > 1e-9) {
    throw NotOrthogonal("design_minimal_set: rotation is not orthogonal");
  }

  // Both radii scale linearly in λ, so inverting the closed form is a
  // division by the unit-λ radius.
  const double unit_radius = (variant == SimplexVariant::Centered)
                                 ? centered_simplex_radius(m, 1.0)
                                 : noncentered_simplex_radius(m, 1.0);
  const double lambda = delta / unit_radius;
  ActionSet set = (variant == SimplexVariant::Centered)
                      ? centered_regular_simplex(m, lambda)
                      : regular_simplex(m, lambda);
  for (auto& a : set.actions) a = rotation * a + u_star;

  if (m <= 8) {
    const double achieved = covering_radius(set);
    if (std::abs(achieved - delta) > 1e-7) {
      throw NumericalFailure("design_minimal_set: achieved covering radius " +
                             std::to_string(achieved) +
                             " misses the requested " + std::to_string(delta));
    }
  }
  return set;
}

ValidationReport validate(const ActionSet& set, bool want_mu) {
  ValidationReport report;
  const int q = set.count();
  if (q == 0 || set.base_index < 0 || set.base_index >= q) {
    report.witness = "invalid base index";
    return report;
  }
  const Index d = set.dim();
  for (const auto& a : set.actions) {
    if (a.size() != d) {
      report.witness = "inconsistent action dimensions";
      return report;
    }
  }
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      if ((set.actions[static_cast<size_t>(i)] -
           set.actions[static_cast<size_t>(j)])
              .norm() <= kGeomTol) {
        report.witness = "duplicate actions";
        return report;
      }
    }
  }
  report.minimal_cardinality = (q - 1 == static_cast<int>(d) + 1);

  std::vector<Vector> others;
  others.reserve(static_cast<size_t>(q) - 1);
  for (int i = 0; i < q; ++i) {
    if (i != set.base_index) others.push_back(set.actions[static_cast<size_t>(i)]);
  }
  if (others.size() < 2 || !contains_in_interior(others, set.base())) {
    report.witness = "base not in interior";
    return report;
  }

  try {
    report.delta = covering_radius(set);
  } catch (const UnboundedCell&) {
    report.witness = "base cell unbounded";
    return report;
  } catch (const DimensionTooLarge&) {
    report.witness = "dimension too large for vertex enumeration";
    return report;
  }

  if (want_mu) {
    try {
      report.mu_min1 = min_alignment(set).value;
    } catch (const Error& e) {
      report.witness = e.what();
      return report;
    }
    if (*report.mu_min1 <= 0.0) {
      report.witness = "nonpositive worst-case alignment";
      return report;
    }
  }

  report.assumption_ok = true;
  return report;
}

}  // namespace nnc
