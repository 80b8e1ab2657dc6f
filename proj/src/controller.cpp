#include "nnc/controller.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "nnc/errors.hpp"

namespace nnc {

PhiResult phi(const NearestNeighborLaw& law, const Vector& y,
              std::optional<int> held) {
  const int q = law.set.count();
  if (q == 0) {
    throw std::invalid_argument("phi: empty action set");
  }
  if (y.size() != law.set.dim() || !y.allFinite()) {
    throw std::invalid_argument("phi: query must be finite with the set's dimension");
  }

  std::vector<double> dist(static_cast<size_t>(q));
  double min_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < q; ++i) {
    dist[static_cast<size_t>(i)] = (law.set.actions[static_cast<size_t>(i)] + y).norm();
    min_dist = std::min(min_dist, dist[static_cast<size_t>(i)]);
  }

  PhiResult result;
  for (int i = 0; i < q; ++i) {
    if (dist[static_cast<size_t>(i)] <= min_dist + law.tie_tol) {
      result.tie_indices.push_back(i);
    }
  }
  result.index = result.tie_indices.front();
  if (held && *held >= 0 && *held < q &&
      dist[static_cast<size_t>(*held)] <= min_dist + law.hysteresis) {
    result.index = *held;
  }
  result.action = law.set.actions[static_cast<size_t>(result.index)];
  return result;
}

SectorFeedback identity_gain(double k) {
  if (!(k > 0.0)) {
    throw std::invalid_argument("identity_gain: k must be positive");
  }
  SectorFeedback s;
  s.name = "identity_gain:" + std::to_string(k);
  s.F = [k](const Vector& y) -> Vector { return k * y; };
  s.k1 = s.k2 = s.k3 = k;
  return s;
}

SectorFeedback sector_from_name(const std::string& name) {
  const std::string prefix = "identity_gain:";
  if (name.rfind(prefix, 0) == 0) {
    try {
      SectorFeedback s = identity_gain(std::stod(name.substr(prefix.size())));
      s.name = name;  // keep the caller's spelling
      return s;
    } catch (const std::invalid_argument&) {
      // unparsable or nonpositive k: fall through to the registry error
    } catch (const std::out_of_range&) {
    }
  }
  throw MissingSector("sector_from_name: unknown sector feedback '" + name + "'");
}

double sector_violation(const SectorFeedback& sector, Index dim, int samples,
                        std::uint64_t seed) {
  if (!(sector.k1 > 0.0) || sector.k2 < sector.k1 || sector.k3 < sector.k1) {
    throw std::invalid_argument(
        "sector_violation: require 0 < k1 <= k2 and k3 >= k1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector y(dim);
    for (Index j = 0; j < dim; ++j) y(j) = gauss(rng);
    if (y.norm() <= kGeomTol) continue;
    y *= std::pow(unit(rng), 1.0 / static_cast<double>(dim)) / y.norm();
    const Vector fy = sector.F(y);
    const double yy = y.squaredNorm();
    const double inner = fy.dot(y);
    worst = std::max(worst, sector.k1 * yy - inner);
    worst = std::max(worst, inner - sector.k2 * yy);
    worst = std::max(worst, fy.norm() - sector.k3 * y.norm());
  }
  return worst;
}

Vector FeedbackLaw::apply(const Vector& y) {
  Vector query;
  switch (variant) {
    case LawVariant::Unity:
      query = y;
      break;
    case LawVariant::Sector:
      if (!sector) throw MissingSector("FeedbackLaw: sector variant without a sector feedback");
      query = sector->F(y);
      break;
    case LawVariant::IncrementalUnity:
      if (!u_star || !y_star) {
        throw MissingSetpoint("FeedbackLaw: incremental variant without u_star/y_star");
      }
      query = (y - *y_star) - *u_star;
      break;
    case LawVariant::IncrementalSector:
      if (!sector) throw MissingSector("FeedbackLaw: sector variant without a sector feedback");
      if (!u_star || !y_star) {
        throw MissingSetpoint("FeedbackLaw: incremental variant without u_star/y_star");
      }
      query = sector->F(y - *y_star) - *u_star;
      break;
  }
  PhiResult r = phi(law, query, held);
  held = r.index;
  return r.action;
}

Vector phi_sector(FeedbackLaw& flaw, const Vector& y) {
  if (flaw.variant != LawVariant::Sector &&
      flaw.variant != LawVariant::IncrementalSector) {
    throw std::invalid_argument("phi_sector: law variant is not sector-based");
  }
  return flaw.apply(y);
}

Vector phi_incremental(FeedbackLaw& flaw, const Vector& y) {
  if (flaw.variant != LawVariant::IncrementalUnity &&
      flaw.variant != LawVariant::IncrementalSector) {
    throw std::invalid_argument("phi_incremental: law variant is not incremental");
  }
  return flaw.apply(y);
}

namespace {

// Closed-boundary designs (γ(δ) = ε) must not flip on last-bit noise.
bool leq_with_slack(double lhs, double rhs) {
  return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
}

}  // namespace

DesignVerdict check_unity_design(const ActionSet& set,
                                 const ObservabilityGain& gain, double epsilon,
                                 double k1) {
  if (!(k1 > 0.0)) {
    throw std::invalid_argument("check_unity_design: k1 must be positive");
  }
  DesignVerdict v;
  v.delta = covering_radius(set);
  v.epsilon = epsilon;
  v.k1 = k1;
  v.gamma_value = gain.gamma(v.delta / k1);
  v.gain_ok = leq_with_slack(v.gamma_value, epsilon);
  v.pass = *v.gain_ok;
  return v;
}

DesignVerdict check_sector_design(const ActionSet& set,
                                  const SectorFeedback& sector,
                                  const ObservabilityGain& gain, double epsilon,
                                  const SamplingConfig& sampling) {
  DesignVerdict v;
  v.delta = covering_radius(set);
  v.epsilon = epsilon;
  v.k1 = sector.k1;
  v.gamma_value = gain.gamma(v.delta / sector.k1);
  v.gain_ok = leq_with_slack(v.gamma_value, epsilon);
  const double mu = min_alignment(set, sampling).value;
  v.mu_estimate = mu;
  const double ratio = sector.k1 / sector.k3;
  v.alignment_lhs = ratio * ratio + mu * mu;
  v.alignment_ok = *v.alignment_lhs > 1.0;
  v.pass = *v.gain_ok && *v.alignment_ok;
  return v;
}

double largest_delta(const ObservabilityGain& gain, double epsilon, double k1) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("largest_delta: epsilon must be positive");
  }
  if (!(k1 > 0.0)) {
    throw std::invalid_argument("largest_delta: k1 must be positive");
  }

  // Bracket the boundary γ(s) = ε in s = δ/k1 space.
  double lo = 0.0;
  double hi = 1.0;
  if (gain.gamma(hi) <= epsilon) {
    while (gain.gamma(hi) <= epsilon) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e30) {
        throw NumericalFailure("largest_delta: gain never exceeds epsilon");
      }
    }
  } else {
    while (gain.gamma(hi) > epsilon) {
      hi *= 0.5;
      if (hi < 1e-300) {
        throw NoSolution("largest_delta: gain exceeds epsilon on every probe");
      }
    }
    lo = hi;
    hi *= 2.0;
  }

  // Invariant: γ(lo) ≤ ε < γ(hi). Return the inner endpoint.
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (gain.gamma(mid) <= epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return k1 * lo;
}

}  // namespace nnc
