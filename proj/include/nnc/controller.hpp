#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nnc/action_set.hpp"
#include "nnc/geometry.hpp"
#include "nnc/systems.hpp"
#include "nnc/types.hpp"

namespace nnc {

// Nearest-neighbor selector over an action set: minimize ‖v + y‖.
// hysteresis is the distance margin a held action may lag behind the
// optimum before the selector switches away from it.
struct NearestNeighborLaw {
  ActionSet set;
  double tie_tol = 1e-9;
  double hysteresis = 0.0;
};

struct PhiResult {
  Vector action;               // the chosen action
  int index = -1;              // its index in the set
  std::vector<int> tie_indices;  // all actions within tie_tol of the minimum,
                                 // ascending
};

// Evaluates the selector. `held` is the previously held action index (if
// any): it is kept while its distance stays within `hysteresis` of the
// minimum; otherwise the lowest-index tie member is chosen. With
// hysteresis = 0 and no held action the map is memoryless and pure.
PhiResult phi(const NearestNeighborLaw& law, const Vector& y,
              std::optional<int> held = std::nullopt);

// Static output feedback F with sector bounds
//   k1‖y‖² ≤ ⟨F(y), y⟩ ≤ k2‖y‖²  and  ‖F(y)‖ ≤ k3‖y‖.
struct SectorFeedback {
  std::string name;  // registry spelling, e.g. "identity_gain:3"
  std::function<Vector(const Vector&)> F;
  double k1 = 1.0;
  double k2 = 1.0;
  double k3 = 1.0;
};

SectorFeedback identity_gain(double k);

// Registry lookup; currently "identity_gain:<k>". Unknown names throw
// MissingSector.
SectorFeedback sector_from_name(const std::string& name);

// Max violation of the three sector inequalities over random samples in the
// unit ball of ℝ^dim (0 when the bounds hold on every sample).
double sector_violation(const SectorFeedback& sector, Index dim,
                        int samples = 1000, std::uint64_t seed = 99);

enum class LawVariant { Unity, Sector, IncrementalUnity, IncrementalSector };

// A complete feedback configuration. Sector variants require `sector`;
// incremental variants require `u_star` and `y_star`. `held` is the
// hysteresis memory and makes a law instance stateful — do not share one
// instance across concurrent simulations.
struct FeedbackLaw {
  LawVariant variant = LawVariant::Unity;
  NearestNeighborLaw law;
  std::optional<SectorFeedback> sector;
  std::optional<Vector> u_star;
  std::optional<Vector> y_star;
  std::optional<int> held;

  // Dispatches on the variant:
  //   Unity              u = φ(y)
  //   Sector             u = φ(F(y))
  //   IncrementalUnity   u = φ((y − y*) − u*)
  //   IncrementalSector  u = φ(F(y − y*) − u*)
  // Updates the held action.
  Vector apply(const Vector& y);
  void reset() { held.reset(); }
};

// Variant-checked entry points (same evaluation as apply()).
Vector phi_sector(FeedbackLaw& flaw, const Vector& y);
Vector phi_incremental(FeedbackLaw& flaw, const Vector& y);

// Outcome of a design-condition check. The unity-law gate tests
// γ(δ) ≤ ε only; the sector gate additionally tests k₁²/k₃² + μ² > 1 with
// the sampled alignment estimate μ.
struct DesignVerdict {
  bool pass = false;
  double delta = 0.0;        // covering radius of the set
  double epsilon = 0.0;
  double k1 = 1.0;
  double gamma_value = 0.0;  // γ(δ/k₁)
  std::optional<bool> gain_ok;
  std::optional<bool> alignment_ok;
  std::optional<double> mu_estimate;  // sampled, not certified
  std::optional<double> alignment_lhs;  // k₁²/k₃² + μ²
};

// Small-gain design gate for the unity law: γ(δ/k1) ≤ ε (k1 = 1 for the
// plain law). The comparison allows 1e−12 relative slack so closed-boundary
// designs (γ(δ) = ε) evaluate stably.
DesignVerdict check_unity_design(const ActionSet& set,
                                 const ObservabilityGain& gain, double epsilon,
                                 double k1 = 1.0);

// Design gate for the sector law: k₁²/k₃² + μ² > 1 and γ(δ/k₁) ≤ ε.
DesignVerdict check_sector_design(const ActionSet& set,
                                  const SectorFeedback& sector,
                                  const ObservabilityGain& gain, double epsilon,
                                  const SamplingConfig& sampling = {});

// Largest δ with γ(δ/k1) ≤ ε: exponential bracketing then bisection to
// relative tolerance 1e−12. Throws NoSolution if γ exceeds ε on every probe
// down to underflow (impossible for a continuous class-K γ; reported
// defensively).
double largest_delta(const ObservabilityGain& gain, double epsilon, double k1);

}  // namespace nnc
