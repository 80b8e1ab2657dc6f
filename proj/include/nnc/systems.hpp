#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "nnc/types.hpp"

namespace nnc {

// Control-affine dynamics ẋ = f(x) + g(x)·u with output y = h(x).
// Evaluators must be pure functions of the state.
struct ControlAffineSystem {
  Index state_dim = 0;
  Index input_dim = 0;
  std::function<Vector(const Vector&)> f;  // drift, ℝⁿ → ℝⁿ
  std::function<Matrix(const Vector&)> g;  // input map, ℝⁿ → ℝ^{n×m}
  std::function<Vector(const Vector&)> h;  // output, ℝⁿ → ℝᵐ
};

// Positive-definite energy function certifying passivity:
// ⟨∇H, f⟩ ≤ 0 and gᵀ∇H = h.
struct StorageFunction {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

// Norm-observability bound ‖x(t)‖ ≤ γ(sup‖y‖ over [t, t+τ]) for the
// zero-input system; γ is class-K (strictly increasing, γ(0) = 0).
struct ObservabilityGain {
  std::function<double(double)> gamma;
  double tau = 0.0;
};

struct SteadyStatePair {
  Vector x_star;
  Vector u_star;
};

struct SystemBundle {
  ControlAffineSystem system;
  std::optional<StorageFunction> storage;
  std::optional<ObservabilityGain> gain;
};

// Built-in three-state, two-input passive benchmark:
//   f(x) = (−x₂ + x₃³, x₁, −x₁),  g = [[1,0],[0,0],[0,1]],  y = (x₁, x₃³),
//   H(x) = ½x₁² + ½x₂² + ¼x₃⁴,    γ(s) = 4s + s^{1/3},  τ = π.
// The drift is lossless (⟨∇H, f⟩ ≡ 0) and gᵀ∇H = h exactly.
SystemBundle sigma_ex();

// ‖f(x*) + g(x*)·u*‖ — zero (within tolerance) at a genuine steady state.
double steady_state_residual(const ControlAffineSystem& sys,
                             const SteadyStatePair& pair);

// Dynamics in shifted coordinates x̄ = x − x*, ū = u − u*:
//   f̄(x̄) = f(x̄+x*) − f(x*) + (g(x̄+x*) − g(x*))·u*,  ḡ(x̄) = g(x̄+x*),
//   h̄(x̄) = h(x̄+x*) − h(x*).
// Throws NotSteadyState when the residual exceeds the steady-state tolerance.
ControlAffineSystem incremental_system(const ControlAffineSystem& sys,
                                       const SteadyStatePair& pair);

// Shifted storage H₀(x̄) = H(x̄+x*) − H(x*) − ⟨∇H(x*), x̄⟩ (the Bregman
// remainder of H at x*). H₀ ≥ 0 with H₀(0) = 0 and ∇H₀(0) = 0 for convex H,
// and for constant g the shifted system satisfies Ḣ₀ = ⟨h̄, ū⟩ whenever the
// original drift is lossless — the identity the shifted-output feedback
// analysis rests on. (The naive choice "reuse H's formula in x̄" does not
// satisfy it.)
StorageFunction incremental_storage(const StorageFunction& storage,
                                    const Vector& x_star);

// Finite-window observability Gramian ∫₀^τ e^{Aᵀs} CᵀC e^{As} ds by
// composite Simpson quadrature (2048 panels, matrix exponential steps).
// Symmetric PSD by construction. State dimension capped at 32.
Matrix observability_gramian(const Matrix& A, const Matrix& C, double tau);

// Observability gain of the shifted benchmark system about an equilibrium
// with third coordinate x3_star: γ̄(s) = 4s + 4/(3·x3_star²)·s².
// Throws DegenerateEquilibrium when x3_star vanishes (the shifted output
// loses its cubic-root inverse there).
double gamma_bar_ex(double s, double x3_star);

struct PassivityReport {
  double max_rate_violation = 0.0;    // max over samples of ⟨∇H(x), f(x)⟩₊
  double max_output_mismatch = 0.0;   // max ‖gᵀ∇H − h‖∞
  double max_gradient_error = 0.0;    // max |∇H − central difference|
  int samples = 0;
};

// Samples random states in [−box_halfwidth, box_halfwidth]ⁿ and reports the
// worst violation of the passivity conditions and of gradient consistency.
// Violations are reported, never thrown.
PassivityReport passivity_audit(const ControlAffineSystem& sys,
                                const StorageFunction& storage,
                                int sample_count, double box_halfwidth = 5.0,
                                std::uint64_t seed = 1234);

// String registry used by the CLI: "sigma_ex", or "linear:<path.json>" where
// the JSON file holds {"A": [[..]], "B": [[..]], "C": [[..]], "tau": t?}.
// For linear systems with "tau", a gain γ(s) = c·s is attached with
// c = ‖W_τ⁻¹‖·∫₀^τ ‖e^{Aᵀs}Cᵀ‖ ds when the Gramian is invertible.
SystemBundle make_system(const std::string& name);

}  // namespace nnc
