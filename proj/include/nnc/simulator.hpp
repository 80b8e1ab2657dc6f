#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nnc/controller.hpp"
#include "nnc/systems.hpp"
#include "nnc/types.hpp"

namespace nnc {

struct SimConfig {
  double dt = 1e-3;       // integration step
  int hold_steps = 1;     // control recomputed every hold_steps·dt
  double t_final = 50.0;  // horizon
  int record_stride = 1;  // samples kept every record_stride steps
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> outputs;
  std::vector<Vector> actions;  // the held action at each sample
  std::optional<std::vector<double>> storage;  // energy values, when supplied
};

struct ConvergenceReport {
  double epsilon = 0.0;
  Vector center;
  std::optional<double> entry_time;      // first time after which the state
                                         // stays in B_ε(center) to the end
  std::optional<double> post_entry_sup;  // sup distance after entry
  std::optional<bool> tail_action_constant;  // action == tail_action at every
                                             // sample from entry onward
  double h_max_increase = 0.0;  // max energy increase between samples

  // The applied action typically keeps switching for a while after the state
  // first enters the ball, so alongside the strict constant-after-entry flag
  // the report records when the action last changed and whether it settled
  // at tail_action with the horizon still running.
  double last_switch_time = 0.0;
  Vector final_action;
  bool tail_settled = false;

  std::optional<std::string> error;  // set by batch_sweep when a run fails
};

// Fixed-step classic 4th-order integration of ẋ = f(x) + g(x)·u with u
// produced by the feedback law from the sampled output at each hold-window
// start. Samples are recorded every record_stride steps, always including
// t = 0 and t_final (the last step is shortened to land on t_final exactly).
// The law's hysteresis memory is reset at the start, so every call is an
// independent run. Throws NonFiniteState when the state leaves the finite
// range (NaN/Inf or norm above 1e9).
Trajectory simulate(const ControlAffineSystem& sys, FeedbackLaw& flaw,
                    const Vector& x0, const SimConfig& cfg,
                    const std::optional<StorageFunction>& storage = std::nullopt);

// Entry/tail/energy diagnostics for a recorded trajectory.
ConvergenceReport convergence_metrics(const Trajectory& traj, double epsilon,
                                      const Vector& center,
                                      const Vector& tail_action);

// Independent runs from each initial condition (fresh law state per run),
// reports in input order. Per-run failures are captured in the matching
// report slot (error field) without aborting the batch. Runs execute
// sequentially, which keeps batches deterministic.
std::vector<ConvergenceReport> batch_sweep(
    const ControlAffineSystem& sys, const FeedbackLaw& flaw_template,
    const std::vector<Vector>& initial_conditions, const SimConfig& cfg,
    double epsilon, const Vector& center, const Vector& tail_action,
    const std::optional<StorageFunction>& storage = std::nullopt);

// CSV with header "t,x1..xn,y1..ym,u1..um,H" (the energy column appears only
// when the trajectory carries storage values); full-precision decimals, one
// row per sample.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);
std::string trajectory_csv(const Trajectory& traj);

}  // namespace nnc
