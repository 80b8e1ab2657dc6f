#include "nnc/simulator.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "nnc/errors.hpp"

namespace nnc {
namespace {

Vector rk4_step(const ControlAffineSystem& sys, const Vector& x,
                const Vector& u, double dt) {
  const auto rhs = [&](const Vector& z) -> Vector {
    return sys.f(z) + sys.g(z) * u;
  };
  const Vector k1 = rhs(x);
  const Vector k2 = rhs(x + (0.5 * dt) * k1);
  const Vector k3 = rhs(x + (0.5 * dt) * k2);
  const Vector k4 = rhs(x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory simulate(const ControlAffineSystem& sys, FeedbackLaw& flaw,
                    const Vector& x0, const SimConfig& cfg,
                    const std::optional<StorageFunction>& storage) {
  if (x0.size() != sys.state_dim || !x0.allFinite()) {
    throw std::invalid_argument("simulate: x0 must be finite with the system's state dimension");
  }
  if (!(cfg.dt > 0.0)) {
    throw std::invalid_argument("simulate: dt must be positive");
  }
  if (!(cfg.t_final >= cfg.dt)) {
    throw std::invalid_argument("simulate: t_final must be at least dt");
  }
  if (cfg.hold_steps < 1 || cfg.record_stride < 1) {
    throw std::invalid_argument("simulate: hold_steps and record_stride must be positive");
  }

  flaw.reset();
  const long steps =
      std::max<long>(1, std::lround(std::ceil(cfg.t_final / cfg.dt - 1e-9)));

  Trajectory traj;
  if (storage) traj.storage.emplace();
  Vector x = x0;
  Vector u = Vector::Zero(sys.input_dim);
  const auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.outputs.push_back(sys.h(x));
    traj.actions.push_back(u);
    if (storage) traj.storage->push_back(storage->value(x));
  };

  for (long k = 0; k < steps; ++k) {
    if (k % cfg.hold_steps == 0) u = flaw.apply(sys.h(x));
    if (k % cfg.record_stride == 0) record(static_cast<double>(k) * cfg.dt);
    const bool last = (k + 1 == steps);
    const double step = last ? cfg.t_final - static_cast<double>(k) * cfg.dt
                             : cfg.dt;
    x = rk4_step(sys, x, u, step);
    const double t_next =
        last ? cfg.t_final : static_cast<double>(k + 1) * cfg.dt;
    if (!x.allFinite() || x.norm() > 1e9) {
      throw NonFiniteState(
          "simulate: state left the finite range at t=" + std::to_string(t_next),
          t_next);
    }
  }
  record(cfg.t_final);
  return traj;
}

ConvergenceReport convergence_metrics(const Trajectory& traj, double epsilon,
                                      const Vector& center,
                                      const Vector& tail_action) {
  const size_t n = traj.times.size();
  if (n == 0) {
    throw std::invalid_argument("convergence_metrics: empty trajectory");
  }
  if (traj.states.size() != n || traj.actions.size() != n) {
    throw std::invalid_argument("convergence_metrics: ragged trajectory");
  }

  ConvergenceReport report;
  report.epsilon = epsilon;
  report.center = center;

  long last_violation = -1;
  for (size_t i = 0; i < n; ++i) {
    if ((traj.states[i] - center).norm() > epsilon) {
      last_violation = static_cast<long>(i);
    }
  }
  const size_t entry = static_cast<size_t>(last_violation + 1);
  if (entry < n) {
    report.entry_time = traj.times[entry];
    double sup = 0.0;
    bool constant = true;
    for (size_t i = entry; i < n; ++i) {
      sup = std::max(sup, (traj.states[i] - center).norm());
      if ((traj.actions[i] - tail_action).lpNorm<Eigen::Infinity>() > 1e-12) {
        constant = false;
      }
    }
    report.post_entry_sup = sup;
    report.tail_action_constant = constant;
  }

  if (traj.storage) {
    double increase = 0.0;
    for (size_t i = 1; i < traj.storage->size(); ++i) {
      increase = std::max(increase, (*traj.storage)[i] - (*traj.storage)[i - 1]);
    }
    report.h_max_increase = std::max(0.0, increase);
  }

  report.final_action = traj.actions.back();
  bool switched = false;
  size_t last_switch = 0;
  for (size_t i = 1; i < n; ++i) {
    if ((traj.actions[i] - traj.actions[i - 1]).lpNorm<Eigen::Infinity>() > 0.0) {
      switched = true;
      last_switch = i;
    }
  }
  report.last_switch_time = switched ? traj.times[last_switch] : traj.times.front();
  report.tail_settled =
      (report.final_action - tail_action).lpNorm<Eigen::Infinity>() <= 1e-12 &&
      (!switched || last_switch + 1 < n);
  return report;
}

std::vector<ConvergenceReport> batch_sweep(
    const ControlAffineSystem& sys, const FeedbackLaw& flaw_template,
    const std::vector<Vector>& initial_conditions, const SimConfig& cfg,
    double epsilon, const Vector& center, const Vector& tail_action,
    const std::optional<StorageFunction>& storage) {
  std::vector<ConvergenceReport> reports;
  reports.reserve(initial_conditions.size());
  for (const Vector& x0 : initial_conditions) {
    FeedbackLaw law = flaw_template;  // fresh hysteresis state per run
    try {
      const Trajectory traj = simulate(sys, law, x0, cfg, storage);
      reports.push_back(convergence_metrics(traj, epsilon, center, tail_action));
    } catch (const Error& e) {
      ConvergenceReport failed;
      failed.epsilon = epsilon;
      failed.center = center;
      failed.error = e.what();
      reports.push_back(std::move(failed));
    }
  }
  return reports;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  if (traj.times.empty()) {
    throw std::invalid_argument("write_trajectory_csv: empty trajectory");
  }
  const Index n = traj.states.front().size();
  const Index m = traj.actions.front().size();
  const Index p = traj.outputs.front().size();

  os << "t";
  for (Index i = 1; i <= n; ++i) os << ",x" << i;
  for (Index i = 1; i <= p; ++i) os << ",y" << i;
  for (Index i = 1; i <= m; ++i) os << ",u" << i;
  if (traj.storage) os << ",H";
  os << "\n";

  os << std::setprecision(17);
  for (size_t k = 0; k < traj.times.size(); ++k) {
    os << traj.times[k];
    for (Index i = 0; i < n; ++i) os << "," << traj.states[k](i);
    for (Index i = 0; i < p; ++i) os << "," << traj.outputs[k](i);
    for (Index i = 0; i < m; ++i) os << "," << traj.actions[k](i);
    if (traj.storage) os << "," << (*traj.storage)[k];
    os << "\n";
  }
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  write_trajectory_csv(traj, os);
  return os.str();
}

}  // namespace nnc
