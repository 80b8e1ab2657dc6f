// Command-line front end: design minimal action sets, check the geometric
// and small-gain hypotheses of a stored set, and simulate the quantized
// closed loop. Exit codes: 0 success, 2 invalid flags/inputs, 3 failed
// checks or no convergence, 4 state blow-up.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nnc/controller.hpp"
#include "nnc/errors.hpp"
#include "nnc/geometry.hpp"
#include "nnc/serialization.hpp"
#include "nnc/simulator.hpp"
#include "nnc/systems.hpp"

namespace {

using nnc::ActionSet;
using nnc::FeedbackLaw;
using nnc::Matrix;
using nnc::OrderedJson;
using nnc::Vector;

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw nnc::Error("cannot parse '" + item + "' as a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) {
      throw nnc::Error("cannot parse '" + item + "' as a number");
    }
    values.push_back(v);
  }
  if (values.empty()) throw nnc::Error("empty vector literal");
  Vector out(static_cast<nnc::Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) out(static_cast<nnc::Index>(i)) = values[i];
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nnc::Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw nnc::Error("cannot write '" + path + "'");
  out << content;
}

Matrix load_rotation(const std::string& source, int m) {
  if (source.empty() || source == "identity") return Matrix::Identity(m, m);
  OrderedJson doc;
  try {
    doc = OrderedJson::parse(slurp(source));
  } catch (const nlohmann::json::exception& e) {
    throw nnc::Error(std::string("rotation file: malformed JSON: ") + e.what());
  }
  if (!doc.is_array() || static_cast<int>(doc.size()) != m) {
    throw nnc::Error("rotation file must hold an m-by-m array of rows");
  }
  Matrix rot(m, m);
  for (int i = 0; i < m; ++i) {
    const auto& row = doc[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != m) {
      throw nnc::Error("rotation file must hold an m-by-m array of rows");
    }
    for (int j = 0; j < m; ++j) rot(i, j) = row[static_cast<size_t>(j)].get<double>();
  }
  return rot;
}

// Gain registry: "sigma_ex", "sigma_ex_bar:<x3_star>" (the shifted benchmark
// gain about an equilibrium), or "linear:<path.json>" (Gramian-derived).
nnc::ObservabilityGain gamma_from_name(const std::string& name) {
  if (name == "sigma_ex") return *nnc::sigma_ex().gain;
  const std::string bar_prefix = "sigma_ex_bar:";
  if (name.rfind(bar_prefix, 0) == 0) {
    double x3 = 0.0;
    try {
      x3 = std::stod(name.substr(bar_prefix.size()));
    } catch (const std::exception&) {
      throw nnc::Error("cannot parse the equilibrium coordinate in '" + name + "'");
    }
    nnc::gamma_bar_ex(0.0, x3);  // rejects a degenerate equilibrium up front
    return {[x3](double s) { return nnc::gamma_bar_ex(s, x3); },
            nnc::sigma_ex().gain->tau};
  }
  if (name.rfind("linear:", 0) == 0) {
    nnc::SystemBundle bundle = nnc::make_system(name);
    if (!bundle.gain) {
      throw nnc::Error("system '" + name + "' carries no gain (missing tau or singular Gramian)");
    }
    return *bundle.gain;
  }
  throw nnc::Error("unknown gamma '" + name + "'");
}

struct DesignArgs {
  int m = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  double k1 = 1.0;
  std::string gamma;
  std::string variant = "centered";
  std::string rotation = "identity";
  std::string u_star;
  bool mu = false;
  std::string out;
  bool has_delta = false;
  bool has_epsilon = false;
};

int run_design(const DesignArgs& args) {
  if (args.has_delta == args.has_epsilon) {
    std::cerr << "design: give exactly one of --delta or --epsilon (with --gamma)\n";
    return 2;
  }
  double delta = args.delta;
  if (args.has_epsilon) {
    if (args.gamma.empty()) {
      std::cerr << "design: --epsilon requires --gamma\n";
      return 2;
    }
    delta = nnc::largest_delta(gamma_from_name(args.gamma), args.epsilon, args.k1);
  }

  nnc::SimplexVariant variant;
  if (args.variant == "centered") {
    variant = nnc::SimplexVariant::Centered;
  } else if (args.variant == "noncentered") {
    variant = nnc::SimplexVariant::NonCentered;
  } else {
    std::cerr << "design: --variant must be centered or noncentered\n";
    return 2;
  }

  const Vector u_star =
      args.u_star.empty() ? Vector::Zero(args.m) : parse_vector(args.u_star);
  if (u_star.size() != args.m) {
    std::cerr << "design: --u-star must have length m\n";
    return 2;
  }
  const Matrix rotation = load_rotation(args.rotation, args.m);

  const ActionSet set =
      nnc::design_minimal_set(args.m, delta, rotation, u_star, variant);
  const nnc::ValidationReport report = nnc::validate(set, args.mu);

  // The primary artifact is the bare ActionSet document (so it can feed the
  // check/simulate commands directly); the validation report goes to the
  // other stream to keep each one parseable on its own.
  write_output(args.out, nnc::action_set_json(set).dump(2) + "\n");
  const std::string report_text = nnc::validation_report_json(report).dump(2) + "\n";
  if (args.out.empty() || args.out == "-") {
    std::cerr << report_text;
  } else {
    std::cout << report_text;
  }
  return report.assumption_ok ? 0 : 3;
}

struct CheckArgs {
  std::string set_path;
  bool mu = false;
  std::string sector;
  std::string gamma;
  double epsilon = 0.0;
  double k1 = 0.0;
  std::string out;
  bool has_epsilon = false;
  bool has_k1 = false;
};

int run_check(const CheckArgs& args) {
  if (args.gamma.empty() != !args.has_epsilon) {
    std::cerr << "check: --gamma and --epsilon go together\n";
    return 2;
  }
  if (args.has_k1 && !args.sector.empty()) {
    std::cerr << "check: --k1 conflicts with --sector (the sector supplies k1)\n";
    return 2;
  }

  std::optional<nnc::SectorFeedback> sector;
  if (!args.sector.empty()) {
    const Vector ks = parse_vector(args.sector);
    if (ks.size() != 3) {
      std::cerr << "check: --sector expects k1,k2,k3\n";
      return 2;
    }
    if (!(ks(0) > 0.0) || ks(1) < ks(0) || ks(2) < ks(0)) {
      std::cerr << "check: sector bounds need 0 < k1 <= k2 and k3 >= k1\n";
      return 2;
    }
    nnc::SectorFeedback s = nnc::identity_gain(ks(0));  // representative F
    s.k2 = ks(1);
    s.k3 = ks(2);
    sector = std::move(s);
  }

  const ActionSet set = nnc::action_set_from_string(slurp(args.set_path));
  const bool want_mu = args.mu || sector.has_value();
  const nnc::ValidationReport report = nnc::validate(set, want_mu);

  OrderedJson doc;
  doc["validation"] = nnc::validation_report_json(report);
  bool all_pass = report.assumption_ok;

  if (report.assumption_ok && !args.gamma.empty() && !sector) {
    const double k1 = args.has_k1 ? args.k1 : 1.0;
    const nnc::DesignVerdict verdict = nnc::check_unity_design(
        set, gamma_from_name(args.gamma), args.epsilon, k1);
    doc["unity_design"] = nnc::design_verdict_json(verdict);
    all_pass = all_pass && verdict.pass;
  }
  if (report.assumption_ok && sector) {
    if (!args.gamma.empty()) {
      const nnc::DesignVerdict verdict = nnc::check_sector_design(
          set, *sector, gamma_from_name(args.gamma), args.epsilon);
      doc["sector_design"] = nnc::design_verdict_json(verdict);
      all_pass = all_pass && verdict.pass;
    } else {
      // Alignment-only verdict: without a gain there is no γ(δ/k1) check.
      const double mu_value = report.mu_min1.value();
      const double ratio = sector->k1 / sector->k3;
      const double lhs = ratio * ratio + mu_value * mu_value;
      OrderedJson verdict;
      verdict["pass"] = lhs > 1.0;
      verdict["alignment_ok"] = lhs > 1.0;
      verdict["mu_estimate"] = mu_value;
      verdict["alignment_lhs"] = lhs;
      doc["sector_design"] = std::move(verdict);
      all_pass = all_pass && lhs > 1.0;
    }
  }

  write_output(args.out, doc.dump(2) + "\n");
  return all_pass ? 0 : 3;
}

struct SimArgs {
  std::string preset;
  std::string system;
  std::string law_path;
  std::string x0;
  std::string center;
  std::string tail;
  double dt = 0.0;
  double t_final = 0.0;
  int hold_steps = 0;
  int record_stride = 0;
  double epsilon = 0.0;
  std::string csv_path;
  std::string report_path;
  int sweep = 0;
  double sweep_lo = -3.0;
  double sweep_hi = 3.0;
  std::uint64_t seed = 2024;
  bool has_epsilon = false;
};

FeedbackLaw preset_example1_law() {
  FeedbackLaw law;
  law.variant = nnc::LawVariant::Unity;
  law.law.set = nnc::planar_trine(0.0, 0.1);
  return law;
}

FeedbackLaw preset_example2_law() {
  FeedbackLaw law;
  law.variant = nnc::LawVariant::IncrementalUnity;
  Vector u_star(2);
  u_star << 1.0, 0.0;
  ActionSet set = nnc::planar_trine(0.0, 0.1);
  for (auto& a : set.actions) a += u_star;
  law.law.set = std::move(set);
  law.u_star = u_star;
  Vector y_star(2);
  y_star << 0.0, -1.0;
  law.y_star = y_star;
  return law;
}

int run_simulate(const SimArgs& args) {
  std::string system_name = args.system;
  std::optional<FeedbackLaw> law;
  nnc::SimConfig cfg;
  double epsilon = args.epsilon;
  bool have_epsilon = args.has_epsilon;
  std::optional<Vector> x0;
  std::optional<Vector> center;
  std::optional<Vector> tail;

  if (!args.preset.empty()) {
    if (args.preset == "reproduce-example1") {
      system_name = system_name.empty() ? "sigma_ex" : system_name;
      law = preset_example1_law();
      if (!have_epsilon) {
        epsilon = 1.0;
        have_epsilon = true;
      }
      x0 = parse_vector("2,2,1.5");
      center = Vector::Zero(3);
      tail = Vector::Zero(2);
    } else if (args.preset == "reproduce-example2") {
      system_name = system_name.empty() ? "sigma_ex" : system_name;
      law = preset_example2_law();
      if (!have_epsilon) {
        epsilon = 0.5;
        have_epsilon = true;
      }
      x0 = parse_vector("2,2,1.5");
      center = parse_vector("0,0,-1");
      tail = parse_vector("1,0");
      // The shifted loop settles slower than the plain one; the default
      // horizon must actually reach the ball.
      cfg.t_final = 120.0;
    } else {
      std::cerr << "simulate: unknown preset '" << args.preset << "'\n";
      return 2;
    }
  }

  if (system_name.empty() || (!law && args.law_path.empty())) {
    std::cerr << "simulate: need --system and --law (or a --preset)\n";
    return 2;
  }
  if (!args.law_path.empty()) law = nnc::feedback_law_from_string(slurp(args.law_path));
  if (!have_epsilon) {
    std::cerr << "simulate: --epsilon is required without a preset\n";
    return 2;
  }

  if (args.dt > 0.0) cfg.dt = args.dt;
  if (args.t_final > 0.0) cfg.t_final = args.t_final;
  if (args.hold_steps > 0) cfg.hold_steps = args.hold_steps;
  if (args.record_stride > 0) cfg.record_stride = args.record_stride;

  const nnc::SystemBundle bundle = nnc::make_system(system_name);
  if (!args.x0.empty()) x0 = parse_vector(args.x0);
  if (!args.center.empty()) center = parse_vector(args.center);
  if (!args.tail.empty()) tail = parse_vector(args.tail);
  if (!center) center = Vector::Zero(bundle.system.state_dim);
  if (!tail) tail = law->law.set.base();
  if (center->size() != bundle.system.state_dim) {
    std::cerr << "simulate: --center must have the state dimension\n";
    return 2;
  }

  // For incremental laws the energy column and monotonicity diagnostics use
  // the storage shifted at the ball center (the target equilibrium); the
  // unshifted storage is not monotone along the shifted loop.
  std::optional<nnc::StorageFunction> storage = bundle.storage;
  const bool incremental = law->variant == nnc::LawVariant::IncrementalUnity ||
                           law->variant == nnc::LawVariant::IncrementalSector;
  if (storage && incremental) {
    const nnc::StorageFunction shifted =
        nnc::incremental_storage(*storage, *center);
    const Vector x_star = *center;
    nnc::StorageFunction in_original_coords;
    in_original_coords.value = [shifted, x_star](const Vector& x) {
      return shifted.value(x - x_star);
    };
    in_original_coords.gradient = [shifted, x_star](const Vector& x) {
      return shifted.gradient(x - x_star);
    };
    storage = std::move(in_original_coords);
  }

  if (args.sweep > 0) {
    if (!args.csv_path.empty()) {
      std::cerr << "simulate: --csv applies to single runs, not sweeps\n";
      return 2;
    }
    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> coord(args.sweep_lo, args.sweep_hi);
    std::vector<Vector> starts(static_cast<size_t>(args.sweep));
    for (auto& s : starts) {
      s.resize(bundle.system.state_dim);
      for (nnc::Index j = 0; j < s.size(); ++j) s(j) = coord(rng);
    }
    const auto reports = nnc::batch_sweep(bundle.system, *law, starts, cfg,
                                          epsilon, *center, *tail, storage);
    OrderedJson doc = OrderedJson::array();
    bool any_error = false;
    bool all_entered = true;
    for (const auto& r : reports) {
      doc.push_back(nnc::convergence_report_json(r));
      any_error = any_error || r.error.has_value();
      all_entered = all_entered && r.entry_time.has_value();
    }
    write_output(args.report_path, doc.dump(2) + "\n");
    if (any_error) return 4;
    return all_entered ? 0 : 3;
  }

  if (!x0) {
    std::cerr << "simulate: --x0 is required without a preset\n";
    return 2;
  }
  if (x0->size() != bundle.system.state_dim) {
    std::cerr << "simulate: --x0 must have the state dimension\n";
    return 2;
  }

  FeedbackLaw run_law = *law;
  const nnc::Trajectory traj =
      nnc::simulate(bundle.system, run_law, *x0, cfg, storage);
  const nnc::ConvergenceReport report =
      nnc::convergence_metrics(traj, epsilon, *center, *tail);

  if (!args.csv_path.empty()) {
    std::ofstream csv(args.csv_path);
    if (!csv) throw nnc::Error("cannot write '" + args.csv_path + "'");
    nnc::write_trajectory_csv(traj, csv);
  }
  write_output(args.report_path, nnc::convergence_report_json(report).dump(2) + "\n");
  return report.entry_time ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite action-set design, hypothesis checking, and quantized "
               "closed-loop simulation for nearest-neighbor output feedback"};
  app.require_subcommand(1);

  DesignArgs design;
  CLI::App* cmd_design =
      app.add_subcommand("design", "Construct a minimal action set for a covering radius or gain target");
  cmd_design->add_option("--m", design.m, "Input dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* opt_delta =
      cmd_design->add_option("--delta", design.delta, "Covering radius target")
          ->check(CLI::PositiveNumber);
  auto* opt_eps = cmd_design
                      ->add_option("--epsilon", design.epsilon,
                                   "Convergence ball radius (with --gamma)")
                      ->check(CLI::PositiveNumber);
  cmd_design->add_option("--gamma", design.gamma,
                         "Gain name: sigma_ex | sigma_ex_bar:<x3*> | linear:<file>");
  cmd_design->add_option("--k1", design.k1, "Lower sector gain for the delta bound")
      ->check(CLI::PositiveNumber);
  cmd_design->add_option("--variant", design.variant, "centered | noncentered");
  cmd_design->add_option("--rotation", design.rotation, "identity | JSON matrix file");
  cmd_design->add_option("--u-star", design.u_star, "Base action (comma separated)");
  cmd_design->add_flag("--mu", design.mu, "Also estimate the worst-case alignment");
  cmd_design->add_option("--out", design.out, "Output file (default stdout)");

  CheckArgs check;
  CLI::App* cmd_check =
      app.add_subcommand("check", "Validate a stored action set and design conditions");
  cmd_check->add_option("--set", check.set_path, "ActionSet JSON file")->required();
  cmd_check->add_flag("--mu", check.mu, "Estimate the worst-case alignment");
  cmd_check->add_option("--sector", check.sector, "Sector bounds k1,k2,k3");
  cmd_check->add_option("--gamma", check.gamma,
                        "Gain name: sigma_ex | sigma_ex_bar:<x3*> | linear:<file>");
  auto* opt_check_eps =
      cmd_check->add_option("--epsilon", check.epsilon, "Convergence ball radius")
          ->check(CLI::PositiveNumber);
  auto* opt_check_k1 =
      cmd_check->add_option("--k1", check.k1, "Lower sector gain for the gain check")
          ->check(CLI::PositiveNumber);
  cmd_check->add_option("--out", check.out, "Output file (default stdout)");

  SimArgs sim;
  CLI::App* cmd_sim =
      app.add_subcommand("simulate", "Integrate the quantized closed loop and report convergence");
  cmd_sim->add_option("--preset", sim.preset,
                      "reproduce-example1 | reproduce-example2");
  cmd_sim->add_option("--system", sim.system, "System name: sigma_ex | linear:<file>");
  cmd_sim->add_option("--law", sim.law_path, "FeedbackLaw JSON file");
  cmd_sim->add_option("--x0", sim.x0, "Initial state (comma separated)");
  cmd_sim->add_option("--dt", sim.dt, "Integration step")->check(CLI::PositiveNumber);
  cmd_sim->add_option("--t-final", sim.t_final, "Horizon")->check(CLI::PositiveNumber);
  cmd_sim->add_option("--hold-steps", sim.hold_steps, "Steps per control hold window")
      ->check(CLI::PositiveNumber);
  cmd_sim->add_option("--record-stride", sim.record_stride, "Steps between samples")
      ->check(CLI::PositiveNumber);
  auto* opt_sim_eps =
      cmd_sim->add_option("--epsilon", sim.epsilon, "Convergence ball radius")
          ->check(CLI::PositiveNumber);
  cmd_sim->add_option("--center", sim.center, "Ball center (default origin)");
  cmd_sim->add_option("--tail", sim.tail, "Expected tail action (default set base)");
  cmd_sim->add_option("--csv", sim.csv_path, "Trajectory CSV output file");
  cmd_sim->add_option("--report", sim.report_path, "Report JSON output (default stdout)");
  cmd_sim->add_option("--sweep", sim.sweep, "Run N random initial conditions instead of --x0")
      ->check(CLI::PositiveNumber);
  cmd_sim->add_option("--sweep-lo", sim.sweep_lo, "Sweep box lower bound per coordinate");
  cmd_sim->add_option("--sweep-hi", sim.sweep_hi, "Sweep box upper bound per coordinate");
  cmd_sim->add_option("--seed", sim.seed, "Seed for the sweep sampler");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  design.has_delta = opt_delta->count() > 0;
  design.has_epsilon = opt_eps->count() > 0;
  check.has_epsilon = opt_check_eps->count() > 0;
  check.has_k1 = opt_check_k1->count() > 0;
  sim.has_epsilon = opt_sim_eps->count() > 0;

  try {
    if (cmd_design->parsed()) return run_design(design);
    if (cmd_check->parsed()) return run_check(check);
    if (cmd_sim->parsed()) return run_simulate(sim);
  } catch (const nnc::NonFiniteState& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const nnc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
