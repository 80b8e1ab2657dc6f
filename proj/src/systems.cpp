#include "nnc/systems.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "nnc/errors.hpp"

namespace nnc {

SystemBundle sigma_ex() {
  SystemBundle bundle;
  ControlAffineSystem sys;
  sys.state_dim = 3;
  sys.input_dim = 2;
  Matrix G(3, 2);
  G << 1, 0,
       0, 0,
       0, 1;
  sys.f = [](const Vector& x) {
    Vector out(3);
    out << -x(1) + x(2) * x(2) * x(2), x(0), -x(0);
    return out;
  };
  sys.g = [G](const Vector&) { return G; };
  sys.h = [](const Vector& x) {
    Vector y(2);
    y << x(0), x(2) * x(2) * x(2);
    return y;
  };

  StorageFunction storage;
  storage.value = [](const Vector& x) {
    return 0.5 * x(0) * x(0) + 0.5 * x(1) * x(1) +
           0.25 * x(2) * x(2) * x(2) * x(2);
  };
  storage.gradient = [](const Vector& x) {
    Vector g(3);
    g << x(0), x(1), x(2) * x(2) * x(2);
    return g;
  };

  ObservabilityGain gain;
  gain.tau = std::numbers::pi;
  gain.gamma = [](double s) { return 4.0 * s + std::cbrt(s); };

  bundle.system = std::move(sys);
  bundle.storage = std::move(storage);
  bundle.gain = std::move(gain);
  return bundle;
}

double steady_state_residual(const ControlAffineSystem& sys,
                             const SteadyStatePair& pair) {
  if (pair.x_star.size() != sys.state_dim ||
      pair.u_star.size() != sys.input_dim) {
    throw std::invalid_argument("steady_state_residual: dimension mismatch");
  }
  return (sys.f(pair.x_star) + sys.g(pair.x_star) * pair.u_star).norm();
}

ControlAffineSystem incremental_system(const ControlAffineSystem& sys,
                                       const SteadyStatePair& pair) {
  const double residual = steady_state_residual(sys, pair);
  if (residual > kSteadyStateTol) {
    throw NotSteadyState("incremental_system: residual " +
                         std::to_string(residual) +
                         " exceeds the steady-state tolerance");
  }
  const Vector xs = pair.x_star;
  const Vector us = pair.u_star;
  ControlAffineSystem out;
  out.state_dim = sys.state_dim;
  out.input_dim = sys.input_dim;
  out.f = [sys, xs, us](const Vector& xb) -> Vector {
    return sys.f(xb + xs) - sys.f(xs) + (sys.g(xb + xs) - sys.g(xs)) * us;
  };
  out.g = [sys, xs](const Vector& xb) { return sys.g(xb + xs); };
  out.h = [sys, xs](const Vector& xb) -> Vector {
    return sys.h(xb + xs) - sys.h(xs);
  };
  return out;
}

StorageFunction incremental_storage(const StorageFunction& storage,
                                    const Vector& x_star) {
  const double value_at_star = storage.value(x_star);
  const Vector grad_at_star = storage.gradient(x_star);
  StorageFunction out;
  out.value = [storage, x_star, value_at_star, grad_at_star](const Vector& xb) {
    return storage.value(xb + x_star) - value_at_star - grad_at_star.dot(xb);
  };
  out.gradient = [storage, x_star, grad_at_star](const Vector& xb) -> Vector {
    return storage.gradient(xb + x_star) - grad_at_star;
  };
  return out;
}

Matrix observability_gramian(const Matrix& A, const Matrix& C, double tau) {
  const Index n = A.rows();
  if (A.cols() != n) {
    throw std::invalid_argument("observability_gramian: A must be square");
  }
  if (n > 32) {
    throw DimensionTooLarge("observability_gramian: state dimension capped at 32");
  }
  if (C.cols() != n) {
    throw std::invalid_argument("observability_gramian: C columns must match A");
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("observability_gramian: tau must be positive");
  }

  constexpr int kPanels = 2048;
  const double step = tau / kPanels;
  const Matrix phi = (A * step).exp();
  Matrix transition = Matrix::Identity(n, n);
  Matrix gramian = Matrix::Zero(n, n);
  for (int k = 0; k <= kPanels; ++k) {
    const Matrix ce = C * transition;
    const double weight =
        (k == 0 || k == kPanels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    gramian.noalias() += weight * (ce.transpose() * ce);
    if (k < kPanels) transition *= phi;
  }
  return (step / 3.0) * gramian;
}

double gamma_bar_ex(double s, double x3_star) {
  if (s < 0.0) {
    throw std::invalid_argument("gamma_bar_ex: s must be nonnegative");
  }
  if (std::abs(x3_star) <= kGeomTol) {
    throw DegenerateEquilibrium(
        "gamma_bar_ex: third equilibrium coordinate must be nonzero");
  }
  return 4.0 * s + 4.0 / (3.0 * x3_star * x3_star) * s * s;
}

PassivityReport passivity_audit(const ControlAffineSystem& sys,
                                const StorageFunction& storage,
                                int sample_count, double box_halfwidth,
                                std::uint64_t seed) {
  if (sample_count < 1) {
    throw std::invalid_argument("passivity_audit: sample_count must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-box_halfwidth, box_halfwidth);

  PassivityReport report;
  report.samples = sample_count;
  const Index n = sys.state_dim;
  for (int s = 0; s < sample_count; ++s) {
    Vector x(n);
    for (Index j = 0; j < n; ++j) x(j) = coord(rng);

    const Vector grad = storage.gradient(x);
    report.max_rate_violation =
        std::max(report.max_rate_violation, grad.dot(sys.f(x)));
    report.max_output_mismatch =
        std::max(report.max_output_mismatch,
                 (sys.g(x).transpose() * grad - sys.h(x))
                     .lpNorm<Eigen::Infinity>());

    double fd_error = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double step = 1e-6 * (1.0 + std::abs(x(j)));
      Vector xp = x, xm = x;
      xp(j) += step;
      xm(j) -= step;
      const double fd = (storage.value(xp) - storage.value(xm)) / (2.0 * step);
      fd_error = std::max(fd_error, std::abs(fd - grad(j)));
    }
    report.max_gradient_error = std::max(report.max_gradient_error, fd_error);
  }
  return report;
}

namespace {

Matrix parse_matrix(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw Error("make_system: missing matrix '" + key + "'");
  const auto& rows = j.at(key);
  if (!rows.is_array() || rows.empty()) {
    throw Error("make_system: matrix '" + key + "' must be a nonempty array of rows");
  }
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows[0].size());
  Matrix out(r, c);
  for (Index i = 0; i < r; ++i) {
    const auto& row = rows[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != c) {
      throw Error("make_system: ragged rows in matrix '" + key + "'");
    }
    for (Index k = 0; k < c; ++k) {
      out(i, k) = row[static_cast<size_t>(k)].get<double>();
    }
  }
  return out;
}

SystemBundle make_linear_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("make_system: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("make_system: malformed JSON: ") + e.what());
  }

  const Matrix A = parse_matrix(j, "A");
  const Matrix B = parse_matrix(j, "B");
  const Matrix C = parse_matrix(j, "C");
  const Index n = A.rows();
  if (A.cols() != n || B.rows() != n || C.cols() != n) {
    throw Error("make_system: inconsistent linear system dimensions");
  }

  SystemBundle bundle;
  bundle.system.state_dim = n;
  bundle.system.input_dim = B.cols();
  bundle.system.f = [A](const Vector& x) -> Vector { return A * x; };
  bundle.system.g = [B](const Vector&) { return B; };
  bundle.system.h = [C](const Vector& x) -> Vector { return C * x; };

  if (j.contains("tau")) {
    const double tau = j.at("tau").get<double>();
    const Matrix W = observability_gramian(A, C, tau);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(W);
    const double lambda_min = eig.eigenvalues().minCoeff();
    if (lambda_min > kGeomTol) {
      // ‖x(t)‖ ≤ ‖W⁻¹‖ · ∫₀^τ ‖e^{Aᵀs}Cᵀ‖ ds · sup‖y‖, so the gain is linear
      // with that constant. Same Simpson grid as the Gramian itself.
      constexpr int kPanels = 2048;
      const double step = tau / kPanels;
      const Matrix phi = (A * step).exp();
      Matrix transition = Matrix::Identity(n, n);
      double integral = 0.0;
      for (int k = 0; k <= kPanels; ++k) {
        const double weight =
            (k == 0 || k == kPanels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        integral += weight * (C * transition).jacobiSvd().singularValues()(0);
        if (k < kPanels) transition *= phi;
      }
      integral *= step / 3.0;
      const double c_gain = integral / lambda_min;
      bundle.gain = ObservabilityGain{
          [c_gain](double s) { return c_gain * s; }, tau};
    }
  }
  return bundle;
}

}  // namespace

SystemBundle make_system(const std::string& name) {
  if (name == "sigma_ex") return sigma_ex();
  if (name.rfind("linear:", 0) == 0) return make_linear_system(name.substr(7));
  throw Error("make_system: unknown system '" + name + "'");
}

}  // namespace nnc
