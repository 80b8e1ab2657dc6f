#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "nnc/errors.hpp"
#include "nnc/systems.hpp"

using namespace nnc;
using nnc_test::vec2;
using nnc_test::vec3;

TEST_CASE("benchmark drift is lossless and its output matches the gradient") {
  SystemBundle bundle = sigma_ex();
  REQUIRE(bundle.storage.has_value());
  std::mt19937_64 rng(11);
  double worst_rate = 0.0;
  double worst_match = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Vector x = nnc_test::random_vector(3, rng, 2.0);
    Vector grad = bundle.storage->gradient(x);
    worst_rate = std::max(worst_rate, std::abs(grad.dot(bundle.system.f(x))));
    Vector mismatch = bundle.system.g(x).transpose() * grad - bundle.system.h(x);
    worst_match = std::max(worst_match, mismatch.lpNorm<Eigen::Infinity>());
  }
  CHECK(worst_rate <= 1e-9);
  CHECK(worst_match == 0.0);
}

TEST_CASE("passivity audit accepts the benchmark and rejects a wrong storage") {
  SystemBundle bundle = sigma_ex();
  PassivityReport rep = passivity_audit(bundle.system, *bundle.storage, 10000);
  CHECK(rep.samples == 10000);
  CHECK(rep.max_rate_violation <= 1e-9);
  CHECK(rep.max_output_mismatch <= 1e-9);
  CHECK(rep.max_gradient_error <= 1e-5);

  StorageFunction wrong;
  wrong.value = [](const Vector& x) { return x(0) * x(0) * x(0) * x(0); };
  wrong.gradient = [](const Vector& x) {
    Vector g(3);
    g << 4 * x(0) * x(0) * x(0), 0, 0;
    return g;
  };
  PassivityReport bad = passivity_audit(bundle.system, wrong, 1000);
  CHECK(bad.max_rate_violation > 1.0);
  CHECK(bad.max_output_mismatch > 1.0);
}

TEST_CASE("gramian of the planar rotation over a half turn") {
  Matrix a(2, 2);
  a << 0, -1, 1, 0;
  Matrix c(1, 2);
  c << 1, 0;
  Matrix w = observability_gramian(a, c, std::numbers::pi);
  Matrix expected = (std::numbers::pi / 2.0) * Matrix::Identity(2, 2);
  CHECK((w - expected).lpNorm<Eigen::Infinity>() <= 1e-8);
  CHECK((w - w.transpose()).lpNorm<Eigen::Infinity>() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(w);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("gramian of decoupled integrators matches the hand integral") {
  // A = 0 and C = I give W = tau I.
  Matrix w = observability_gramian(Matrix::Zero(2, 2), Matrix::Identity(2, 2), 2.0);
  CHECK((w - 2.0 * Matrix::Identity(2, 2)).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("gramian input validation") {
  CHECK_THROWS_AS(observability_gramian(Matrix::Zero(33, 33), Matrix::Ones(1, 33), 1.0),
                  DimensionTooLarge);
  CHECK_THROWS_AS(observability_gramian(Matrix::Zero(2, 2), Matrix::Ones(1, 2), 0.0),
                  std::invalid_argument);
}

TEST_CASE("incremental dynamics reproduce the original closed loop") {
  SystemBundle bundle = sigma_ex();
  SteadyStatePair pair;
  pair.x_star = vec3(0, 0, -1);
  pair.u_star = vec2(1, 0);
  CHECK(steady_state_residual(bundle.system, pair) == 0.0);
  ControlAffineSystem inc = incremental_system(bundle.system, pair);
  CHECK(inc.state_dim == 3);
  CHECK(inc.input_dim == 2);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    Vector x = nnc_test::random_vector(3, rng, 2.0);
    Vector u = nnc_test::random_vector(2, rng, 2.0);
    Vector xb = x - pair.x_star;
    Vector ub = u - pair.u_star;
    Vector lhs = inc.f(xb) + inc.g(xb) * ub;
    Vector rhs = bundle.system.f(x) + bundle.system.g(x) * u;
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-9);
  }
  // The shifted output vanishes at the new origin.
  CHECK(inc.h(Vector::Zero(3)).norm() == 0.0);
  // Drift spot check: (-xb2 + (xb3-1)^3 + 1, xb1, -xb1).
  Vector xb = vec3(0.5, -0.3, 0.2);
  Vector expect = vec3(0.3 + std::pow(0.2 - 1.0, 3) + 1.0, 0.5, -0.5);
  CHECK((inc.f(xb) - expect).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("non-steady pairs are rejected") {
  SystemBundle bundle = sigma_ex();
  SteadyStatePair pair;
  pair.x_star = vec3(0, 0, -1);
  pair.u_star = vec2(0.9, 0);  // residual 0.1 in the first state equation
  CHECK_THROWS_AS(incremental_system(bundle.system, pair), NotSteadyState);
}

TEST_CASE("shifted storage is a true storage for the shifted loop") {
  SystemBundle bundle = sigma_ex();
  SteadyStatePair pair;
  pair.x_star = vec3(0, 0, -1);
  pair.u_star = vec2(1, 0);
  ControlAffineSystem inc = incremental_system(bundle.system, pair);
  StorageFunction h0 = incremental_storage(*bundle.storage, pair.x_star);
  CHECK(h0.value(Vector::Zero(3)) == 0.0);
  CHECK(h0.gradient(Vector::Zero(3)).norm() == 0.0);
  std::mt19937_64 rng(31);
  double worst_rate = 0.0;
  double worst_supply = 0.0;
  double min_value = 0.0;
  for (int i = 0; i < 5000; ++i) {
    Vector xb = nnc_test::random_vector(3, rng, 2.0);
    Vector ub = nnc_test::random_vector(2, rng, 2.0);
    Vector grad = h0.gradient(xb);
    worst_rate = std::max(worst_rate, std::abs(grad.dot(inc.f(xb))));
    double supply = grad.dot(inc.g(xb) * ub) - inc.h(xb).dot(ub);
    worst_supply = std::max(worst_supply, std::abs(supply));
    min_value = std::min(min_value, h0.value(xb));
  }
  CHECK(worst_rate <= 1e-9);
  CHECK(worst_supply <= 1e-9);
  CHECK(min_value >= -1e-12);
}

TEST_CASE("shifted comparison gain: values and degeneracy guard") {
  CHECK(gamma_bar_ex(0.0, -1.0) == 0.0);
  CHECK(gamma_bar_ex(0.1, -1.0) == doctest::Approx(0.41333333333333333).epsilon(1e-12));
  CHECK(gamma_bar_ex(0.3, 2.0) ==
        doctest::Approx(4 * 0.3 + (1.0 / 3.0) * 0.09).epsilon(1e-12));
  CHECK_THROWS_AS(gamma_bar_ex(0.1, 0.0), DegenerateEquilibrium);
}

TEST_CASE("system registry resolves the benchmark and linear descriptions") {
  SystemBundle b = make_system("sigma_ex");
  CHECK(b.system.state_dim == 3);
  CHECK(b.system.input_dim == 2);
  REQUIRE(b.gain.has_value());
  CHECK(b.gain->tau == doctest::Approx(std::numbers::pi));
  CHECK(b.gain->gamma(0.125) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(make_system("no_such_system"), Error);

  // Rotation block with unit output row: the gain constant is
  // |W^{-1}| * integral of |C e^{As}| = (2/pi) * pi = 2.
  const char* path = "test_linear_system.json";
  {
    std::ofstream out(path);
    out << R"({"A": [[0, -1], [1, 0]], "B": [[1], [0]], "C": [[1, 0]],)"
        << R"( "tau": 3.141592653589793})";
  }
  SystemBundle lin = make_system(std::string("linear:") + path);
  std::remove(path);
  CHECK(lin.system.state_dim == 2);
  CHECK(lin.system.input_dim == 1);
  CHECK(lin.system.f(vec2(1, 0))(1) == doctest::Approx(1.0));
  REQUIRE(lin.gain.has_value());
  CHECK(lin.gain->gamma(1.0) == doctest::Approx(2.0).epsilon(1e-6));
}
