#include "doctest.h"
#include "oracles.hpp"

#include "liftlearn/lifting.hpp"
#include "liftlearn/simulate.hpp"

using namespace liftlearn;

namespace {

// dx/dt = A x with A = [[0, 1], [-4, -0.5]].
Matrix damped_oscillator()
{
  Matrix a(2, 2);
  a << 0.0, 1.0, -4.0, -0.5;
  return a;
}

// Closed form exp(A t) x0 through the eigendecomposition of the 2x2 system.
Vector linear_exact(double t, const Vector &x0)
{
  const double zeta = 0.25, omega = std::sqrt(4.0 - zeta * zeta);
  const double e = std::exp(-zeta * t), c = std::cos(omega * t), s = std::sin(omega * t);
  Vector x(2);
  x(0) = e * (x0(0) * c + (x0(1) + zeta * x0(0)) / omega * s);
  x(1) = e * (x0(1) * c - (4.0 * x0(0) + zeta * x0(1)) / omega * s);
  return x;
}

}  // namespace

TEST_CASE("sample counts include both endpoints")
{
  CHECK(sample_count({0.0, 3.0}, 1e-3) == 3001);
  CHECK(sample_count({0.0, 10.0}, 1e-3) == 10001);
  CHECK(sample_count({0.0, 1.0}, 0.25) == 5);
  CHECK_THROWS_AS(sample_count({0.0, 1.0}, 0.0), ContractViolation);
  CHECK_THROWS_AS(sample_count({1.0, 1.0}, 0.1), ContractViolation);
}

TEST_CASE("RK4 on a linear system converges at fourth order to the closed form")
{
  const Matrix a = damped_oscillator();
  const VectorField f = [&](double, const Vector &x, const Vector &) { return Vector(a * x); };
  Vector x0(2);
  x0 << 1.0, 0.0;
  double previous = 0.0;
  for (double dt : {0.04, 0.02, 0.01})
  {
    const SnapshotSet snap = integrate(f, x0, {0.0, 2.0}, dt, constant_input());
    double err = 0.0;
    for (Index k = 0; k < snap.samples(); ++k)
    {
      err = std::max(err, (snap.states.col(k) - linear_exact(snap.times(k), x0)).cwiseAbs().maxCoeff());
    }
    if (previous > 0.0)
    {
      const double ratio = previous / err;
      CHECK(ratio > 14.0);
      CHECK(ratio < 18.0);
    }
    previous = err;
  }
}

TEST_CASE("integrate matches a hand-written RK4 bit for bit and is deterministic")
{
  const SwingNetwork net = oracle::random_network(4, 2);
  const SwingState x0{Vector::LinSpaced(4, -0.2, 0.2), Vector::Zero(4)};
  const SnapshotSet a = collect_swing_snapshots(net, x0, {0.0, 0.5}, 1e-2);
  const SnapshotSet b = collect_swing_snapshots(net, x0, {0.0, 0.5}, 1e-2);
  CHECK(a.states == b.states);
  CHECK(a.outputs == b.outputs);
  REQUIRE(a.samples() == 51);

  auto f = [&](double, const Vector &z) {
    const Index n = 4;
    Vector dz(2 * n);
    for (Index i = 0; i < n; ++i)
    {
      dz(i) = z(n + i);
      dz(n + i) = oracle::scalar_acceleration(net.parameters(), z.head(n), z.tail(n), 1.0, i);
    }
    return dz;
  };
  Vector z = x0.stacked();
  double worst = 0.0;
  for (Index k = 1; k < a.samples(); ++k)
  {
    z = oracle::rk4_step(f, a.times(k - 1), z, 1e-2);
    worst = std::max(worst, (a.states.col(k) - z).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-13);
  CHECK((a.outputs.row(0) - (net.output_weights() * a.states.topRows(4))).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("input signal is sampled at the grid times")
{
  const VectorField f = [](double, const Vector &, const Vector &u) { return Vector(u); };
  const InputSignal u = [](double t) { return Vector::Constant(1, std::cos(t)); };
  const SnapshotSet snap = integrate(f, Vector::Zero(1), {0.0, 1.0}, 0.01, u);
  for (Index k = 0; k < snap.samples(); ++k)
  {
    CHECK(snap.inputs(0, k) == std::cos(snap.times(k)));
    // x(t) = sin t, integrated to RK4 accuracy.
    CHECK(std::abs(snap.states(0, k) - std::sin(snap.times(k))) < 1e-10);
  }
}

TEST_CASE("lifting snapshots commutes with lifting each column")
{
  const SwingNetwork net = oracle::random_network(5, 8);
  const SwingState x0{Vector::LinSpaced(5, -0.5, 0.5), Vector::LinSpaced(5, 1.0, -1.0)};
  const SnapshotSet full = collect_swing_snapshots(net, x0, {0.0, 0.2}, 1e-3);
  const SnapshotSet lifted = lift_snapshots(full);
  REQUIRE(lifted.state_dim() == 20);
  REQUIRE(lifted.samples() == full.samples());
  for (Index k = 0; k < full.samples(); k += 17)
  {
    const Vector expected = lift_state(SwingState::from_stacked(full.states.col(k))).values();
    CHECK(lifted.states.col(k) == expected);
  }
  CHECK(lifted.outputs == full.outputs);
  CHECK(lifted.times == full.times);
}

TEST_CASE("forward differences converge at first order, central at second")
{
  const Matrix a = damped_oscillator();
  const VectorField f = [&](double, const Vector &x, const Vector &) { return Vector(a * x); };
  Vector x0(2);
  x0 << 1.0, 0.0;

  auto derivative_error = [&](double dt, DerivativeScheme scheme) {
    const SnapshotSet snap = derivative_snapshots(integrate(f, x0, {0.0, 1.0}, dt, constant_input()), scheme);
    double err = 0.0;
    // Interior columns only; both schemes are one-sided at the ends.
    for (Index k = 1; k + 1 < snap.samples(); ++k)
    {
      const Vector exact = a * linear_exact(snap.times(k), x0);
      err = std::max(err, (snap.derivatives->col(k) - exact).cwiseAbs().maxCoeff());
    }
    return err;
  };
  const double f1 = derivative_error(1e-2, DerivativeScheme::Forward);
  const double f2 = derivative_error(5e-3, DerivativeScheme::Forward);
  CHECK(f1 / f2 == doctest::Approx(2.0).epsilon(0.05));
  const double c1 = derivative_error(1e-2, DerivativeScheme::Central);
  const double c2 = derivative_error(5e-3, DerivativeScheme::Central);
  CHECK(c1 / c2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("forward difference layout and last-column backward difference")
{
  SnapshotSet snap;
  snap.times = Vector::LinSpaced(4, 0.0, 3.0);
  snap.states = Matrix(1, 4);
  snap.states << 0.0, 1.0, 4.0, 9.0;
  snap.inputs = Matrix::Ones(1, 4);
  const SnapshotSet d = derivative_snapshots(snap);
  REQUIRE(d.derivatives);
  CHECK((*d.derivatives)(0, 0) == 1.0);
  CHECK((*d.derivatives)(0, 1) == 3.0);
  CHECK((*d.derivatives)(0, 2) == 5.0);
  CHECK((*d.derivatives)(0, 3) == 5.0);

  const SnapshotSet c = derivative_snapshots(snap, DerivativeScheme::Central);
  CHECK((*c.derivatives)(0, 1) == 2.0);
  CHECK((*c.derivatives)(0, 2) == 4.0);
}

TEST_CASE("exact derivative snapshots evaluate the field at each sample")
{
  SnapshotSet snap;
  snap.times = Vector::LinSpaced(3, 0.0, 2.0);
  snap.states = Matrix::Ones(2, 3);
  snap.inputs = Matrix::Constant(1, 3, 0.5);
  const SnapshotSet d = exact_derivative_snapshots(snap, [](double t, const Vector &x, const Vector &u) {
    return Vector(x * t + Vector::Constant(x.size(), u(0)));
  });
  CHECK((*d.derivatives)(1, 2) == 2.5);
  CHECK((*d.derivatives)(0, 0) == 0.5);
}

TEST_CASE("divergence and bad snapshot sets are reported")
{
  const VectorField blowup = [](double, const Vector &x, const Vector &) { return Vector(x.array().square()); };
  CHECK_THROWS_AS(integrate(blowup, Vector::Ones(1), {0.0, 2.0}, 1e-2, constant_input(), 1e6),
                  IntegrationDiverged);
  CHECK_THROWS_AS(integrate(blowup, Vector::Ones(1), {0.0, 2.0}, 1e-2, constant_input()),
                  IntegrationDiverged);

  SnapshotSet bad;
  bad.times = Vector::LinSpaced(3, 0.0, 1.0);
  bad.states = Matrix::Zero(2, 2);
  bad.inputs = Matrix::Zero(1, 3);
  CHECK_THROWS_AS(bad.validate(), ContractViolation);

  bad.states = Matrix::Zero(2, 3);
  bad.times(1) = 0.7;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  CHECK_THROWS_AS(derivative_snapshots(bad), ContractViolation);
}
