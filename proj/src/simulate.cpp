#include "liftlearn/simulate.hpp"

#include <cmath>
#include <sstream>

#include "liftlearn/lifting.hpp"

namespace liftlearn {

namespace {

std::string time_message(double t, const std::string &what)
{
  std::ostringstream os;
  os.precision(10);
  os << "integration diverged at t = " << t << ": " << what;
  return os.str();
}

}  // namespace

IntegrationDiverged::IntegrationDiverged(double time, const std::string &what)
    : NumericalError(time_message(time, what)), time_(time)
{
}

double SnapshotSet::step() const
{
  require(times.size() >= 2, "SnapshotSet::step: need at least two samples");
  return (times(times.size() - 1) - times(0)) / static_cast<double>(times.size() - 1);
}

void SnapshotSet::validate() const
{
  const Index s = samples();
  require(states.cols() == s, "SnapshotSet: states has " + std::to_string(states.cols()) +
                                  " columns, expected " + std::to_string(s));
  require(inputs.cols() == s, "SnapshotSet: inputs has " + std::to_string(inputs.cols()) +
                                  " columns, expected " + std::to_string(s));
  if (derivatives)
  {
    require(derivatives->cols() == s && derivatives->rows() == states.rows(),
            "SnapshotSet: derivatives shape does not match states");
  }
  if (outputs.size() > 0)
  {
    require(outputs.cols() == s, "SnapshotSet: outputs column count mismatch");
  }
  if (s >= 2)
  {
    const double dt = step();
    for (Index k = 1; k < s; ++k)
    {
      const double h = times(k) - times(k - 1);
      require(h > 0.0, "SnapshotSet: times not strictly increasing");
      require(std::abs(h - dt) <= 1e-12 * std::max(std::abs(dt), std::abs(times(k))) + 1e-15,
              "SnapshotSet: time grid is not uniform");
    }
  }
}

InputSignal constant_input(double value)
{
  return [value](double) { return Vector::Constant(1, value); };
}

Index sample_count(TimeSpan span, double dt)
{
  require(std::isfinite(dt) && dt > 0.0, "sample_count: dt must be positive");
  require(span.stop > span.start, "sample_count: empty time span");
  return static_cast<Index>(std::llround(span.length() / dt)) + 1;
}

SnapshotSet integrate(const VectorField &rhs, const Vector &x0, TimeSpan span, double dt,
                      const InputSignal &input, double divergence_threshold)
{
  const Index s = sample_count(span, dt);
  const Vector u0 = input(span.start);

  SnapshotSet out;
  out.times.resize(s);
  out.states.resize(x0.size(), s);
  out.inputs.resize(u0.size(), s);

  auto check = [&](const Vector &x, double t) {
    if (!x.allFinite())
    {
      throw IntegrationDiverged(t, "non-finite state");
    }
    if (x.norm() > divergence_threshold)
    {
      throw IntegrationDiverged(t, "state norm exceeded threshold");
    }
  };

  Vector x = x0;
  check(x, span.start);
  for (Index k = 0; k < s; ++k)
  {
    const double t = span.start + static_cast<double>(k) * dt;
    out.times(k) = t;
    out.states.col(k) = x;
    out.inputs.col(k) = k == 0 ? u0 : input(t);
    if (k + 1 == s)
    {
      break;
    }
    const Vector u_mid = input(t + 0.5 * dt);
    const Vector k1 = rhs(t, x, out.inputs.col(k));
    const Vector k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1, u_mid);
    const Vector k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2, u_mid);
    const Vector k4 = rhs(t + dt, x + dt * k3, input(t + dt));
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check(x, t + dt);
  }
  return out;
}

SnapshotSet collect_swing_snapshots(const SwingNetwork &net, const SwingState &x0, TimeSpan span,
                                    double dt, const InputSignal &input)
{
  require(x0.angles.size() == net.size() && x0.velocities.size() == net.size(),
          "collect_swing_snapshots: initial state does not match network");
  require(input(span.start).size() == 1, "collect_swing_snapshots: swing input must be scalar");
  VectorField field = [&net](double, const Vector &z, const Vector &u) {
    return swing_rhs(net, z, u(0));
  };
  SnapshotSet snap = integrate(field, x0.stacked(), span, dt, input);
  snap.outputs = net.output_weights() * snap.states.topRows(net.size());
  return snap;
}

SnapshotSet lift_snapshots(const SnapshotSet &snap)
{
  require(snap.states.rows() % 2 == 0, "lift_snapshots: state row count " +
                                           std::to_string(snap.states.rows()) + " is odd");
  const Index n = snap.states.rows() / 2;
  SnapshotSet lifted;
  lifted.times = snap.times;
  lifted.inputs = snap.inputs;
  lifted.outputs = snap.outputs;
  lifted.states.resize(4 * n, snap.states.cols());
  lifted.states.topRows(2 * n) = snap.states;
  lifted.states.middleRows(2 * n, n) = snap.states.topRows(n).array().sin().matrix();
  lifted.states.bottomRows(n) = snap.states.topRows(n).array().cos().matrix();
  return lifted;
}

SnapshotSet derivative_snapshots(const SnapshotSet &snap, DerivativeScheme scheme)
{
  const Index s = snap.samples();
  require(s >= 2, "derivative_snapshots: need at least two samples, got " + std::to_string(s));
  snap.validate();
  const double dt = snap.step();
  const Matrix &x = snap.states;
  Matrix dx(x.rows(), s);
  if (scheme == DerivativeScheme::Forward)
  {
    dx.leftCols(s - 1) = (x.rightCols(s - 1) - x.leftCols(s - 1)) / dt;
    dx.col(s - 1) = (x.col(s - 1) - x.col(s - 2)) / dt;
  }
  else
  {
    dx.col(0) = (x.col(1) - x.col(0)) / dt;
    dx.col(s - 1) = (x.col(s - 1) - x.col(s - 2)) / dt;
    if (s > 2)
    {
      dx.middleCols(1, s - 2) = (x.rightCols(s - 2) - x.leftCols(s - 2)) / (2.0 * dt);
    }
  }
  SnapshotSet out = snap;
  out.derivatives = std::move(dx);
  return out;
}

SnapshotSet exact_derivative_snapshots(const SnapshotSet &snap, const VectorField &rhs)
{
  snap.validate();
  Matrix dx(snap.states.rows(), snap.samples());
  for (Index k = 0; k < snap.samples(); ++k)
  {
    dx.col(k) = rhs(snap.times(k), snap.states.col(k), snap.inputs.col(k));
  }
  SnapshotSet out = snap;
  out.derivatives = std::move(dx);
  return out;
}

}  // namespace liftlearn
