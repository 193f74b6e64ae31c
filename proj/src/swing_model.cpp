#include "liftlearn/swing_model.hpp"

#include <cmath>
#include <utility>

namespace liftlearn {

SwingNetwork::SwingNetwork(SwingParameters params) : p_(std::move(params))
{
  const Index n = p_.inertia.size();
  require(n > 0, "SwingNetwork: network must have at least one oscillator");
  require(std::isfinite(p_.omega_r) && p_.omega_r > 0.0, "SwingNetwork: omega_r must be positive");
  require(p_.damping.size() == n, "SwingNetwork: damping has " + std::to_string(p_.damping.size()) +
                                      " entries, expected " + std::to_string(n));
  require(p_.power.size() == n, "SwingNetwork: power has " + std::to_string(p_.power.size()) +
                                    " entries, expected " + std::to_string(n));
  require(p_.coupling.rows() == n && p_.coupling.cols() == n,
          "SwingNetwork: coupling is " + dims(p_.coupling.rows(), p_.coupling.cols()) +
              ", expected " + dims(n, n));
  require(p_.phase_shift.rows() == n && p_.phase_shift.cols() == n,
          "SwingNetwork: phase_shift is " + dims(p_.phase_shift.rows(), p_.phase_shift.cols()) +
              ", expected " + dims(n, n));
  require(p_.output_weights.rows() >= 1 && p_.output_weights.cols() == n,
          "SwingNetwork: output_weights is " +
              dims(p_.output_weights.rows(), p_.output_weights.cols()) + ", expected px" +
              std::to_string(n));
  for (Index i = 0; i < n; ++i)
  {
    require(std::isfinite(p_.inertia(i)) && p_.inertia(i) > 0.0,
            "SwingNetwork: inertia[" + std::to_string(i) + "] must be positive");
    require(std::isfinite(p_.damping(i)) && p_.damping(i) >= 0.0,
            "SwingNetwork: damping[" + std::to_string(i) + "] must be non-negative");
    require(std::isfinite(p_.power(i)), "SwingNetwork: power[" + std::to_string(i) + "] not finite");
    require(p_.coupling(i, i) == 0.0,
            "SwingNetwork: coupling[" + std::to_string(i) + "][" + std::to_string(i) + "] must be zero");
    for (Index j = 0; j < n; ++j)
    {
      require(std::isfinite(p_.coupling(i, j)) && p_.coupling(i, j) >= 0.0,
              "SwingNetwork: coupling[" + std::to_string(i) + "][" + std::to_string(j) +
                  "] must be non-negative");
      require(std::isfinite(p_.phase_shift(i, j)),
              "SwingNetwork: phase_shift[" + std::to_string(i) + "][" + std::to_string(j) +
                  "] not finite");
    }
  }
  require(p_.output_weights.allFinite(), "SwingNetwork: output_weights not finite");
}

Vector SwingState::stacked() const
{
  require(angles.size() == velocities.size(), "SwingState: angle/velocity length mismatch");
  Vector z(2 * angles.size());
  z << angles, velocities;
  return z;
}

SwingState SwingState::from_stacked(const Vector &z)
{
  require(z.size() % 2 == 0, "SwingState: stacked state must have even length");
  const Index n = z.size() / 2;
  return {z.head(n), z.tail(n)};
}

Vector coupling_force(const SwingNetwork &net, const Vector &angles)
{
  const Index n = net.size();
  require(angles.size() == n, "coupling_force: angles has length " + std::to_string(angles.size()) +
                                  ", expected " + std::to_string(n));
  const Matrix &k = net.coupling();
  const Matrix &gamma = net.phase_shift();
  Vector f = Vector::Zero(n);
  for (Index j = 0; j < n; ++j)
  {
    for (Index i = 0; i < n; ++i)
    {
      if (i != j && k(i, j) != 0.0)
      {
        f(i) += k(i, j) * std::sin(angles(i) - angles(j) - gamma(i, j));
      }
    }
  }
  return f;
}

Vector swing_rhs(const SwingNetwork &net, const SwingState &state, double u)
{
  const Index n = net.size();
  require(state.angles.size() == n && state.velocities.size() == n,
          "swing_rhs: state dimensions do not match network of size " + std::to_string(n));
  Vector dz(2 * n);
  dz.head(n) = state.velocities;
  const Vector force = net.power() * u - net.damping_diagonal().cwiseProduct(state.velocities) -
                       coupling_force(net, state.angles);
  dz.tail(n) = force.cwiseQuotient(net.mass_diagonal());
  return dz;
}

Vector swing_rhs(const SwingNetwork &net, const Vector &stacked_state, double u)
{
  require(stacked_state.size() == 2 * net.size(),
          "swing_rhs: stacked state has length " + std::to_string(stacked_state.size()) +
              ", expected " + std::to_string(2 * net.size()));
  return swing_rhs(net, SwingState::from_stacked(stacked_state), u);
}

Vector swing_output(const SwingNetwork &net, const Vector &angles)
{
  require(angles.size() == net.size(), "swing_output: angle vector has wrong length");
  return net.output_weights() * angles;
}

Vector swing_output(const SwingNetwork &net, const SwingState &state)
{
  return swing_output(net, state.angles);
}

Matrix mean_output_row(Index n)
{
  require(n > 0, "mean_output_row: n must be positive");
  return Matrix::Constant(1, n, 1.0 / static_cast<double>(n));
}

}  // namespace liftlearn
