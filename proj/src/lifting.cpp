#include "liftlearn/lifting.hpp"

#include <cmath>
#include <utility>

namespace liftlearn {

LiftedState::LiftedState(Vector values) : values_(std::move(values))
{
  require(values_.size() > 0 && values_.size() % 4 == 0,
          "LiftedState: length " + std::to_string(values_.size()) + " is not a positive multiple of 4");
}

SparseQuadraticOperator::SparseQuadraticOperator(Index rows, Index state_dim)
    : rows_(rows), state_dim_(state_dim)
{
  require(rows >= 0 && state_dim >= 0, "SparseQuadraticOperator: negative dimension");
}

void SparseQuadraticOperator::add(Index row, Index first, Index second, double value)
{
  require(row >= 0 && row < rows_ && first >= 0 && first < state_dim_ && second >= 0 &&
              second < state_dim_,
          "SparseQuadraticOperator::add: index out of range");
  if (value != 0.0)
  {
    terms_.push_back({row, first, second, value});
  }
}

Vector SparseQuadraticOperator::apply(const Vector &x) const
{
  require(x.size() == state_dim_, "SparseQuadraticOperator::apply: vector has length " +
                                      std::to_string(x.size()) + ", expected " +
                                      std::to_string(state_dim_));
  Vector out = Vector::Zero(rows_);
  for (const auto &t : terms_)
  {
    out(t.row) += t.value * x(t.first) * x(t.second);
  }
  return out;
}

Matrix SparseQuadraticOperator::dense() const
{
  Matrix h = Matrix::Zero(rows_, state_dim_ * state_dim_);
  for (const auto &t : terms_)
  {
    h(t.row, t.first * state_dim_ + t.second) += t.value;
  }
  return h;
}

LiftedState lift_state(const Vector &delta, const Vector &delta_dot)
{
  require(delta.size() == delta_dot.size(), "lift_state: delta has length " +
                                                std::to_string(delta.size()) + " but delta_dot has " +
                                                std::to_string(delta_dot.size()));
  const Index n = delta.size();
  Vector x(4 * n);
  x << delta, delta_dot, delta.array().sin().matrix(), delta.array().cos().matrix();
  return LiftedState(std::move(x));
}

LiftedState lift_state(const SwingState &state)
{
  return lift_state(state.angles, state.velocities);
}

LiftedOperators assemble_lifted_operators(const SwingNetwork &net)
{
  const Index n = net.size();
  const Index d = 4 * n;
  const Index vel = n, sin0 = 2 * n, cos0 = 3 * n;

  LiftedOperators ops;
  ops.a = Matrix::Zero(d, d);
  ops.a.block(0, vel, n, n).setIdentity();
  ops.a.block(vel, vel, n, n).diagonal() = -net.damping_diagonal().cwiseQuotient(net.mass_diagonal());

  ops.b = Vector::Zero(d);
  ops.b.segment(vel, n) = net.power().cwiseQuotient(net.mass_diagonal());

  ops.c = Matrix::Zero(net.outputs(), d);
  ops.c.leftCols(n) = net.output_weights();

  ops.h = SparseQuadraticOperator(d, d);
  const Matrix &k = net.coupling();
  const Matrix &gamma = net.phase_shift();
  for (Index i = 0; i < n; ++i)
  {
    const double w = net.omega_r() / (2.0 * net.inertia()(i));
    for (Index j = 0; j < n; ++j)
    {
      if (j == i || k(i, j) == 0.0)
      {
        continue;
      }
      const double alpha = k(i, j) * std::sin(gamma(i, j));
      const double beta = k(i, j) * std::cos(gamma(i, j));
      ops.h.add(vel + i, sin0 + i, sin0 + j, w * alpha);
      ops.h.add(vel + i, sin0 + i, cos0 + j, -w * beta);
      ops.h.add(vel + i, cos0 + i, sin0 + j, w * beta);
      ops.h.add(vel + i, cos0 + i, cos0 + j, w * alpha);
    }
  }
  for (Index i = 0; i < n; ++i)
  {
    ops.h.add(sin0 + i, cos0 + i, vel + i, 1.0);
    ops.h.add(cos0 + i, sin0 + i, vel + i, -1.0);
  }
  return ops;
}

Vector lifted_rhs(const LiftedOperators &ops, const Vector &x, double u)
{
  require(x.size() == ops.state_dim(), "lifted_rhs: state has length " + std::to_string(x.size()) +
                                           ", expected " + std::to_string(ops.state_dim()));
  Vector dx = ops.a * x + ops.h.apply(x);
  dx += ops.b * u;
  return dx;
}

Vector lifted_rhs(const LiftedOperators &ops, const LiftedState &x, double u)
{
  return lifted_rhs(ops, x.values(), u);
}

Vector lifted_chain_rule_derivative(const SwingNetwork &net, const SwingState &state, double u)
{
  const Index n = net.size();
  const Vector dz = swing_rhs(net, state, u);
  Vector dx(4 * n);
  dx << dz.head(n), dz.tail(n),
      state.angles.array().cos().matrix().cwiseProduct(state.velocities),
      -state.angles.array().sin().matrix().cwiseProduct(state.velocities);
  return dx;
}

}  // namespace liftlearn
