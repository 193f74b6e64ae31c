#ifndef LIFTLEARN_SWING_MODEL_HPP
#define LIFTLEARN_SWING_MODEL_HPP

#include "liftlearn/common.hpp"

namespace liftlearn {

// Raw physical parameters of an n-oscillator network. Validated by SwingNetwork.
struct SwingParameters
{
  double omega_r = 0.0;   // reference angular frequency [rad/s]
  Vector inertia;         // J_i > 0
  Vector damping;         // D_i >= 0
  Vector power;           // B_i, the constant right-hand side per oscillator
  Matrix coupling;        // K_ij >= 0, zero diagonal
  Matrix phase_shift;     // gamma_ij [rad]
  Matrix output_weights;  // p x n
};

//
// Network of n coupled oscillators obeying the swing equations
//
//   (2 J_i / w_R) dd(delta_i) + (D_i / w_R) d(delta_i)
//       + sum_{j != i} K_ij sin(delta_i - delta_j - gamma_ij) = B_i u(t),
//
// with output y = C_s delta. Immutable after construction.
//
class SwingNetwork
{
public:
  explicit SwingNetwork(SwingParameters params);

  Index size() const { return p_.inertia.size(); }
  Index outputs() const { return p_.output_weights.rows(); }

  double omega_r() const { return p_.omega_r; }
  const Vector &inertia() const { return p_.inertia; }
  const Vector &damping() const { return p_.damping; }
  const Vector &power() const { return p_.power; }
  const Matrix &coupling() const { return p_.coupling; }
  const Matrix &phase_shift() const { return p_.phase_shift; }
  const Matrix &output_weights() const { return p_.output_weights; }
  const SwingParameters &parameters() const { return p_; }

  // Diagonals of M_s = diag(2 J_i / w_R) and D_s = diag(D_i / w_R).
  Vector mass_diagonal() const { return 2.0 * p_.inertia / p_.omega_r; }
  Vector damping_diagonal() const { return p_.damping / p_.omega_r; }

private:
  SwingParameters p_;
};

struct SwingState
{
  Vector angles;      // delta [rad]
  Vector velocities;  // d(delta)/dt [rad/s]

  // Stacked (delta; d(delta)/dt).
  Vector stacked() const;
  static SwingState from_stacked(const Vector &z);
};

// f_s(delta)_i = sum_{j != i} K_ij sin(delta_i - delta_j - gamma_ij).
Vector coupling_force(const SwingNetwork &net, const Vector &angles);

// First-order form: returns (d(delta), M_s^{-1} (B_s u - D_s d(delta) - f_s(delta))).
Vector swing_rhs(const SwingNetwork &net, const SwingState &state, double u);
Vector swing_rhs(const SwingNetwork &net, const Vector &stacked_state, double u);

// y = C_s delta.
Vector swing_output(const SwingNetwork &net, const SwingState &state);
Vector swing_output(const SwingNetwork &net, const Vector &angles);

// 1 x n row computing the arithmetic mean of all angles.
Matrix mean_output_row(Index n);

}  // namespace liftlearn

#endif  // LIFTLEARN_SWING_MODEL_HPP
