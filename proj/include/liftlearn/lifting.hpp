#ifndef LIFTLEARN_LIFTING_HPP
#define LIFTLEARN_LIFTING_HPP

#include <vector>

#include "liftlearn/swing_model.hpp"

namespace liftlearn {

//
// Lifted coordinates x = (delta, d(delta), sin(delta), cos(delta)) in R^{4n}.
//
class LiftedState
{
public:
  explicit LiftedState(Vector values);

  const Vector &values() const { return values_; }
  Index oscillators() const { return values_.size() / 4; }

  auto angles() const { return values_.segment(0, oscillators()); }
  auto velocities() const { return values_.segment(oscillators(), oscillators()); }
  auto sines() const { return values_.segment(2 * oscillators(), oscillators()); }
  auto cosines() const { return values_.segment(3 * oscillators(), oscillators()); }

private:
  Vector values_;
};

// One coefficient h of the quadratic operator: contributes h * x[first] * x[second]
// to output row `row`. Its dense column index in x (x) x is first * dim + second.
struct QuadraticTerm
{
  Index row;
  Index first;
  Index second;
  double value;
};

//
// Quadratic operator H: R^{d} (x) R^{d} -> R^{rows} stored as a list of
// (row, first, second) terms. The dense rows x d^2 form is never built except
// by dense() for small test instances.
//
class SparseQuadraticOperator
{
public:
  SparseQuadraticOperator() = default;
  SparseQuadraticOperator(Index rows, Index state_dim);

  Index rows() const { return rows_; }
  Index state_dim() const { return state_dim_; }
  const std::vector<QuadraticTerm> &terms() const { return terms_; }
  std::size_t nonzeros() const { return terms_.size(); }

  void add(Index row, Index first, Index second, double value);

  // Mutable access for perturbation experiments.
  std::vector<QuadraticTerm> &terms() { return terms_; }

  // H (x (x) x), evaluated in O(nnz).
  Vector apply(const Vector &x) const;

  Matrix dense() const;

private:
  Index rows_ = 0;
  Index state_dim_ = 0;
  std::vector<QuadraticTerm> terms_;
};

// Exact quadratic form of the swing dynamics in lifted coordinates:
//   dx/dt = A x + H (x (x) x) + B u,   y = C x.
struct LiftedOperators
{
  Matrix a;
  SparseQuadraticOperator h;
  Vector b;
  Matrix c;

  Index state_dim() const { return a.rows(); }
};

LiftedState lift_state(const Vector &delta, const Vector &delta_dot);
LiftedState lift_state(const SwingState &state);

//
// Assembles A, H, B, C for the lifted swing network. Using
//
//   sin(d_i - d_j - g_ij) = (s_i c_j - c_i s_j) cos g_ij - (c_i c_j + s_i s_j) sin g_ij,
//
// row n+i of H (the velocity block) holds, with w_i = w_R / (2 J_i),
//
//   s_i s_j :  w_i K_ij sin g_ij     (alpha_ij)
//   s_i c_j : -w_i K_ij cos g_ij     (-beta_ij)
//   c_i s_j :  w_i K_ij cos g_ij     (beta_ij)
//   c_i c_j :  w_i K_ij sin g_ij     (alpha_ij)
//
// for every j != i, i.e. alpha_i and beta_i are the full rows (K_ij sin g_ij)_j and
// (K_ij cos g_ij)_j. The kinematic rows are d(s_i) = c_i v_i, stored at (c_i, v_i),
// and d(c_i) = -s_i v_i, stored at (s_i, v_i).
//
LiftedOperators assemble_lifted_operators(const SwingNetwork &net);

Vector lifted_rhs(const LiftedOperators &ops, const Vector &x, double u);
Vector lifted_rhs(const LiftedOperators &ops, const LiftedState &x, double u);

// Time derivative of the lifting map along the nonlinear flow:
// (d(delta), dd(delta), cos(delta) . d(delta), -sin(delta) . d(delta)).
Vector lifted_chain_rule_derivative(const SwingNetwork &net, const SwingState &state, double u);

}  // namespace liftlearn

#endif  // LIFTLEARN_LIFTING_HPP
