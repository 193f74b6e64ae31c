#ifndef LIFTLEARN_OPINF_HPP
#define LIFTLEARN_OPINF_HPP

#include <optional>
#include <string>

#include "liftlearn/common.hpp"

namespace liftlearn {

// Number of distinct quadratic monomials x_i x_j, i <= j, of an r-vector.
constexpr Index compact_size(Index r) { return r * (r + 1) / 2; }

// Position of x_i x_j (i <= j) in compact_kron(x): i-major, then j.
constexpr Index compact_index(Index i, Index j, Index r)
{
  return i * r - i * (i - 1) / 2 + (j - i);
}

// Full Kronecker square x (x) x; entry (i, j) sits at i * r + j.
Vector kron_square(const Vector &x);

// x (x~) x = (x_i x_j)_{i <= j}.
Vector compact_kron(const Vector &x);

// Column-wise compact Kronecker square of an r x S matrix.
Matrix compact_kron_columns(const Matrix &x);

// Expands the compact r x r(r+1)/2 operator into its symmetric r x r^2 form,
// splitting each cross-term coefficient evenly over the (i, j) and (j, i) slots.
Matrix expand_h(const Matrix &h_tilde);

// Inverse of expand_h on symmetric operators: folds (i, j) and (j, i) together.
// For a non-symmetric H this returns the compact form of its symmetrization.
Matrix compact_h(const Matrix &h_full);

//
// Reduced quadratic model dx_r/dt = A_r x_r + H_r (x_r (x) x_r) + B_r u,
// y_r = C_r x_r. `h_tilde_r` is canonical; `h_r` is always expand_h(h_tilde_r).
//
struct ReducedQuadraticModel
{
  Matrix a_r;
  Matrix h_r;
  Matrix h_tilde_r;
  Matrix b_r;
  Matrix c_r;
  std::string basis_ref;
  std::string source = "learned";
  double mu = 0.0;

  Index r() const { return a_r.rows(); }
  Index q() const { return b_r.cols(); }
  Index p() const { return c_r.rows(); }

  static ReducedQuadraticModel from_compact(Matrix a_r, Matrix h_tilde_r, Matrix b_r, Matrix c_r,
                                            std::string basis_ref = {},
                                            std::string source = "learned");

  void validate() const;
};

// min || coeff X - rhs ||_F^2 + mu ||X||_F^2 with coeff = [X_r^T  X~_r^T  U^T].
struct LeastSquaresProblem
{
  Matrix coeff;
  Matrix rhs;
  double mu = 0.0;
  Index r = 0;
  Index q = 0;

  Index unknowns() const { return r + compact_size(r) + q; }
};

LeastSquaresProblem assemble_problem(const Matrix &x_r, const Matrix &xdot_r, const Matrix &u,
                                     double mu);

struct OperatorSolution
{
  Matrix stacked;  // unknowns x r, rows = [A_r^T; H~_r^T; B_r^T]
  Matrix a_r;
  Matrix h_tilde_r;
  Matrix b_r;
  Index rank = 0;  // numerical rank of the data matrix (not of the regularized system)
  bool rank_deficient = false;
  std::optional<std::string> warning;
};

// Numerical rank with the max(m, n) * eps(sigma_1) threshold.
Index numerical_rank(const Matrix &m);

// Minimum-norm solution of [coeff; sqrt(mu) I] X = [rhs; 0] by a complete
// orthogonal decomposition, all r right-hand sides at once.
OperatorSolution solve(const LeastSquaresProblem &problem);

// Same minimizer computed as r independent problems, one per column of rhs.
OperatorSolution solve_columnwise(const LeastSquaresProblem &problem);

struct InferenceResult
{
  ReducedQuadraticModel model;
  Index rank = 0;
  Index unknowns = 0;
  Index samples = 0;
  bool rank_deficient = false;
  std::optional<std::string> warning;
};

// Assemble, solve, expand. C_r is not inferred; the caller supplies the
// projected output map.
InferenceResult infer(const Matrix &x_r, const Matrix &xdot_r, const Matrix &u, double mu,
                      const Matrix &c_r, std::string basis_ref = {});

}  // namespace liftlearn

#endif  // LIFTLEARN_OPINF_HPP
