#include "liftlearn/opinf.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace liftlearn {

namespace {

Index rank_from_compact_size(Index cols)
{
  // Solve r (r + 1) / 2 = cols.
  const auto r = static_cast<Index>(std::llround((std::sqrt(8.0 * cols + 1.0) - 1.0) / 2.0));
  require(compact_size(r) == cols,
          "compact operator has " + std::to_string(cols) + " columns, not of the form r(r+1)/2");
  return r;
}

Matrix stacked_system(const LeastSquaresProblem &problem)
{
  const Index m = problem.unknowns();
  if (problem.mu == 0.0)
  {
    return problem.coeff;
  }
  Matrix stacked(problem.coeff.rows() + m, m);
  stacked.topRows(problem.coeff.rows()) = problem.coeff;
  stacked.bottomRows(m) = std::sqrt(problem.mu) * Matrix::Identity(m, m);
  return stacked;
}

Matrix stacked_rhs(const LeastSquaresProblem &problem, const Matrix &rhs)
{
  if (problem.mu == 0.0)
  {
    return rhs;
  }
  Matrix out = Matrix::Zero(problem.coeff.rows() + problem.unknowns(), rhs.cols());
  out.topRows(problem.coeff.rows()) = rhs;
  return out;
}

void check_problem(const LeastSquaresProblem &problem)
{
  require(problem.mu >= 0.0 && std::isfinite(problem.mu), "solve: mu must be non-negative");
  require(problem.coeff.cols() == problem.unknowns(),
          "solve: coefficient matrix has " + std::to_string(problem.coeff.cols()) +
              " columns, expected " + std::to_string(problem.unknowns()));
  require(problem.rhs.rows() == problem.coeff.rows() && problem.rhs.cols() == problem.r,
          "solve: right-hand side is " + dims(problem.rhs.rows(), problem.rhs.cols()) +
              ", expected " + dims(problem.coeff.rows(), problem.r));
}

OperatorSolution unstack(const LeastSquaresProblem &problem, Matrix stacked)
{
  const Index r = problem.r;
  const Index k = compact_size(r);
  OperatorSolution sol;
  sol.a_r = stacked.topRows(r).transpose();
  sol.h_tilde_r = stacked.middleRows(r, k).transpose();
  sol.b_r = stacked.bottomRows(problem.q).transpose();
  sol.stacked = std::move(stacked);
  sol.rank = numerical_rank(problem.coeff);
  sol.rank_deficient = sol.rank < problem.unknowns();
  if (sol.rank_deficient && problem.mu == 0.0)
  {
    sol.warning = "data matrix is rank deficient (rank " + std::to_string(sol.rank) + " < " +
                  std::to_string(problem.unknowns()) +
                  "); returning the minimum-norm solution";
  }
  return sol;
}

}  // namespace

Vector kron_square(const Vector &x)
{
  const Index r = x.size();
  Vector out(r * r);
  for (Index i = 0; i < r; ++i)
  {
    out.segment(i * r, r) = x(i) * x;
  }
  return out;
}

Vector compact_kron(const Vector &x)
{
  const Index r = x.size();
  Vector out(compact_size(r));
  Index pos = 0;
  for (Index i = 0; i < r; ++i)
  {
    for (Index j = i; j < r; ++j)
    {
      out(pos++) = x(i) * x(j);
    }
  }
  return out;
}

Matrix compact_kron_columns(const Matrix &x)
{
  const Index r = x.rows();
  Matrix out(compact_size(r), x.cols());
  Index pos = 0;
  for (Index i = 0; i < r; ++i)
  {
    for (Index j = i; j < r; ++j)
    {
      out.row(pos++) = x.row(i).cwiseProduct(x.row(j));
    }
  }
  return out;
}

Matrix expand_h(const Matrix &h_tilde)
{
  const Index r = rank_from_compact_size(h_tilde.cols());
  Matrix h = Matrix::Zero(h_tilde.rows(), r * r);
  for (Index i = 0; i < r; ++i)
  {
    h.col(i * r + i) = h_tilde.col(compact_index(i, i, r));
    for (Index j = i + 1; j < r; ++j)
    {
      const Vector half = 0.5 * h_tilde.col(compact_index(i, j, r));
      h.col(i * r + j) = half;
      h.col(j * r + i) = half;
    }
  }
  return h;
}

Matrix compact_h(const Matrix &h_full)
{
  const auto r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(h_full.cols()))));
  require(r * r == h_full.cols(), "compact_h: column count is not a perfect square");
  Matrix h = Matrix::Zero(h_full.rows(), compact_size(r));
  for (Index i = 0; i < r; ++i)
  {
    h.col(compact_index(i, i, r)) = h_full.col(i * r + i);
    for (Index j = i + 1; j < r; ++j)
    {
      h.col(compact_index(i, j, r)) = h_full.col(i * r + j) + h_full.col(j * r + i);
    }
  }
  return h;
}

ReducedQuadraticModel ReducedQuadraticModel::from_compact(Matrix a_r, Matrix h_tilde_r, Matrix b_r,
                                                          Matrix c_r, std::string basis_ref,
                                                          std::string source)
{
  ReducedQuadraticModel m;
  m.a_r = std::move(a_r);
  m.h_tilde_r = std::move(h_tilde_r);
  m.h_r = expand_h(m.h_tilde_r);
  m.b_r = std::move(b_r);
  m.c_r = std::move(c_r);
  m.basis_ref = std::move(basis_ref);
  m.source = std::move(source);
  m.validate();
  return m;
}

void ReducedQuadraticModel::validate() const
{
  const Index r = a_r.rows();
  require(r >= 1 && a_r.cols() == r, "ReducedQuadraticModel: A_r must be square and non-empty");
  require(h_tilde_r.rows() == r && h_tilde_r.cols() == compact_size(r),
          "ReducedQuadraticModel: H~_r is " + dims(h_tilde_r.rows(), h_tilde_r.cols()) +
              ", expected " + dims(r, compact_size(r)));
  require(h_r.rows() == r && h_r.cols() == r * r, "ReducedQuadraticModel: H_r has wrong shape");
  require(b_r.rows() == r, "ReducedQuadraticModel: B_r has wrong row count");
  require(c_r.cols() == r, "ReducedQuadraticModel: C_r has wrong column count");
}

LeastSquaresProblem assemble_problem(const Matrix &x_r, const Matrix &xdot_r, const Matrix &u,
                                     double mu)
{
  const Index r = x_r.rows();
  const Index s = x_r.cols();
  require(r >= 1, "assemble_problem: reduced dimension must be at least 1");
  require(xdot_r.rows() == r && xdot_r.cols() == s,
          "assemble_problem: derivative data is " + dims(xdot_r.rows(), xdot_r.cols()) +
              ", expected " + dims(r, s));
  require(u.cols() == s, "assemble_problem: input data has " + std::to_string(u.cols()) +
                             " samples, expected " + std::to_string(s));
  require(mu >= 0.0 && std::isfinite(mu), "assemble_problem: mu must be non-negative");
  require(x_r.allFinite() && xdot_r.allFinite() && u.allFinite(),
          "assemble_problem: data contains non-finite entries");

  LeastSquaresProblem p;
  p.r = r;
  p.q = u.rows();
  p.mu = mu;
  const Index k = compact_size(r);
  p.coeff.resize(s, p.unknowns());
  p.coeff.leftCols(r) = x_r.transpose();
  p.coeff.middleCols(r, k) = compact_kron_columns(x_r).transpose();
  p.coeff.rightCols(p.q) = u.transpose();
  p.rhs = xdot_r.transpose();
  return p;
}

Index numerical_rank(const Matrix &m)
{
  if (m.size() == 0)
  {
    return 0;
  }
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector &sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0)
  {
    return 0;
  }
  // eps(sigma_1) as in the usual rank convention: spacing of doubles at sigma_1.
  const double spacing = std::nextafter(sigma(0), std::numeric_limits<double>::infinity()) - sigma(0);
  const double threshold = static_cast<double>(std::max(m.rows(), m.cols())) * spacing;
  Index rank = 0;
  for (Index i = 0; i < sigma.size(); ++i)
  {
    if (sigma(i) > threshold)
    {
      ++rank;
    }
  }
  return rank;
}

OperatorSolution solve(const LeastSquaresProblem &problem)
{
  check_problem(problem);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(stacked_system(problem));
  Matrix x = cod.solve(stacked_rhs(problem, problem.rhs));
  return unstack(problem, std::move(x));
}

OperatorSolution solve_columnwise(const LeastSquaresProblem &problem)
{
  check_problem(problem);
  const Matrix system = stacked_system(problem);
  std::vector<std::future<Vector>> columns;
  columns.reserve(static_cast<std::size_t>(problem.r));
  for (Index i = 0; i < problem.r; ++i)
  {
    columns.push_back(std::async(std::launch::async, [&system, &problem, i] {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(system);
      return Vector(cod.solve(stacked_rhs(problem, problem.rhs.col(i))));
    }));
  }
  Matrix x(problem.unknowns(), problem.r);
  for (Index i = 0; i < problem.r; ++i)
  {
    x.col(i) = columns[static_cast<std::size_t>(i)].get();
  }
  return unstack(problem, std::move(x));
}

InferenceResult infer(const Matrix &x_r, const Matrix &xdot_r, const Matrix &u, double mu,
                      const Matrix &c_r, std::string basis_ref)
{
  require(c_r.cols() == x_r.rows(), "infer: output map has " + std::to_string(c_r.cols()) +
                                        " columns, expected " + std::to_string(x_r.rows()));
  const LeastSquaresProblem problem = assemble_problem(x_r, xdot_r, u, mu);
  OperatorSolution sol = solve(problem);

  InferenceResult result;
  result.model = ReducedQuadraticModel::from_compact(std::move(sol.a_r), std::move(sol.h_tilde_r),
                                                     std::move(sol.b_r), c_r, std::move(basis_ref),
                                                     "learned");
  result.model.mu = mu;
  result.rank = sol.rank;
  result.unknowns = problem.unknowns();
  result.samples = problem.coeff.rows();
  result.rank_deficient = sol.rank_deficient;
  result.warning = std::move(sol.warning);
  return result;
}

}  // namespace liftlearn
