#include "liftlearn/intrusive.hpp"

#include <vector>

namespace liftlearn {

ReducedQuadraticModel project_operators(const LiftedOperators &ops, const Matrix &test_basis,
                                        const Matrix &trial_basis, std::string basis_ref)
{
  const Index d = ops.state_dim();
  const Index r = trial_basis.cols();
  require(trial_basis.rows() == d && test_basis.rows() == d,
          "project_operators: bases have " + std::to_string(trial_basis.rows()) +
              " rows, lifted dimension is " + std::to_string(d));
  require(test_basis.cols() == r && r >= 1, "project_operators: test and trial bases differ in width");
  const Matrix biorth = test_basis.transpose() * trial_basis;
  require((biorth - Matrix::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-10,
          "project_operators: W^T V is not the identity");

  const Matrix &w = test_basis;
  const Matrix &v = trial_basis;

  std::vector<std::vector<const QuadraticTerm *>> by_row(static_cast<std::size_t>(d));
  for (const auto &t : ops.h.terms())
  {
    by_row[static_cast<std::size_t>(t.row)].push_back(&t);
  }

  Matrix h_r = Matrix::Zero(r, r * r);
  Vector g(r * r);
  for (Index row = 0; row < d; ++row)
  {
    const auto &terms = by_row[static_cast<std::size_t>(row)];
    if (terms.empty())
    {
      continue;
    }
    // g(k r + l) = sum_terms h V(first, k) V(second, l)
    g.setZero();
    for (const QuadraticTerm *t : terms)
    {
      for (Index k = 0; k < r; ++k)
      {
        g.segment(k * r, r) += (t->value * v(t->first, k)) * v.row(t->second).transpose();
      }
    }
    h_r.noalias() += w.row(row).transpose() * g.transpose();
  }

  ReducedQuadraticModel model = ReducedQuadraticModel::from_compact(
      w.transpose() * ops.a * v, compact_h(h_r), w.transpose() * ops.b, ops.c * v,
      std::move(basis_ref), "intrusive");
  return model;
}

ReducedQuadraticModel galerkin_reduce(const LiftedOperators &ops, const PodBasis &basis)
{
  return project_operators(ops, basis.basis, basis.basis, basis.id);
}

}  // namespace liftlearn
