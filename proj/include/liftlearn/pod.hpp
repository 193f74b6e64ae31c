#ifndef LIFTLEARN_POD_HPP
#define LIFTLEARN_POD_HPP

#include <optional>
#include <string>

#include "liftlearn/common.hpp"

namespace liftlearn {

// Leading left singular vectors of a snapshot matrix. Right singular vectors
// are not kept.
struct PodBasis
{
  Matrix basis;            // d x r, orthonormal columns
  Vector singular_values;  // all min(d, S) values, non-increasing
  Index r = 0;
  double tolerance = 0.0;
  std::string id;          // content hash of the basis, used to tag models

  Index full_dim() const { return basis.rows(); }
};

// Smallest k with sigma_{k+1} / sigma_1 < tol; the number of singular values
// when no such k exists.
Index truncation_rank(const Vector &singular_values, double tol);

// Economy SVD of `snapshots` truncated by relative tolerance, or at
// `r_override` when given. Each basis column is sign-normalized so that its
// largest-magnitude entry is positive.
PodBasis compute_pod(const Matrix &snapshots, double tol, std::optional<Index> r_override = {});

// First r columns of an existing basis; spectrum and tolerance carry over.
PodBasis truncate(const PodBasis &basis, Index r);

// basis^T M.
Matrix project(const PodBasis &basis, const Matrix &m);
Vector project(const PodBasis &basis, const Vector &v);

// basis * M_r.
Matrix reconstruct(const PodBasis &basis, const Matrix &reduced);

}  // namespace liftlearn

#endif  // LIFTLEARN_POD_HPP
