#include "doctest.h"
#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include "liftlearn/pod.hpp"

using namespace liftlearn;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  return Matrix::NullaryExpr(rows, cols, [&](Index, Index) { return g(rng); });
}

// Matrix with prescribed singular values through random orthogonal factors.
Matrix with_spectrum(const Vector &sigma, Index rows, Index cols, std::uint64_t seed)
{
  const Matrix qa = Eigen::HouseholderQR<Matrix>(random_matrix(rows, rows, seed)).householderQ();
  const Matrix qb = Eigen::HouseholderQR<Matrix>(random_matrix(cols, cols, seed + 1)).householderQ();
  Matrix s = Matrix::Zero(rows, cols);
  s.diagonal().head(sigma.size()) = sigma;
  return qa * s * qb.transpose();
}

}  // namespace

TEST_CASE("POD basis is orthonormal and satisfies the tail identity")
{
  for (std::uint64_t seed : {1u, 2u, 3u})
  {
    const Matrix x = random_matrix(100, 500, seed);
    for (Index r : {1, 10, 50, 100})
    {
      const PodBasis pod = compute_pod(x, 0.5, r);
      const Matrix gram = pod.basis.transpose() * pod.basis;
      CHECK((gram - Matrix::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-12);

      // Squared singular values from the symmetric eigenproblem of X X^T.
      Eigen::SelfAdjointEigenSolver<Matrix> eig(x * x.transpose());
      const Vector lambda = eig.eigenvalues().reverse();
      const double tail = lambda.tail(100 - r).sum();
      const double residual = (x - pod.basis * (pod.basis.transpose() * x)).squaredNorm();
      CHECK(std::abs(residual - tail) <= 1e-10 * x.squaredNorm());
      CHECK(oracle::max_rel(pod.singular_values.array().square().matrix(), lambda) < 1e-12);
    }
  }
}

TEST_CASE("truncation rank is the first sigma ratio below the tolerance")
{
  Vector sigma(5);
  sigma << 10.0, 1.0, 0.1, 0.01, 0.001;
  CHECK(truncation_rank(sigma, 0.5) == 1);
  CHECK(truncation_rank(sigma, 0.05) == 2);
  CHECK(truncation_rank(sigma, 0.01) == 3);  // sigma_3 / sigma_1 = 0.01 is not below 0.01
  CHECK(truncation_rank(sigma, 1e-3) == 4);
  CHECK(truncation_rank(sigma, 1e-5) == 5);

  const Matrix x = with_spectrum(sigma, 8, 12, 4);
  const PodBasis pod = compute_pod(x, 0.05);
  CHECK(pod.r == 2);
  CHECK(pod.tolerance == 0.05);
  CHECK(pod.singular_values.size() == 8);
  CHECK(oracle::max_rel(pod.singular_values.head(5), sigma) < 1e-13);
}

TEST_CASE("larger r never increases the reconstruction error")
{
  const Matrix x = random_matrix(30, 60, 9);
  double previous = std::numeric_limits<double>::infinity();
  for (Index r = 1; r <= 30; ++r)
  {
    const PodBasis pod = compute_pod(x, 0.5, r);
    const double err = (x - reconstruct(pod, project(pod, x))).norm();
    CHECK(err <= previous + 1e-12);
    previous = err;
  }
  CHECK(previous < 1e-10 * x.norm());
}

TEST_CASE("POD columns are sign-normalized and the basis is reproducible")
{
  const Matrix x = random_matrix(20, 40, 5);
  const PodBasis a = compute_pod(x, 1e-3);
  const PodBasis b = compute_pod(x, 1e-3);
  CHECK(a.basis == b.basis);
  CHECK(a.id == b.id);
  for (Index j = 0; j < a.r; ++j)
  {
    Index imax = 0;
    a.basis.col(j).cwiseAbs().maxCoeff(&imax);
    CHECK(a.basis(imax, j) > 0.0);
  }
  // Flipping snapshot signs flips U and V together; the normalized basis is unchanged.
  const PodBasis c = compute_pod(-x, 1e-3);
  CHECK((c.basis - a.basis).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(compute_pod(x, 1e-3, 3).id != a.id);
}

TEST_CASE("truncating a basis keeps its leading columns")
{
  const PodBasis pod = compute_pod(random_matrix(10, 30, 6), 1e-6, 8);
  const PodBasis small = truncate(pod, 3);
  CHECK(small.r == 3);
  CHECK(small.basis == pod.basis.leftCols(3));
  CHECK(small.singular_values == pod.singular_values);
  CHECK(small.id != pod.id);
  CHECK_THROWS_AS(truncate(pod, 9), ContractViolation);
  CHECK_THROWS_AS(truncate(pod, 0), ContractViolation);
}

TEST_CASE("POD rejects degenerate input")
{
  CHECK_THROWS_AS(compute_pod(Matrix::Zero(5, 10), 1e-3), DegenerateData);
  CHECK_THROWS_AS(compute_pod(Matrix(), 1e-3), ContractViolation);
  CHECK_THROWS_AS(compute_pod(random_matrix(5, 10, 1), 0.0), ContractViolation);
  CHECK_THROWS_AS(compute_pod(random_matrix(5, 10, 1), 1e-3, 6), ContractViolation);
  Matrix nan = random_matrix(5, 10, 1);
  nan(2, 3) = std::nan("");
  CHECK_THROWS_AS(compute_pod(nan, 1e-3), ContractViolation);
  const PodBasis pod = compute_pod(random_matrix(5, 10, 1), 1e-3);
  CHECK_THROWS_AS(project(pod, Matrix(Matrix::Zero(4, 2))), ContractViolation);
}
