#include "liftlearn/pod.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <sstream>

#include <Eigen/SVD>

namespace liftlearn {

namespace {

// FNV-1a over the raw bytes of the basis.
std::string basis_hash(const Matrix &basis)
{
  std::uint64_t h = 1469598103934665603ULL;
  const auto *bytes = reinterpret_cast<const unsigned char *>(basis.data());
  const std::size_t count = static_cast<std::size_t>(basis.size()) * sizeof(double);
  for (std::size_t i = 0; i < count; ++i)
  {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << "pod-d" << basis.rows() << "-r" << basis.cols() << "-" << std::hex << std::setw(16)
     << std::setfill('0') << h;
  return os.str();
}

}  // namespace

Index truncation_rank(const Vector &singular_values, double tol)
{
  require(singular_values.size() > 0, "truncation_rank: empty spectrum");
  const double lead = singular_values(0);
  for (Index k = 1; k < singular_values.size(); ++k)
  {
    if (singular_values(k) / lead < tol)
    {
      return k;
    }
  }
  return singular_values.size();
}

PodBasis compute_pod(const Matrix &snapshots, double tol, std::optional<Index> r_override)
{
  require(snapshots.size() > 0, "compute_pod: empty snapshot matrix");
  require(snapshots.allFinite(), "compute_pod: snapshot matrix contains non-finite entries");
  if (!r_override)
  {
    require(tol > 0.0 && tol < 1.0, "compute_pod: tolerance must lie in (0, 1)");
  }
  if (snapshots.cwiseAbs().maxCoeff() == 0.0)
  {
    throw DegenerateData("compute_pod: snapshot matrix is identically zero");
  }

  Eigen::BDCSVD<Matrix> svd(snapshots, Eigen::ComputeThinU);
  PodBasis pod;
  pod.singular_values = svd.singularValues();
  pod.tolerance = tol;
  pod.r = r_override ? *r_override : truncation_rank(pod.singular_values, tol);
  require(pod.r >= 1 && pod.r <= pod.singular_values.size(),
          "compute_pod: truncation index " + std::to_string(pod.r) + " outside [1, " +
              std::to_string(pod.singular_values.size()) + "]");

  pod.basis = svd.matrixU().leftCols(pod.r);
  for (Index j = 0; j < pod.r; ++j)
  {
    Index imax = 0;
    pod.basis.col(j).cwiseAbs().maxCoeff(&imax);
    if (pod.basis(imax, j) < 0.0)
    {
      pod.basis.col(j) *= -1.0;
    }
  }
  pod.id = basis_hash(pod.basis);
  return pod;
}

PodBasis truncate(const PodBasis &basis, Index r)
{
  require(r >= 1 && r <= basis.r, "truncate: r = " + std::to_string(r) + " outside [1, " +
                                      std::to_string(basis.r) + "]");
  PodBasis out = basis;
  out.basis = basis.basis.leftCols(r);
  out.r = r;
  out.id = basis_hash(out.basis);
  return out;
}

Matrix project(const PodBasis &basis, const Matrix &m)
{
  require(m.rows() == basis.full_dim(), "project: matrix has " + std::to_string(m.rows()) +
                                            " rows, basis has " + std::to_string(basis.full_dim()));
  return basis.basis.transpose() * m;
}

Vector project(const PodBasis &basis, const Vector &v)
{
  require(v.size() == basis.full_dim(), "project: vector length does not match basis");
  return basis.basis.transpose() * v;
}

Matrix reconstruct(const PodBasis &basis, const Matrix &reduced)
{
  require(reduced.rows() == basis.r, "reconstruct: reduced data has wrong row count");
  return basis.basis * reduced;
}

}  // namespace liftlearn
