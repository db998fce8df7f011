#pragma once

// Dense helpers shared by the geometric modules. Everything here works in
// Euclidean coordinates; metric-aware wrappers live next to LieAlgebra.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace clifford::linalg {

/// Rank threshold used for every kernel/image split: singular values below
/// rel_tol * sigma_max count as zero.
inline constexpr double kRankTolerance = 1e-9;

inline double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

/// Orthonormal basis (columns) of the null space of m.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol = kRankTolerance) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || n == 0) return Eigen::MatrixXd::Identity(n, n);
  // Thin SVD of a wide matrix would drop null directions, so pad to square.
  Eigen::MatrixXd padded = m;
  if (m.rows() < n) {
    padded = Eigen::MatrixXd::Zero(n, n);
    padded.topRows(m.rows()) = m;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(padded, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * smax && smax > 0.0) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

/// Orthonormal basis (columns) of the column space of m.
inline Eigen::MatrixXd column_space(const Eigen::MatrixXd& m, double rel_tol = kRankTolerance) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * smax && smax > 0.0) ++rank;
  return svd.matrixU().leftCols(rank);
}

inline Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double rel_tol = kRankTolerance) {
  return column_space(m, rel_tol).cols();
}

/// Modified Gram-Schmidt with one re-orthogonalisation pass. Columns whose
/// residual drops below drop_tol times their original norm are discarded.
inline Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m, double drop_tol = 1e-9) {
  std::vector<Eigen::VectorXd> kept;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::VectorXd v = m.col(j);
    const double n0 = v.norm();
    if (n0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : kept) v -= q.dot(v) * q;
    const double n1 = v.norm();
    if (n1 > drop_tol * n0) kept.push_back(v / n1);
  }
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = kept[j];
  return out;
}

/// Block decomposition of a real skew-symmetric matrix into invariant
/// rotation planes. For plane k with basis (u_k, v_k): M u = theta v and
/// M v = -theta u, theta > 0. Remaining columns span the kernel.
struct SkewBlocks {
  Eigen::MatrixXd basis;  // [u_1 v_1 u_2 v_2 ... kernel...], orthogonal
  std::vector<double> angles;
  Eigen::Index kernel_dim = 0;
  double residual = 0.0;  // ||Q T Q^T - M||_F / max(1, ||M||_F)

  Eigen::Index plane_count() const { return static_cast<Eigen::Index>(angles.size()); }
  auto u(Eigen::Index k) const { return basis.col(2 * k); }
  auto v(Eigen::Index k) const { return basis.col(2 * k + 1); }
  auto kernel() const { return basis.rightCols(kernel_dim); }

  Eigen::MatrixXd block_form() const {
    const Eigen::Index n = basis.cols();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < plane_count(); ++k) {
      t(2 * k + 1, 2 * k) = angles[static_cast<std::size_t>(k)];
      t(2 * k, 2 * k + 1) = -angles[static_cast<std::size_t>(k)];
    }
    return t;
  }
};

inline SkewBlocks skew_blocks(const Eigen::MatrixXd& m, double kernel_tol = kRankTolerance) {
  const Eigen::Index n = m.rows();
  SkewBlocks out;
  if (n == 0) {
    out.basis = Eigen::MatrixXd(0, 0);
    return out;
  }
  const Eigen::MatrixXd skew = 0.5 * (m - m.transpose());
  Eigen::RealSchur<Eigen::MatrixXd> schur(skew);
  const Eigen::MatrixXd& t = schur.matrixT();
  const Eigen::MatrixXd& q = schur.matrixU();
  const double scale = std::max(skew.norm(), std::numeric_limits<double>::min());

  struct Plane {
    double theta;
    Eigen::VectorXd u, v;
  };
  std::vector<Plane> planes;
  std::vector<Eigen::VectorXd> kernel;
  Eigen::Index i = 0;
  while (i < n) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      const double b = t(i, i + 1), c = t(i + 1, i);
      const double theta = 0.5 * (std::abs(b) + std::abs(c));
      if (theta > kernel_tol * scale) {
        Eigen::VectorXd v = q.col(i + 1);
        if (c < 0.0) v = -v;
        planes.push_back({theta, q.col(i), v});
      } else {
        kernel.push_back(q.col(i));
        kernel.push_back(q.col(i + 1));
      }
      i += 2;
    } else {
      kernel.push_back(q.col(i));
      i += 1;
    }
  }
  std::stable_sort(planes.begin(), planes.end(),
                   [](const Plane& a, const Plane& b) { return a.theta > b.theta; });

  out.basis.resize(n, n);
  Eigen::Index col = 0;
  for (const auto& p : planes) {
    out.angles.push_back(p.theta);
    out.basis.col(col++) = p.u;
    out.basis.col(col++) = p.v;
  }
  for (const auto& k : kernel) out.basis.col(col++) = k;
  out.kernel_dim = static_cast<Eigen::Index>(kernel.size());
  out.residual = (out.basis * out.block_form() * out.basis.transpose() - skew).norm() /
                 std::max(1.0, skew.norm());
  return out;
}

/// Pfaffian of a real skew-symmetric matrix by congruence elimination with
/// pivoting.
inline double pfaffian(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  if (n % 2 != 0) return 0.0;
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index piv = k + 1;
    for (Eigen::Index j = k + 2; j < n; ++j)
      if (std::abs(a(k, j)) > std::abs(a(k, piv))) piv = j;
    if (piv != k + 1) {
      a.row(k + 1).swap(a.row(piv));
      a.col(k + 1).swap(a.col(piv));
      pf = -pf;
    }
    const double pivot = a(k, k + 1);
    if (pivot == 0.0) return 0.0;
    pf *= pivot;
    const Eigen::Index rest = n - k - 2;
    if (rest == 0) break;
    const Eigen::VectorXd tau = a.row(k).tail(rest).transpose() / pivot;
    const Eigen::VectorXd row1 = a.row(k + 1).tail(rest).transpose();
    const Eigen::VectorXd col1 = a.col(k + 1).tail(rest);
    a.bottomRightCorner(rest, rest) -= col1 * tau.transpose() + tau * row1.transpose();
  }
  return pf;
}

}  // namespace clifford::linalg
