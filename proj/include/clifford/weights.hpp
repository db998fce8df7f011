#pragma once

// Joint real block diagonalisation of a commuting family ad(H_1..H_r):
// g = V_0 + V_1 + ... + V_k, where every H acts trivially on V_0 and on
// V_j = span{u_j, v_j} by ad(H)u = alpha_j(H) v, ad(H)v = -alpha_j(H) u.
// Grouping planes with equal weights up to sign yields the Clifford model.

#include "clifford/errors.hpp"
#include "clifford/lie_algebra.hpp"
#include "clifford/linalg.hpp"
#include "clifford/orbit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <vector>

namespace clifford {

struct WeightPlane {
  Element u, v;
  Eigen::RowVectorXd weight;  // alpha_j(H_i) on the basis of the commuting family
  double radius = 0.0;        // |projection of the reference point onto the plane|
  double ref_u = 0.0, ref_v = 0.0;  // reference point coordinates in (u, v)
};

struct WeightDecomposition {
  Frame torus_basis;  // the commuting family H_1..H_r (orthonormal)
  Frame v0_basis;
  std::vector<WeightPlane> planes;
  Element xi;  // reference point, zero when none
  double xi_norm = 0.0;
};

namespace detail {

struct JointCluster {
  Eigen::MatrixXd basis;  // euclidean, orthonormal, even number of columns
  Eigen::MatrixXd J;      // complex structure on the cluster, in its own basis
};

struct JointSplitter {
  const std::vector<Eigen::MatrixXd>& ops;  // euclidean skew operators
  double gap_tol;
  double joint_tol;
  Rng rng;
  int budget;
  std::vector<Eigen::MatrixXd> kernels;
  std::vector<JointCluster> clusters;

  double op_scale() const {
    double s = 0.0;
    for (const auto& o : ops) s = std::max(s, o.norm());
    return s;
  }

  bool invariant_and_scalar(const Eigen::MatrixXd& c, const Eigen::MatrixXd& j) const {
    const double scale = std::max(op_scale(), 1e-300);
    for (const auto& o : ops) {
      const Eigen::MatrixXd oc = o * c;
      const Eigen::MatrixXd b = c.transpose() * oc;
      if ((oc - c * b).norm() > joint_tol * scale) return false;
      if (j.size() == 0) {
        if (b.norm() > joint_tol * scale) return false;
      } else {
        const double beta = (b.array() * j.array()).sum() / (j.array() * j.array()).sum();
        if ((b - beta * j).norm() > joint_tol * scale) return false;
      }
    }
    return true;
  }

  void split(const Eigen::MatrixXd& w) {
    if (w.cols() == 0) return;
    if (budget-- <= 0)
      throw Error(ErrorCode::ClusteringAmbiguous, "joint decomposition did not separate");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(w.rows(), w.rows());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (const auto& o : ops) m += normal(rng) * o;
    const Eigen::MatrixXd mw = w.transpose() * m * w;
    const double scale = std::max(mw.norm(), 1e-300);
    const linalg::SkewBlocks blocks = linalg::skew_blocks(mw, gap_tol);

    const Eigen::MatrixXd kernel = w * blocks.kernel();
    if (kernel.cols() > 0) {
      if (invariant_and_scalar(kernel, Eigen::MatrixXd()))
        kernels.push_back(kernel);
      else
        split(kernel);
    }
    Eigen::Index k = 0;
    while (k < blocks.plane_count()) {
      Eigen::Index end = k + 1;
      while (end < blocks.plane_count() &&
             blocks.angles[static_cast<std::size_t>(end - 1)] -
                     blocks.angles[static_cast<std::size_t>(end)] <=
                 gap_tol * scale)
        ++end;
      const Eigen::MatrixXd c = w * blocks.basis.middleCols(2 * k, 2 * (end - k));
      Eigen::MatrixXd j = c.transpose() * m * c;
      double mean_theta = 0.0;
      for (Eigen::Index q = k; q < end; ++q) mean_theta += blocks.angles[static_cast<std::size_t>(q)];
      mean_theta /= static_cast<double>(end - k);
      j /= mean_theta;
      if (invariant_and_scalar(c, j))
        clusters.push_back({c, j});
      else
        split(c);
      k = end;
    }
  }
};

}  // namespace detail

/// Joint decomposition for the commuting frame `torus` (G-orthonormal).
/// When `reference` is nonzero, each cluster of equal weights is split so
/// that the reference point projects into a single plane of the cluster.
inline WeightDecomposition joint_weight_decomposition(const LieAlgebra& alg, const Frame& torus,
                                                      const Element& reference,
                                                      std::uint64_t seed,
                                                      double gap_tol = 1e-6,
                                                      int retries = 8) {
  std::vector<Eigen::MatrixXd> ops;
  ops.reserve(static_cast<std::size_t>(torus.cols()));
  for (Eigen::Index i = 0; i < torus.cols(); ++i)
    ops.push_back(alg.to_euclid_operator(alg.ad(torus.col(i))));

  detail::JointSplitter splitter{ops, gap_tol, 1e-8, Rng(seed), 0, {}, {}};
  // Each retry restarts from scratch with a fresh element sequence.
  bool ok = false;
  for (int attempt = 0; attempt < retries && !ok; ++attempt) {
    splitter.rng.seed(seed + 7919ULL * static_cast<std::uint64_t>(attempt));
    splitter.budget = 4 * static_cast<int>(alg.dim()) + 8;
    splitter.kernels.clear();
    splitter.clusters.clear();
    try {
      splitter.split(Eigen::MatrixXd::Identity(alg.dim(), alg.dim()));
      ok = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ClusteringAmbiguous) throw;
    }
  }
  if (!ok) throw Error(ErrorCode::ClusteringAmbiguous, "weight clusters not separated after retries");

  WeightDecomposition wd;
  wd.torus_basis = torus;
  wd.xi = reference;
  wd.xi_norm = alg.norm(reference);
  const Eigen::VectorXd ref_e = alg.to_euclid(reference);
  const double ref_norm = ref_e.norm();

  Eigen::Index v0_dim = 0;
  for (const auto& k : splitter.kernels) v0_dim += k.cols();
  Eigen::MatrixXd v0(alg.dim(), v0_dim);
  Eigen::Index col = 0;
  for (const auto& k : splitter.kernels) {
    v0.middleCols(col, k.cols()) = k;
    col += k.cols();
  }
  wd.v0_basis = alg.from_euclid(v0);

  for (const auto& cl : splitter.clusters) {
    const Eigen::MatrixXd jop = cl.basis * cl.J * cl.basis.transpose();
    const Eigen::Index planes = cl.basis.cols() / 2;
    std::vector<Eigen::VectorXd> used;
    std::vector<Eigen::VectorXd> seeds;
    const Eigen::VectorXd ref_part = cl.basis * (cl.basis.transpose() * ref_e);
    if (ref_norm > 0.0 && ref_part.norm() > 1e-9 * ref_norm) seeds.push_back(ref_part);
    for (Eigen::Index c = 0; c < cl.basis.cols(); ++c) seeds.push_back(cl.basis.col(c));
    for (const auto& s : seeds) {
      if (static_cast<Eigen::Index>(used.size()) == 2 * planes) break;
      Eigen::VectorXd u = s;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : used) u -= q.dot(u) * q;
      if (u.norm() <= 1e-6 * s.norm()) continue;
      u.normalize();
      Eigen::VectorXd v = jop * u;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : used) v -= q.dot(v) * q;
        v -= u.dot(v) * u;
      }
      v.normalize();
      used.push_back(u);
      used.push_back(v);
      WeightPlane p;
      p.u = alg.from_euclid(u);
      p.v = alg.from_euclid(v);
      p.weight.resize(torus.cols());
      for (Eigen::Index i = 0; i < torus.cols(); ++i)
        p.weight(i) = v.dot(ops[static_cast<std::size_t>(i)] * u);
      p.ref_u = u.dot(ref_e);
      p.ref_v = v.dot(ref_e);
      p.radius = std::hypot(p.ref_u, p.ref_v);
      wd.planes.push_back(std::move(p));
    }
  }
  return wd;
}

inline WeightDecomposition weight_decomposition(const LieAlgebra& alg, const AbelianSubspace& a,
                                                const Tripotent& t, std::uint64_t seed,
                                                double gap_tol = 1e-6) {
  return joint_weight_decomposition(alg, a.basis, t.xi, seed, gap_tol);
}

struct WeightResiduals {
  double action = 0.0;        // plane action of every H_i
  double orthogonality = 0.0;
  double reconstruction = 0.0;  // | |xi|^2 - (|xi_V0|^2 + sum r_j^2) |
};

inline WeightResiduals weight_residuals(const LieAlgebra& alg, const WeightDecomposition& wd) {
  WeightResiduals r;
  Frame all(alg.dim(), wd.v0_basis.cols() + 2 * static_cast<Eigen::Index>(wd.planes.size()));
  all.leftCols(wd.v0_basis.cols()) = wd.v0_basis;
  Eigen::Index col = wd.v0_basis.cols();
  for (const auto& p : wd.planes) {
    all.col(col++) = p.u;
    all.col(col++) = p.v;
    for (Eigen::Index i = 0; i < wd.torus_basis.cols(); ++i) {
      const Element h = wd.torus_basis.col(i);
      r.action = std::max(r.action, alg.norm(alg.bracket(h, p.u) - p.weight(i) * p.v));
      r.action = std::max(r.action, alg.norm(alg.bracket(h, p.v) + p.weight(i) * p.u));
    }
  }
  for (Eigen::Index i = 0; i < wd.v0_basis.cols(); ++i)
    for (Eigen::Index k = 0; k < wd.torus_basis.cols(); ++k)
      r.action = std::max(r.action, alg.norm(alg.bracket(wd.torus_basis.col(k), wd.v0_basis.col(i))));
  const Eigen::MatrixXd e = alg.to_euclid(all);
  r.orthogonality =
      (e.transpose() * e - Eigen::MatrixXd::Identity(all.cols(), all.cols())).cwiseAbs().maxCoeff();
  if (wd.xi.size() == alg.dim()) {
    double sum = alg.norm(alg.project(wd.v0_basis, wd.xi));
    sum *= sum;
    for (const auto& p : wd.planes) sum += p.radius * p.radius;
    r.reconstruction = std::abs(alg.inner(wd.xi, wd.xi) - sum);
  }
  return r;
}

/// One round circle of the minimal Clifford torus: t -> center + radius *
/// (cos(beta(H)) e1 + sin(beta(H)) e2) for the flow of H.
struct CliffordCircle {
  Eigen::RowVectorXd weight_class;  // first nonzero entry positive
  Element e1, e2;                   // orthonormal plane basis
  double radius = 0.0;
  std::vector<std::size_t> planes;  // indices into the decomposition
  std::vector<int> signs;           // plane weight = sign * weight_class
};

struct CliffordModel {
  std::vector<CliffordCircle> circles;
  Element center;
};

namespace detail {

inline int leading_sign(const Eigen::RowVectorXd& w, double tol) {
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (std::abs(w(i)) > tol) return w(i) > 0 ? 1 : -1;
  return 0;
}

}  // namespace detail

/// Groups synchronised planes (weights equal up to sign) into single circles
/// and drops planes with zero weight or zero radius.
inline CliffordModel clifford_reduction(const WeightDecomposition& wd, double rel_tol = 1e-6) {
  double wmax = 0.0, rmax = 0.0;
  for (const auto& p : wd.planes) {
    wmax = std::max(wmax, p.weight.norm());
    rmax = std::max(rmax, p.radius);
  }
  const double radius_floor = 1e-9 * std::max(wd.xi_norm, 1e-300);
  const double wtol = rel_tol * std::max(wmax, 1e-300);

  CliffordModel cm;
  for (std::size_t j = 0; j < wd.planes.size(); ++j) {
    const auto& p = wd.planes[j];
    if (p.weight.norm() <= wtol || p.radius <= radius_floor) continue;
    const int s = detail::leading_sign(p.weight, wtol);
    const Eigen::RowVectorXd rep = s * p.weight;
    auto it = std::find_if(cm.circles.begin(), cm.circles.end(), [&](const CliffordCircle& c) {
      return (c.weight_class - rep).norm() <= wtol;
    });
    if (it == cm.circles.end()) {
      cm.circles.push_back({rep, Element(), Element(), 0.0, {}, {}});
      it = std::prev(cm.circles.end());
    }
    it->planes.push_back(j);
    it->signs.push_back(s);
  }

  Element moving = Element::Zero(wd.xi.size());
  for (auto& c : cm.circles) {
    Element e1 = Element::Zero(wd.xi.size()), e2 = Element::Zero(wd.xi.size());
    double r2 = 0.0;
    for (std::size_t q = 0; q < c.planes.size(); ++q) {
      const auto& p = wd.planes[c.planes[q]];
      e1 += p.ref_u * p.u + p.ref_v * p.v;
      // Velocity direction of the flow along weight_class: s * (a v - b u).
      e2 += c.signs[q] * (p.ref_u * p.v - p.ref_v * p.u);
      r2 += p.radius * p.radius;
    }
    c.radius = std::sqrt(r2);
    moving += e1;
    c.e1 = e1 / c.radius;
    c.e2 = e2 / c.radius;
  }
  cm.center = wd.xi - moving;
  return cm;
}

/// Smallest distance between distinct weight classes up to sign, relative
/// to the largest class norm.
inline double weight_class_separation(const CliffordModel& cm) {
  double sep = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (const auto& c : cm.circles) scale = std::max(scale, c.weight_class.norm());
  for (std::size_t i = 0; i < cm.circles.size(); ++i)
    for (std::size_t j = i + 1; j < cm.circles.size(); ++j) {
      const auto& a = cm.circles[i].weight_class;
      const auto& b = cm.circles[j].weight_class;
      sep = std::min(sep, std::min((a - b).norm(), (a + b).norm()) / scale);
    }
  return sep;
}

}  // namespace clifford
