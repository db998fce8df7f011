#pragma once

// sl2-triples from the generating circles, a Cartan subalgebra through xi,
// its roots, and the certificate for rank-many strongly orthogonal
// noncompact roots. Complex vectors are carried as (re, im) pairs.

#include "clifford/check_report.hpp"
#include "clifford/errors.hpp"
#include "clifford/lattice.hpp"
#include "clifford/orbit.hpp"
#include "clifford/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace clifford {

struct Sl2Triple {
  Element X, Y, H;
};

struct TripleSet {
  std::vector<Sl2Triple> triples;
  double relation_residual = 0.0;  // H = [X,Y], [X,H] = -Y, [Y,H] = X
  double norm_ratio_residual = 0.0;  // | |Y|/|H| - 1 |
  double orthogonality_residual = 0.0;  // <Y_j,Y_k>, <H_j,H_k>, j != k
  double max() const { return std::max({relation_residual, norm_ratio_residual, orthogonality_residual}); }
};

/// X_j = b_j / 2pi, Y_j = [X_j, xi], H_j = [X_j, Y_j].
inline TripleSet build_triples(const LieAlgebra& alg, const std::vector<Element>& rect_basis,
                               const Tripotent& t, double tol = 1e-9) {
  TripleSet ts;
  for (const auto& b : rect_basis) {
    Sl2Triple tr;
    tr.X = b / kTwoPi;
    tr.Y = alg.bracket(tr.X, t.xi);
    tr.H = alg.bracket(tr.X, tr.Y);
    const double nx = alg.norm(tr.X), ny = alg.norm(tr.Y), nh = alg.norm(tr.H);
    if (ny == 0.0 || nh == 0.0) throw Error(ErrorCode::RelationResidualTooLarge, "degenerate triple");
    ts.relation_residual = std::max(
        {ts.relation_residual, alg.norm(alg.bracket(tr.X, tr.H) + tr.Y) / ny,
         alg.norm(alg.bracket(tr.Y, tr.H) - tr.X) / nx});
    ts.norm_ratio_residual = std::max(ts.norm_ratio_residual, std::abs(ny / nh - 1.0));
    ts.triples.push_back(std::move(tr));
  }
  for (std::size_t j = 0; j < ts.triples.size(); ++j)
    for (std::size_t k = j + 1; k < ts.triples.size(); ++k) {
      const auto& a = ts.triples[j];
      const auto& b = ts.triples[k];
      ts.orthogonality_residual = std::max(
          {ts.orthogonality_residual, std::abs(alg.inner(a.Y, b.Y)) / (alg.norm(a.Y) * alg.norm(b.Y)),
           std::abs(alg.inner(a.H, b.H)) / (alg.norm(a.H) * alg.norm(b.H))});
    }
  if (ts.relation_residual > tol || ts.orthogonality_residual > tol || ts.norm_ratio_residual > 1e-8)
    throw Error(ErrorCode::RelationResidualTooLarge,
                "sl2 relations off by " + std::to_string(ts.max()));
  return ts;
}

/// Cross brackets between distinct triples, relative to the factor norms.
inline CheckReport commutation_certificate(const LieAlgebra& alg, const std::vector<Sl2Triple>& triples,
                                           double tol = 1e-8) {
  CheckReport r;
  r.name = "commutation";
  for (std::size_t j = 0; j < triples.size(); ++j)
    for (std::size_t k = 0; k < triples.size(); ++k) {
      if (j == k) continue;
      for (const Element* a : {&triples[j].X, &triples[j].Y, &triples[j].H})
        for (const Element* b : {&triples[k].X, &triples[k].Y, &triples[k].H}) {
          r.max_residual =
              std::max(r.max_residual, alg.norm(alg.bracket(*a, *b)) / (alg.norm(*a) * alg.norm(*b)));
          ++r.checked;
        }
    }
  r.passed = r.max_residual <= tol;
  r.detail = triples.size() < 2 ? "vacuous" : std::to_string(r.checked) + " cross brackets";
  return r;
}

struct CartanSubalgebra {
  Frame basis;  // G-orthonormal: h_k part first, then the H_j directions
  Eigen::Index hk_dim = 0;
  bool contains_xi = false;
  double residual = 0.0;  // max of abelian, in-k, maximality and xi-containment residuals
};

inline CartanSubalgebra cartan_extend(const LieAlgebra& alg, const AbelianSubspace& a,
                                      const Tripotent& t, const std::vector<Sl2Triple>& triples,
                                      std::uint64_t seed) {
  Rng rng(seed);
  const Frame whole = alg.from_euclid(Eigen::MatrixXd::Identity(alg.dim(), alg.dim()));
  const AbelianSubspace hp = greedy_maximal_abelian(alg, whole, a.basis, rng);
  if (!certified_maximal(hp))
    throw Error(ErrorCode::MaximalityNotCertified, "h' is not maximal abelian in g");

  // h_k = h' intersect ker ad(xi).
  const Eigen::MatrixXd killed = alg.to_euclid(t.ad_xi * hp.basis);
  const Frame hk = alg.orthonormalize(hp.basis * linalg::null_space(killed, 1e-8));

  Frame raw(alg.dim(), hk.cols() + static_cast<Eigen::Index>(triples.size()));
  raw.leftCols(hk.cols()) = hk;
  for (std::size_t j = 0; j < triples.size(); ++j)
    raw.col(hk.cols() + static_cast<Eigen::Index>(j)) = triples[j].H;
  CartanSubalgebra h;
  h.basis = alg.orthonormalize(raw);
  h.hk_dim = hk.cols();
  if (h.basis.cols() != hp.rank)
    throw Error(ErrorCode::DimensionMismatch, "dim h = " + std::to_string(h.basis.cols()) +
                                                  ", dim h' = " + std::to_string(hp.rank));

  double in_k = 0.0;
  for (Eigen::Index i = 0; i < h.basis.cols(); ++i) in_k = std::max(in_k, alg.norm(t.ad_xi * h.basis.col(i)));
  const Frame cent = centralizer_in(alg, whole, h.basis);
  double maximality = 0.0;
  for (Eigen::Index j = 0; j < cent.cols(); ++j)
    maximality = std::max(maximality, detail::off_span(alg, h.basis, cent.col(j)));
  const double xi_off = detail::off_span(alg, h.basis, t.xi) / alg.norm(t.xi);
  h.residual = std::max({detail::max_pairwise_bracket(alg, h.basis), in_k, maximality, xi_off});
  h.contains_xi = xi_off <= 1e-9;
  if (!h.contains_xi)
    throw Error(ErrorCode::XiNotContained, "xi off h by " + std::to_string(xi_off));
  return h;
}

struct Root {
  Eigen::RowVectorXd functional;  // alpha(H_i) on the h-basis
  Element re, im;
  double alpha_xi = 0.0;
  bool noncompact = false;
};

struct RootSystem {
  Frame h_basis;
  std::vector<Root> roots;
  double residual = 0.0;  // eigen-equation residual, relative
};

namespace detail {

inline bool functional_less(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (std::abs(a(i) - b(i)) > tol) return a(i) < b(i);
  return false;
}

}  // namespace detail

/// Joint eigendata of ad(h) on the complexification: every rotation plane
/// (u, v) with ad(H)u = a(H)v, ad(H)v = -a(H)u gives the roots +-a with
/// root vectors u -+ i v.
inline RootSystem root_space_decomposition(const LieAlgebra& alg, const CartanSubalgebra& h,
                                           std::uint64_t seed) {
  const WeightDecomposition wd =
      joint_weight_decomposition(alg, h.basis, Element::Zero(alg.dim()), seed);
  if (wd.v0_basis.cols() != h.basis.cols())
    throw Error(ErrorCode::DegenerateRootSpace, "zero weight space larger than h");
  double wmax = 0.0;
  for (const auto& p : wd.planes) wmax = std::max(wmax, p.weight.norm());
  for (std::size_t i = 0; i < wd.planes.size(); ++i)
    for (std::size_t j = i + 1; j < wd.planes.size(); ++j) {
      const auto& a = wd.planes[i].weight;
      const auto& b = wd.planes[j].weight;
      if (std::min((a - b).norm(), (a + b).norm()) <= 1e-6 * wmax)
        throw Error(ErrorCode::DegenerateRootSpace, "root space of complex dimension > 1");
    }

  RootSystem rs;
  rs.h_basis = h.basis;
  for (const auto& p : wd.planes) {
    rs.roots.push_back({p.weight, p.u, Element(-p.v), 0.0, false});
    rs.roots.push_back({Eigen::RowVectorXd(-p.weight), p.u, p.v, 0.0, false});
  }
  for (const auto& r : rs.roots)
    for (Eigen::Index i = 0; i < h.basis.cols(); ++i) {
      const Operator adh = alg.ad(h.basis.col(i));
      const double ai = r.functional(i);
      const double res = std::max(alg.norm(adh * r.re + ai * r.im), alg.norm(adh * r.im - ai * r.re));
      rs.residual = std::max(rs.residual, res / std::max(wmax, 1e-300));
    }
  const double tol = 1e-6 * std::max(wmax, 1e-300);
  std::stable_sort(rs.roots.begin(), rs.roots.end(), [tol](const Root& a, const Root& b) {
    return detail::functional_less(a.functional, b.functional, tol);
  });
  return rs;
}

struct RootClassification {
  RootSystem system;
  int noncompact = 0;
  int compact = 0;
  double max_deviation = 0.0;  // distance of alpha(xi) from {-1, 0, 1}
};

inline RootClassification classify_noncompact(const LieAlgebra& alg, RootSystem roots,
                                              const Tripotent& t, double tol = 1e-8) {
  RootClassification c;
  const Eigen::VectorXd xi_h = roots.h_basis.transpose() * alg.gram().diagonal().cwiseProduct(t.xi);
  for (auto& r : roots.roots) {
    r.alpha_xi = r.functional.dot(xi_h);
    const double dev = std::min({std::abs(r.alpha_xi), std::abs(r.alpha_xi - 1.0), std::abs(r.alpha_xi + 1.0)});
    c.max_deviation = std::max(c.max_deviation, dev);
    if (dev > tol)
      throw Error(ErrorCode::SpectralAnomaly, "alpha(xi) = " + std::to_string(r.alpha_xi));
    r.noncompact = std::abs(r.alpha_xi) > 0.5;
    (r.noncompact ? c.noncompact : c.compact) += 1;
  }
  c.system = std::move(roots);
  return c;
}

struct StrongOrthogonalityCertificate {
  std::vector<std::pair<int, int>> pairs_checked;
  std::vector<std::size_t> matched_roots;  // index into the sorted root list, per triple
  double min_separation = std::numeric_limits<double>::infinity();  // relative to typical root norm
  double max_match_distance = 0.0;
  double max_alpha_xi_residual = 0.0;
  double max_collinearity_residual = 0.0;
  double max_root_orthogonality = 0.0;
  bool passed = false;

  double residual() const {
    return std::max({max_alpha_xi_residual, max_collinearity_residual, max_root_orthogonality});
  }
};

namespace detail {

/// Distance of z from the complex line through w, relative to |z|; both
/// vectors in euclidean coordinates.
inline double complex_collinearity(const Eigen::VectorXcd& w, const Eigen::VectorXcd& z) {
  const std::complex<double> c = w.dot(z) / w.squaredNorm();
  return (z - c * w).norm() / z.norm();
}

inline Eigen::VectorXcd complex_euclid(const LieAlgebra& alg, const Element& re, const Element& im) {
  const Eigen::VectorXd r = alg.to_euclid(re), i = alg.to_euclid(im);
  Eigen::VectorXcd out(r.size());
  for (Eigen::Index k = 0; k < r.size(); ++k) out(k) = {r(k), i(k)};
  return out;
}

}  // namespace detail

/// For each triple, alpha_j = <H_j, .>/|H_j|^2 must be a root with
/// alpha_j(xi) = -|Y_j|^2/|H_j|^2, and alpha_j +- alpha_k must avoid the
/// roots and 0. The root vector of alpha_j is checked against X_j - iY_j
/// (equivalently X_j + iY_j spans the space of -alpha_j under the
/// convention ad(H)X = i alpha(H) X).
inline StrongOrthogonalityCertificate strong_orthogonality_certificate(
    const LieAlgebra& alg, const std::vector<Sl2Triple>& triples, const RootSystem& rs,
    const Tripotent& t, double match_tol = 1e-6, double value_tol = 1e-8, double separation = 1e-3) {
  StrongOrthogonalityCertificate cert;
  if (rs.roots.empty()) throw Error(ErrorCode::RootMatchFailed, "no roots");
  double typical = 0.0;
  for (const auto& r : rs.roots) typical += r.functional.norm();
  typical /= static_cast<double>(rs.roots.size());

  const Eigen::VectorXd gdiag = alg.gram().diagonal();
  const Eigen::VectorXd xi_h = rs.h_basis.transpose() * gdiag.cwiseProduct(t.xi);
  std::vector<Eigen::RowVectorXd> alphas;
  for (const auto& tr : triples) {
    const double hh = alg.inner(tr.H, tr.H);
    const Eigen::RowVectorXd f = (rs.h_basis.transpose() * gdiag.cwiseProduct(tr.H)).transpose() / hh;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
      const double d = (rs.roots[i].functional - f).norm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    cert.max_match_distance = std::max(cert.max_match_distance, best_d / typical);
    if (best_d > match_tol * typical)
      throw Error(ErrorCode::RootMatchFailed, "alpha_j is not a root (distance " + std::to_string(best_d) + ")");
    cert.matched_roots.push_back(best);

    const double expected = -alg.inner(tr.Y, tr.Y) / hh;
    const double axi_res = std::max(std::abs(f.dot(xi_h) - expected), std::abs(rs.roots[best].alpha_xi - expected));
    cert.max_alpha_xi_residual = std::max(cert.max_alpha_xi_residual, axi_res);
    if (axi_res > value_tol)
      throw Error(ErrorCode::RootMatchFailed, "alpha_j(xi) differs from -|Y|^2/|H|^2");

    const auto& root = rs.roots[best];
    const double col = detail::complex_collinearity(detail::complex_euclid(alg, root.re, root.im),
                                                    detail::complex_euclid(alg, tr.X, Element(-tr.Y)));
    cert.max_collinearity_residual = std::max(cert.max_collinearity_residual, col);
    if (col > value_tol)
      throw Error(ErrorCode::RootMatchFailed, "root vector not parallel to X_j - iY_j");
    alphas.push_back(f);
  }

  for (std::size_t j = 0; j < alphas.size(); ++j)
    for (std::size_t k = j + 1; k < alphas.size(); ++k) {
      cert.pairs_checked.emplace_back(static_cast<int>(j), static_cast<int>(k));
      cert.max_root_orthogonality =
          std::max(cert.max_root_orthogonality,
                   std::abs(alphas[j].dot(alphas[k])) / (alphas[j].norm() * alphas[k].norm()));
      for (double s : {1.0, -1.0}) {
        const Eigen::RowVectorXd comb = alphas[j] + s * alphas[k];
        double d = comb.norm();
        for (const auto& r : rs.roots) d = std::min(d, (comb - r.functional).norm());
        cert.min_separation = std::min(cert.min_separation, d / typical);
      }
    }
  cert.passed = cert.min_separation > separation && cert.max_root_orthogonality <= value_tol;
  return cert;
}

inline void require_strongly_orthogonal(const StrongOrthogonalityCertificate& cert) {
  if (!cert.passed)
    throw Error(ErrorCode::StrongOrthogonalityViolated,
                "min separation " + std::to_string(cert.min_separation));
}

}  // namespace clifford
