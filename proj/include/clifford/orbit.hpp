#pragma once

// The adjoint orbit X = Ad(G)xi of a tripotent xi, seen from the base point
// xi: tangent space p, normal space k, the rotation group phi_t, the
// reflection sigma = phi_pi, maximal abelian subspaces of p and geodesic jets.

#include "clifford/check_report.hpp"
#include "clifford/errors.hpp"
#include "clifford/lie_algebra.hpp"
#include "clifford/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace clifford {

struct Tolerances {
  double algebraic = 1e-9;
  double spectral_gap = 1e-6;
  double membership = 1e-8;
};

struct Tripotent {
  Element xi;
  Operator ad_xi;
  double residual = 0.0;  // ||ad^3 + ad|| / ||ad||, spectral norms
};

inline double tripotent_residual(const LieAlgebra& alg, const Element& xi) {
  const Operator a = alg.to_euclid_operator(alg.ad(xi));
  const double na = linalg::spectral_norm(a);
  if (na == 0.0) return 0.0;
  return linalg::spectral_norm(a * a * a + a) / na;
}

inline bool is_tripotent(const LieAlgebra& alg, const Element& xi, double tol = 1e-9) {
  if (xi.size() != alg.dim()) throw Error(ErrorCode::DimensionMismatch, "is_tripotent");
  if (alg.norm(xi) == 0.0) throw Error(ErrorCode::ZeroElement, "xi = 0");
  const Operator a = alg.to_euclid_operator(alg.ad(xi));
  const double na = linalg::spectral_norm(a);
  if (na == 0.0) return false;  // central element, ad(xi) = 0
  return linalg::spectral_norm(a * a * a + a) <= tol * na;
}

inline Tripotent make_tripotent(const LieAlgebra& alg, const Element& xi, double tol = 1e-9) {
  if (!is_tripotent(alg, xi, tol))
    throw Error(ErrorCode::NotTripotent, "ad(xi)^3 != -ad(xi)");
  return Tripotent{xi, alg.ad(xi), tripotent_residual(alg, xi)};
}

/// g = k + p with k = ker ad(xi) (normal space at xi) and p = im ad(xi)
/// (tangent space). J is ad(xi) restricted to p, in p_basis coordinates.
struct CartanSplit {
  Frame k_basis;
  Frame p_basis;
  Eigen::MatrixXd J;
  Operator ad_xi;

  Eigen::Index dim_k() const { return k_basis.cols(); }
  Eigen::Index dim_p() const { return p_basis.cols(); }
};

inline CartanSplit cartan_split(const LieAlgebra& alg, const Tripotent& t) {
  const Operator a = alg.to_euclid_operator(t.ad_xi);
  CartanSplit s;
  s.k_basis = alg.from_euclid(linalg::null_space(a));
  s.p_basis = alg.from_euclid(linalg::column_space(a));
  const Eigen::MatrixXd pe = alg.to_euclid(s.p_basis);
  s.J = pe.transpose() * a * pe;
  s.ad_xi = t.ad_xi;
  return s;
}

namespace detail {

/// Largest G-norm of the component of x outside the span of an orthonormal frame.
inline double off_span(const LieAlgebra& alg, const Frame& frame, const Element& x) {
  return alg.norm(x - alg.project(frame, x));
}

}  // namespace detail

struct SplitResiduals {
  double orthogonality = 0.0;
  double complex_structure = 0.0;  // ||J^2 + I||
  double kk = 0.0, pp = 0.0, kp = 0.0;

  double max() const { return std::max({orthogonality, complex_structure, kk, pp, kp}); }
};

inline SplitResiduals split_residuals(const LieAlgebra& alg, const CartanSplit& s) {
  SplitResiduals r;
  const Eigen::MatrixXd ke = alg.to_euclid(s.k_basis), pe = alg.to_euclid(s.p_basis);
  if (ke.cols() > 0 && pe.cols() > 0)
    r.orthogonality = (ke.transpose() * pe).cwiseAbs().maxCoeff();
  const Eigen::Index m = s.J.rows();
  r.complex_structure = (s.J * s.J + Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < s.dim_k(); ++i) {
    for (Eigen::Index j = i + 1; j < s.dim_k(); ++j)
      r.kk = std::max(r.kk, detail::off_span(alg, s.k_basis,
                                             alg.bracket(s.k_basis.col(i), s.k_basis.col(j))));
    for (Eigen::Index j = 0; j < s.dim_p(); ++j)
      r.kp = std::max(r.kp, detail::off_span(alg, s.p_basis,
                                             alg.bracket(s.k_basis.col(i), s.p_basis.col(j))));
  }
  for (Eigen::Index i = 0; i < s.dim_p(); ++i)
    for (Eigen::Index j = i + 1; j < s.dim_p(); ++j)
      r.pp = std::max(r.pp, detail::off_span(alg, s.k_basis,
                                             alg.bracket(s.p_basis.col(i), s.p_basis.col(j))));
  return r;
}

/// phi_t = e^{t ad(xi)} = id + sin(t) ad(xi) + (1 - cos(t)) ad(xi)^2, which is
/// the identity on k and cos(t) + sin(t) J on p. phi_pi is the reflection sigma.
inline Operator one_param_rotation(const CartanSplit& s, double t) {
  const Eigen::Index d = s.ad_xi.rows();
  return Operator::Identity(d, d) + std::sin(t) * s.ad_xi + (1.0 - std::cos(t)) * s.ad_xi * s.ad_xi;
}

inline Operator reflection(const CartanSplit& s) { return one_param_rotation(s, std::numbers::pi); }

struct AbelianSubspace {
  Frame basis;  // G-orthonormal
  Eigen::Index rank = 0;
  double commutator_residual = 0.0;
  double maximality_residual = 0.0;
};

/// Orthonormal frame of {w in span(ambient) : [z, w] = 0 for every column z}.
inline Frame centralizer_in(const LieAlgebra& alg, const Frame& ambient, const Frame& elements) {
  if (elements.cols() == 0) return ambient;
  Eigen::MatrixXd stacked(alg.dim() * elements.cols(), ambient.cols());
  for (Eigen::Index i = 0; i < elements.cols(); ++i)
    stacked.middleRows(i * alg.dim(), alg.dim()) =
        alg.to_euclid(alg.ad(elements.col(i)) * ambient);
  return ambient * linalg::null_space(stacked);
}

namespace detail {

inline double max_pairwise_bracket(const LieAlgebra& alg, const Frame& f) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < f.cols(); ++i)
    for (Eigen::Index j = i + 1; j < f.cols(); ++j)
      r = std::max(r, alg.norm(alg.bracket(f.col(i), f.col(j))) /
                          std::max(1e-300, alg.norm(f.col(i)) * alg.norm(f.col(j))));
  return r;
}

inline Eigen::VectorXd gaussian_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

/// Component of each column of f off the span of an orthonormal frame.
inline Frame residual_columns(const LieAlgebra& alg, const Frame& f, const Frame& span) {
  Frame r = f;
  for (Eigen::Index j = 0; j < f.cols(); ++j) r.col(j) -= alg.project(span, f.col(j));
  return r;
}

}  // namespace detail

/// Greedy extension to a maximal abelian subspace of span(ambient) (an
/// orthonormal frame), starting from a commuting frame. With an empty start a
/// regular element is chosen among eight random candidates. Used both for
/// a in p and for Cartan subalgebras of g.
inline AbelianSubspace greedy_maximal_abelian(const LieAlgebra& alg, const Frame& ambient,
                                              const Frame& start, Rng& rng) {
  Frame span = alg.orthonormalize(start);
  if (span.cols() == 0 && ambient.cols() > 0) {
    Element best;
    Eigen::Index best_dim = ambient.cols() + 1;
    for (int c = 0; c < 8; ++c) {
      const Element z = ambient * detail::gaussian_vector(ambient.cols(), rng);
      const Eigen::Index cd = centralizer_in(alg, ambient, z).cols();
      if (cd < best_dim) {
        best_dim = cd;
        best = z;
      }
    }
    span = alg.orthonormalize(best);
  }
  for (Eigen::Index iter = 0; iter <= ambient.cols(); ++iter) {
    const Frame cent = centralizer_in(alg, ambient, span);
    // cent is orthonormal, so an absolute threshold on the residual applies.
    const Eigen::MatrixXd res = alg.to_euclid(detail::residual_columns(alg, cent, span));
    if (res.size() == 0 || linalg::spectral_norm(res) <= 1e-8) break;
    const Frame extra = alg.from_euclid(linalg::column_space(res, 1e-8 / linalg::spectral_norm(res)));
    const Element pick = extra * detail::gaussian_vector(extra.cols(), rng);
    Frame grown(alg.dim(), span.cols() + 1);
    grown << span, pick;
    span = alg.orthonormalize(grown);
  }
  AbelianSubspace out;
  out.basis = span;
  out.rank = span.cols();
  out.commutator_residual = detail::max_pairwise_bracket(alg, span);
  const Frame cent = centralizer_in(alg, ambient, span);
  for (Eigen::Index j = 0; j < cent.cols(); ++j)
    out.maximality_residual =
        std::max(out.maximality_residual, detail::off_span(alg, span, cent.col(j)));
  return out;
}

inline bool certified_maximal(const AbelianSubspace& a) {
  return a.commutator_residual <= 1e-10 && a.maximality_residual <= 1e-8;
}

inline AbelianSubspace maximal_abelian(const LieAlgebra& alg, const CartanSplit& s,
                                       std::uint64_t seed, int retries = 3) {
  for (int attempt = 0; attempt < retries; ++attempt) {
    Rng rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt));
    AbelianSubspace a = greedy_maximal_abelian(alg, s.p_basis, Frame(alg.dim(), 0), rng);
    if (certified_maximal(a)) return a;
  }
  throw Error(ErrorCode::MaximalityNotCertified, "centralizer test failed after retries");
}

/// Derivatives at t = 0 of gamma(t) = e^{t ad Z} xi.
struct GeodesicJet {
  Element point, d1, d2, d3;
};

inline GeodesicJet geodesic_jet(const LieAlgebra& alg, const Tripotent& t, const Element& z) {
  // p is the image of ad(xi) and -ad(xi)^2 projects onto it.
  const Element zp = -(t.ad_xi * (t.ad_xi * z));
  if (alg.norm(z - zp) > 1e-9 * std::max(alg.norm(z), 1e-300))
    throw Error(ErrorCode::NotTangent, "jet direction is not in p");
  GeodesicJet j;
  j.point = t.xi;
  j.d1 = alg.bracket(z, t.xi);
  j.d2 = alg.bracket(z, j.d1);
  j.d3 = alg.bracket(z, j.d2);
  return j;
}

/// Relative size of the component of ad(Z)^3 xi off span{ad(H) xi : H in a}.
inline double third_derivative_off_torus(const LieAlgebra& alg, const Tripotent& t,
                                         const AbelianSubspace& a, const Element& z) {
  const GeodesicJet j = geodesic_jet(alg, t, z);
  const double n3 = alg.norm(j.d3);
  if (n3 == 0.0) return 0.0;
  Frame tangent(alg.dim(), a.rank);
  for (Eigen::Index i = 0; i < a.rank; ++i) tangent.col(i) = alg.bracket(a.basis.col(i), t.xi);
  return detail::off_span(alg, alg.orthonormalize(tangent), j.d3) / n3;
}

struct MembershipResult {
  bool member = false;
  double spectrum_residual = 0.0;
  bool pfaffian_compared = false;
};

namespace detail {

inline Eigen::VectorXd sorted_spectrum(const Eigen::MatrixXcd& m) {
  // m is anti-Hermitian; -i m is Hermitian with real eigenvalues.
  const Eigen::MatrixXcd h = std::complex<double>(0.0, -1.0) * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues();  // ascending
}

}  // namespace detail

/// Conjugacy test by eigenvalue multisets of the defining representation.
/// For even so(n) the Pfaffian sign separates the two SO(n)-orbits sharing
/// a spectrum, so it is compared whenever both Pfaffians are nonzero.
inline MembershipResult orbit_membership_detail(const LieAlgebra& alg, const Element& y,
                                                const Tripotent& t, double tol = 1e-8) {
  const Eigen::MatrixXcd my = alg.to_matrix(y), mx = alg.to_matrix(t.xi);
  MembershipResult r;
  r.spectrum_residual =
      (detail::sorted_spectrum(my) - detail::sorted_spectrum(mx)).cwiseAbs().maxCoeff();
  const double bound = tol * (1.0 + alg.norm(t.xi));
  r.member = r.spectrum_residual <= bound;
  if (alg.family() == Family::SO && alg.parameter() % 2 == 0) {
    const double py = linalg::pfaffian(my.real()), px = linalg::pfaffian(mx.real());
    const double pf_tol = bound * std::pow(1.0 + mx.norm(), alg.parameter() / 2);
    if (std::abs(py) > pf_tol && std::abs(px) > pf_tol) {
      r.pfaffian_compared = true;
      if ((py > 0) != (px > 0)) r.member = false;
    }
  }
  return r;
}

inline bool orbit_membership(const LieAlgebra& alg, const Element& y, const Tripotent& t,
                             double tol = 1e-8) {
  return orbit_membership_detail(alg, y, t, tol).member;
}

struct SymmetryReport {
  bool passed = false;
  int samples = 0;
  double max_spectrum_residual = 0.0;
  double involution_residual = 0.0;   // ||sigma^2 - id||
  double fixed_point_residual = 0.0;  // ||sigma(xi) - xi||
};

/// Reflection invariance of X along its normal space at xi, sampled on
/// random orbit points e^{ad v} xi.
inline SymmetryReport extrinsic_symmetry_check(const LieAlgebra& alg, const Tripotent& t,
                                               int samples, std::uint64_t seed,
                                               double tol = 1e-8) {
  if (samples < 1) throw Error(ErrorCode::ParameterTooSmall, "samples >= 1");
  const CartanSplit s{Frame(), Frame(), Eigen::MatrixXd(), t.ad_xi};
  const Operator sigma = reflection(s);
  SymmetryReport rep;
  rep.samples = samples;
  const Eigen::Index d = alg.dim();
  rep.involution_residual = (sigma * sigma - Operator::Identity(d, d)).cwiseAbs().maxCoeff();
  rep.fixed_point_residual = alg.norm(sigma * t.xi - t.xi);
  bool all = true;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Element x = exp_ad_apply(alg, alg.gaussian(rng), 1.0, t.xi);
    const auto m = orbit_membership_detail(alg, sigma * x, t, tol);
    rep.max_spectrum_residual = std::max(rep.max_spectrum_residual, m.spectrum_residual);
    all = all && m.member;
  }
  rep.passed = all && rep.involution_residual <= 1e-12 &&
               rep.fixed_point_residual <= 1e-12 * std::max(1.0, alg.norm(t.xi));
  return rep;
}

/// ||mean of sampled orbit points|| / ||xi||. Diagnostic only: the origin is
/// taken as the barycenter without recentering.
inline double barycenter_diagnostic(const LieAlgebra& alg, const Tripotent& t, int samples,
                                    std::uint64_t seed) {
  Rng rng(seed);
  Element mean = Element::Zero(alg.dim());
  for (int i = 0; i < samples; ++i) {
    // A single exponential is far from Haar-distributed; a few composed
    // random rotations mix well enough for a diagnostic.
    Element x = t.xi;
    for (int k = 0; k < 4; ++k) x = exp_ad_apply(alg, Element(3.0 * alg.gaussian(rng)), 1.0, x);
    mean += x;
  }
  mean /= static_cast<double>(samples);
  return alg.norm(mean) / alg.norm(t.xi);
}

}  // namespace clifford
