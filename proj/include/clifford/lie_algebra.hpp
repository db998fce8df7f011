#pragma once

// Compact classical Lie algebras su(n), so(n), sp(n) in their defining
// representations, with the invariant inner product <x,y> = -Re tr(xy).

#include "clifford/errors.hpp"
#include "clifford/linalg.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace clifford {

using Element = Eigen::VectorXd;   // coordinates in the fixed algebra basis
using Operator = Eigen::MatrixXd;  // dim x dim, acts on coordinates
using Frame = Eigen::MatrixXd;     // columns are elements
using Rng = std::mt19937_64;

enum class Family { SU, SO, SP };

constexpr std::string_view to_string(Family f) {
  switch (f) {
    case Family::SU: return "SU";
    case Family::SO: return "SO";
    case Family::SP: return "SP";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  if (s == "SU" || s == "su") return Family::SU;
  if (s == "SO" || s == "so") return Family::SO;
  if (s == "SP" || s == "sp") return Family::SP;
  throw Error(ErrorCode::UnsupportedFamily, std::string(s));
}

class LieAlgebra {
 public:
  /// ad_basis[i](k, j) is the structure constant c[i][j][k]:
  /// [e_i, e_j] = sum_k c[i][j][k] e_k. The Gram matrix must be diagonal.
  LieAlgebra(Family family, int parameter, std::vector<std::string> labels,
             std::vector<Eigen::MatrixXcd> matrices, Eigen::MatrixXd gram,
             std::vector<Eigen::MatrixXd> ad_basis)
      : family_(family),
        parameter_(parameter),
        labels_(std::move(labels)),
        matrices_(std::move(matrices)),
        gram_(std::move(gram)),
        ad_basis_(std::move(ad_basis)) {
    const auto d = static_cast<Eigen::Index>(ad_basis_.size());
    if (gram_.rows() != d || gram_.cols() != d || static_cast<Eigen::Index>(labels_.size()) != d ||
        static_cast<Eigen::Index>(matrices_.size()) != d)
      throw Error(ErrorCode::DimensionMismatch, "inconsistent algebra data");
    const Eigen::MatrixXd off = gram_ - Eigen::MatrixXd(gram_.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() > 1e-12 * gram_.diagonal().cwiseAbs().maxCoeff())
      throw Error(ErrorCode::DimensionMismatch, "basis must be orthogonal");
    scale_ = gram_.diagonal().cwiseSqrt();
  }

  Family family() const { return family_; }
  int parameter() const { return parameter_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(ad_basis_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Eigen::MatrixXcd>& matrices() const { return matrices_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const std::vector<Eigen::MatrixXd>& ad_basis() const { return ad_basis_; }
  double structure_constant(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    return ad_basis_[static_cast<std::size_t>(i)](k, j);
  }

  double inner(const Element& x, const Element& y) const {
    return x.cwiseProduct(gram_.diagonal()).dot(y);
  }
  double norm(const Element& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

  /// Frame ops: G-orthonormal frames map to Euclidean-orthonormal ones.
  Eigen::MatrixXd to_euclid(const Eigen::MatrixXd& x) const { return scale_.asDiagonal() * x; }
  Eigen::MatrixXd from_euclid(const Eigen::MatrixXd& x) const {
    return scale_.cwiseInverse().asDiagonal() * x;
  }
  Operator to_euclid_operator(const Operator& a) const {
    return scale_.asDiagonal() * a * scale_.cwiseInverse().asDiagonal();
  }
  Operator from_euclid_operator(const Operator& a) const {
    return scale_.cwiseInverse().asDiagonal() * a * scale_.asDiagonal();
  }

  Frame orthonormalize(const Frame& f, double drop_tol = 1e-9) const {
    return from_euclid(linalg::orthonormalize(to_euclid(f), drop_tol));
  }
  /// G-orthogonal projection onto the span of an orthonormal frame.
  Element project(const Frame& orthonormal, const Element& x) const {
    return orthonormal * (orthonormal.transpose() * gram_.diagonal().cwiseProduct(x));
  }

  Element bracket(const Element& x, const Element& y) const {
    check(x);
    check(y);
    Element out = Element::Zero(dim());
    for (Eigen::Index i = 0; i < dim(); ++i)
      if (x(i) != 0.0) out.noalias() += x(i) * (ad_basis_[static_cast<std::size_t>(i)] * y);
    return out;
  }

  Operator ad(const Element& x) const {
    check(x);
    Operator out = Operator::Zero(dim(), dim());
    for (Eigen::Index i = 0; i < dim(); ++i)
      if (x(i) != 0.0) out += x(i) * ad_basis_[static_cast<std::size_t>(i)];
    return out;
  }

  Eigen::MatrixXcd to_matrix(const Element& x) const {
    check(x);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(matrices_[0].rows(), matrices_[0].cols());
    for (Eigen::Index i = 0; i < dim(); ++i) m += x(i) * matrices_[static_cast<std::size_t>(i)];
    return m;
  }

  /// Orthogonal projection of an arbitrary matrix onto the algebra.
  Element from_matrix(const Eigen::MatrixXcd& m) const {
    Element x(dim());
    for (Eigen::Index k = 0; k < dim(); ++k)
      x(k) = trace_form(m, matrices_[static_cast<std::size_t>(k)]) / gram_(k, k);
    return x;
  }

  static double trace_form(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return -(a * b).trace().real();
  }

  /// Gaussian element, isotropic with respect to the invariant inner product.
  Element gaussian(Rng& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Element x(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) x(k) = normal(rng) / scale_(k);
    return x;
  }

 private:
  void check(const Element& x) const {
    if (x.size() != dim())
      throw Error(ErrorCode::DimensionMismatch,
                  "element of length " + std::to_string(x.size()) + " in algebra of dim " +
                      std::to_string(dim()));
  }

  Family family_;
  int parameter_;
  std::vector<std::string> labels_;
  std::vector<Eigen::MatrixXcd> matrices_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd scale_;
  std::vector<Eigen::MatrixXd> ad_basis_;
};

namespace detail {

inline Eigen::MatrixXcd unit(Eigen::Index n, Eigen::Index a, Eigen::Index b) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  m(a, b) = 1.0;
  return m;
}

inline std::string pair_label(const char* tag, Eigen::Index a, Eigen::Index b) {
  return std::string(tag) + "_" + std::to_string(a + 1) + std::to_string(b + 1);
}

/// Structure constants from matrix commutators projected on the basis.
/// Only i < j is computed; the rest follows by antisymmetry exactly.
inline std::vector<Eigen::MatrixXd> structure_from_matrices(
    const std::vector<Eigen::MatrixXcd>& basis, const Eigen::MatrixXd& gram) {
  const auto d = static_cast<Eigen::Index>(basis.size());
  std::vector<Eigen::MatrixXd> ad(basis.size(), Eigen::MatrixXd::Zero(d, d));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const auto& bi = basis[static_cast<std::size_t>(i)];
      const auto& bj = basis[static_cast<std::size_t>(j)];
      const Eigen::MatrixXcd comm = bi * bj - bj * bi;
      for (Eigen::Index k = 0; k < d; ++k) {
        double c = LieAlgebra::trace_form(comm, basis[static_cast<std::size_t>(k)]) / gram(k, k);
        if (std::abs(c) < 1e-15) c = 0.0;
        ad[static_cast<std::size_t>(i)](k, j) = c;
        ad[static_cast<std::size_t>(j)](k, i) = -c;
      }
    }
  }
  return ad;
}

}  // namespace detail

/// Builds su(n) (n >= 2), so(n) (n >= 3) or sp(n) (n >= 1) with an
/// orthogonal basis under the trace form.
inline LieAlgebra build_algebra(Family family, int n) {
  using detail::unit;
  const std::complex<double> I(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> basis;
  std::vector<std::string> labels;

  switch (family) {
    case Family::SU: {
      if (n < 2) throw Error(ErrorCode::ParameterTooSmall, "su(n) needs n >= 2");
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b) {
          basis.push_back(0.5 * I * (unit(n, a, b) + unit(n, b, a)));
          labels.push_back(detail::pair_label("iS", a, b));
          basis.push_back(0.5 * (unit(n, a, b) - unit(n, b, a)));
          labels.push_back(detail::pair_label("A", a, b));
        }
      for (Eigen::Index m = 1; m < n; ++m) {
        Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
        const double c = 1.0 / std::sqrt(2.0 * static_cast<double>(m * (m + 1)));
        for (Eigen::Index a = 0; a < m; ++a) d(a, a) = I * c;
        d(m, m) = -I * c * static_cast<double>(m);
        basis.push_back(d);
        labels.push_back("D_" + std::to_string(m));
      }
      break;
    }
    case Family::SO: {
      if (n < 3) throw Error(ErrorCode::ParameterTooSmall, "so(n) needs n >= 3");
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b) {
          basis.push_back(unit(n, a, b) - unit(n, b, a));
          labels.push_back(detail::pair_label("L", a, b));
        }
      break;
    }
    case Family::SP: {
      if (n < 1) throw Error(ErrorCode::ParameterTooSmall, "sp(n) needs n >= 1");
      const Eigen::Index m = 2 * n;
      // [[A, B], [-conj(B), conj(A)]] with A in u(n) and B complex symmetric.
      auto embed = [&](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
        out.topLeftCorner(n, n) = a;
        out.topRightCorner(n, n) = b;
        out.bottomLeftCorner(n, n) = -b.conjugate();
        out.bottomRightCorner(n, n) = a.conjugate();
        return out;
      };
      const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(n, n);
      for (Eigen::Index a = 0; a < n; ++a) {
        basis.push_back(embed(I * unit(n, a, a), zero));
        labels.push_back("iE_" + std::to_string(a + 1));
      }
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b) {
          basis.push_back(embed(unit(n, a, b) - unit(n, b, a), zero));
          labels.push_back(detail::pair_label("A", a, b));
          basis.push_back(embed(I * (unit(n, a, b) + unit(n, b, a)), zero));
          labels.push_back(detail::pair_label("iS", a, b));
        }
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a; b < n; ++b) {
          const Eigen::MatrixXcd s = a == b ? unit(n, a, a) : Eigen::MatrixXcd(unit(n, a, b) + unit(n, b, a));
          basis.push_back(embed(zero, s));
          labels.push_back(detail::pair_label("B", a, b));
          basis.push_back(embed(zero, I * s));
          labels.push_back(detail::pair_label("iB", a, b));
        }
      break;
    }
    default:
      throw Error(ErrorCode::UnsupportedFamily, "unknown family");
  }

  const auto d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    gram(i, i) = LieAlgebra::trace_form(basis[static_cast<std::size_t>(i)],
                                        basis[static_cast<std::size_t>(i)]);
  auto ad = detail::structure_from_matrices(basis, gram);
  return LieAlgebra(family, n, std::move(labels), std::move(basis), std::move(gram), std::move(ad));
}

inline Element bracket(const LieAlgebra& alg, const Element& x, const Element& y) {
  return alg.bracket(x, y);
}

inline Operator ad_operator(const LieAlgebra& alg, const Element& x) { return alg.ad(x); }

/// The one-parameter group t -> e^{t ad(v)}. The generator is skew for the
/// invariant inner product, so it splits into exact rotation blocks; if the
/// block reconstruction is poor the Pade exponential is used instead.
class AdFlow {
 public:
  static constexpr double kSchurTolerance = 1e-10;

  AdFlow(const LieAlgebra& alg, const Element& v)
      : scale_(alg.gram().diagonal().cwiseSqrt()), generator_(alg.to_euclid_operator(alg.ad(v))) {
    blocks_ = linalg::skew_blocks(generator_, 0.0);
    fallback_ = blocks_.residual > kSchurTolerance;
  }

  bool used_fallback() const { return fallback_; }
  double schur_residual() const { return blocks_.residual; }

  Operator operator_at(double t) const {
    Eigen::MatrixXd e;
    if (fallback_) {
      e = (t * generator_).exp();
    } else {
      const Eigen::Index n = generator_.rows();
      Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
      for (Eigen::Index k = 0; k < blocks_.plane_count(); ++k) {
        const double th = t * blocks_.angles[static_cast<std::size_t>(k)];
        const double c = std::cos(th), s = std::sin(th);
        r(2 * k, 2 * k) = c;
        r(2 * k + 1, 2 * k + 1) = c;
        r(2 * k + 1, 2 * k) = s;
        r(2 * k, 2 * k + 1) = -s;
      }
      e = blocks_.basis * r * blocks_.basis.transpose();
    }
    return scale_.cwiseInverse().asDiagonal() * e * scale_.asDiagonal();
  }

  Element apply(double t, const Element& w) const { return operator_at(t) * w; }

 private:
  Eigen::VectorXd scale_;
  Eigen::MatrixXd generator_;
  linalg::SkewBlocks blocks_;
  bool fallback_ = false;
};

inline Element exp_ad_apply(const LieAlgebra& alg, const Element& v, double t, const Element& w) {
  if (w.size() != alg.dim())
    throw Error(ErrorCode::DimensionMismatch, "exp_ad_apply target has wrong length");
  return AdFlow(alg, v).apply(t, w);
}

struct ValidationReport {
  double max_structure_constant = 0.0;
  double jacobi_residual = 0.0;        // absolute, over all basis triples
  double antisymmetry_residual = 0.0;
  double ad_invariance_residual = 0.0;  // relative, over random triples
  double killing_min = 0.0;
  double killing_max = 0.0;
  bool jacobi_ok = false;
  bool antisymmetry_ok = false;
  bool ad_invariance_ok = false;
  bool killing_negative_definite = false;

  bool passed() const {
    return jacobi_ok && antisymmetry_ok && ad_invariance_ok && killing_negative_definite;
  }
  double jacobi_relative() const {
    return max_structure_constant > 0.0 ? jacobi_residual / max_structure_constant : jacobi_residual;
  }
};

inline Eigen::MatrixXd killing_form(const LieAlgebra& alg) {
  const Eigen::Index d = alg.dim();
  Eigen::MatrixXd k(d, d);
  const auto& ad = alg.ad_basis();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) {
      k(i, j) = (ad[static_cast<std::size_t>(i)] * ad[static_cast<std::size_t>(j)]).trace();
      k(j, i) = k(i, j);
    }
  return k;
}

inline ValidationReport validate_structure(const LieAlgebra& alg, std::uint64_t seed = 7,
                                           int random_triples = 20) {
  ValidationReport rep;
  const Eigen::Index d = alg.dim();
  const auto& ad = alg.ad_basis();
  for (const auto& a : ad) rep.max_structure_constant = std::max(rep.max_structure_constant, a.cwiseAbs().maxCoeff());

  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index k = 0; k < d; ++k)
        rep.antisymmetry_residual = std::max(
            rep.antisymmetry_residual,
            std::abs(alg.structure_constant(i, j, k) + alg.structure_constant(j, i, k)));

  // Jacobi in operator form: [ad e_i, ad e_j] = ad [e_i, e_j].
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const auto& ai = ad[static_cast<std::size_t>(i)];
      const auto& aj = ad[static_cast<std::size_t>(j)];
      Eigen::MatrixXd r = ai * aj - aj * ai;
      for (Eigen::Index k = 0; k < d; ++k) {
        const double c = alg.structure_constant(i, j, k);
        if (c != 0.0) r -= c * ad[static_cast<std::size_t>(k)];
      }
      rep.jacobi_residual = std::max(rep.jacobi_residual, r.cwiseAbs().maxCoeff());
    }

  Rng rng(seed);
  for (int s = 0; s < random_triples; ++s) {
    const Element x = alg.gaussian(rng), y = alg.gaussian(rng), z = alg.gaussian(rng);
    const double lhs = alg.inner(alg.bracket(x, y), z) + alg.inner(y, alg.bracket(x, z));
    const double scale = alg.norm(x) * alg.norm(y) * alg.norm(z);
    rep.ad_invariance_residual = std::max(rep.ad_invariance_residual, std::abs(lhs) / scale);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(killing_form(alg), Eigen::EigenvaluesOnly);
  rep.killing_min = eig.eigenvalues().minCoeff();
  rep.killing_max = eig.eigenvalues().maxCoeff();

  rep.jacobi_ok = rep.jacobi_residual <= 1e-12 * std::max(rep.max_structure_constant, 1e-300);
  rep.antisymmetry_ok = rep.antisymmetry_residual == 0.0;
  rep.ad_invariance_ok = rep.ad_invariance_residual <= 1e-10;
  rep.killing_negative_definite = rep.killing_max < 0.0;
  return rep;
}

}  // namespace clifford
