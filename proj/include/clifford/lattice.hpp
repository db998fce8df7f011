#pragma once

// Unit lattice of the maximal torus exp(a).xi, its rectangular basis, the
// generating circles, and fixed sets of lattice isometries.

#include "clifford/errors.hpp"
#include "clifford/integer.hpp"
#include "clifford/lie_algebra.hpp"
#include "clifford/linalg.hpp"
#include "clifford/weights.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace clifford {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Gamma = {H in a : e^{ad H} xi = xi}, stored in coordinates of the
/// orthonormal a-basis. generators = scale * integer_generators exactly.
struct UnitLattice {
  Frame a_basis;
  Eigen::MatrixXd generators;    // r x r, columns generate Gamma
  IntMatrix integer_generators;  // r x r
  Eigen::MatrixXd scale;         // 2 pi B^{-1}, B = chosen independent weight rows
  long long denominator = 1;     // common denominator of the reconstructed ratios
  double membership_residual = 0.0;
  Eigen::MatrixXd rect_basis;  // r x r a-coordinates, filled once certified
  bool certified_rectangular = false;

  Eigen::Index rank() const { return generators.cols(); }
  Element element(const Eigen::VectorXd& coords) const { return a_basis * coords; }
  std::vector<Element> rect_elements() const {
    std::vector<Element> out;
    for (Eigen::Index j = 0; j < rect_basis.cols(); ++j) out.push_back(element(rect_basis.col(j)));
    return out;
  }
};

namespace detail {

/// Rows of the weight matrix that constrain the lattice: planes the
/// reference point actually moves in.
inline Eigen::MatrixXd active_weights(const WeightDecomposition& wd) {
  const double rfloor = 1e-9 * std::max(wd.xi_norm, 1e-300);
  double wmax = 0.0;
  for (const auto& p : wd.planes) wmax = std::max(wmax, p.weight.norm());
  std::vector<Eigen::RowVectorXd> rows;
  for (const auto& p : wd.planes)
    if (p.radius > rfloor && p.weight.norm() > 1e-9 * wmax) rows.push_back(p.weight);
  Eigen::MatrixXd w(static_cast<Eigen::Index>(rows.size()), wd.torus_basis.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) w.row(static_cast<Eigen::Index>(i)) = rows[i];
  return w;
}

/// Pairwise size reduction; keeps the integer and real generators in step.
inline void pairwise_reduce(Eigen::MatrixXd& x, IntMatrix& y) {
  for (int sweep = 0; sweep < 200; ++sweep) {
    bool changed = false;
    for (Eigen::Index i = 0; i < x.cols(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (i == j) continue;
        const double nj = x.col(j).squaredNorm();
        if (nj == 0.0) continue;
        const double q = std::round(x.col(i).dot(x.col(j)) / nj);
        if (q == 0.0) continue;
        const Eigen::VectorXd cand = x.col(i) - q * x.col(j);
        if (cand.squaredNorm() < x.col(i).squaredNorm() * (1.0 - 1e-12)) {
          x.col(i) = cand;
          const auto qi = static_cast<long long>(q);
          for (Eigen::Index r = 0; r < y.rows(); ++r)
            y(r, i) = integer::add(y(r, i), -integer::mul(qi, y(r, j)));
          changed = true;
        }
      }
    if (!changed) return;
  }
}

}  // namespace detail

inline UnitLattice unit_lattice(const LieAlgebra& alg, const WeightDecomposition& wd,
                                long long max_den = 4096, double tol = 1e-8) {
  const Eigen::Index r = wd.torus_basis.cols();
  const Eigen::MatrixXd w = detail::active_weights(wd);
  if (linalg::numerical_rank(w) < r)
    throw Error(ErrorCode::NonFaithfulAction, "weights of moving planes do not span a*");

  // Choose r well-conditioned rows B; every row of W is a rational
  // combination of them.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(w.transpose());
  std::vector<Eigen::Index> pick;
  for (Eigen::Index i = 0; i < r; ++i) pick.push_back(qr.colsPermutation().indices()(i));
  std::sort(pick.begin(), pick.end());
  Eigen::MatrixXd b(r, r);
  for (Eigen::Index i = 0; i < r; ++i) b.row(i) = w.row(pick[static_cast<std::size_t>(i)]);
  const Eigen::MatrixXd binv = b.inverse();
  const Eigen::MatrixXd q = w * binv;

  std::vector<integer::Rational> rat(static_cast<std::size_t>(q.size()));
  long long den = 1;
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      const auto rr = integer::rational_reconstruct(q(i, j), max_den, tol);
      if (!rr)
        throw Error(ErrorCode::RationalReconstructionFailed,
                    "weight ratio " + std::to_string(q(i, j)) + " not commensurable");
      rat[static_cast<std::size_t>(i * q.cols() + j)] = *rr;
      den = integer::mul(den / std::gcd(den, rr->den), rr->den);
    }
  IntMatrix numer(q.rows(), q.cols());
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      const auto& rr = rat[static_cast<std::size_t>(i * q.cols() + j)];
      numer(i, j) = integer::mul(rr.num, den / rr.den);
    }

  // {y in Z^r : N y in den Z^m}. With U N V = S: y = V z, s_i z_i in den Z.
  const integer::SmithForm snf = integer::smith_normal_form(numer);
  IntMatrix y = snf.V;
  for (Eigen::Index i = 0; i < r; ++i) {
    const long long si = i < snf.D.rows() ? snf.D(i, i) : 0;
    const long long f = den / std::gcd(den, si);
    for (Eigen::Index k = 0; k < r; ++k) y(k, i) = integer::mul(y(k, i), f);
  }

  UnitLattice lat;
  lat.a_basis = wd.torus_basis;
  lat.scale = kTwoPi * binv;
  lat.denominator = den;
  Eigen::MatrixXd x = lat.scale * y.cast<double>();
  detail::pairwise_reduce(x, y);
  lat.generators = lat.scale * y.cast<double>();
  lat.integer_generators = y;

  for (Eigen::Index j = 0; j < r; ++j) {
    const Element bj = lat.element(lat.generators.col(j));
    lat.membership_residual = std::max(
        lat.membership_residual, alg.norm(exp_ad_apply(alg, bj, 1.0, wd.xi) - wd.xi) /
                                     std::max(wd.xi_norm, 1e-300));
  }
  return lat;
}

struct LatticeVector {
  IntVector coeffs;
  Eigen::VectorXd vec;
  double norm = 0.0;
};

/// All nonzero lattice vectors of norm <= bound by exhaustive enumeration in
/// the box |n_i| <= bound * sqrt((Q^-1)_ii), Q the Gram matrix.
inline std::vector<LatticeVector> shortest_vectors_oracle(const Eigen::MatrixXd& generators,
                                                          double bound) {
  const Eigen::Index k = generators.cols();
  if (k > 6) throw Error(ErrorCode::RankTooLarge, "enumeration supports rank <= 6");
  std::vector<LatticeVector> out;
  if (k == 0) return out;
  const Eigen::MatrixXd gram = generators.transpose() * generators;
  const Eigen::MatrixXd ginv = gram.inverse();
  const double slack = 1e-9 * std::max(bound, 1.0);
  std::vector<long long> lim(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i)
    lim[static_cast<std::size_t>(i)] =
        static_cast<long long>(std::floor((bound + slack) * std::sqrt(std::max(0.0, ginv(i, i))) + 1e-9));
  IntVector n(k);
  for (Eigen::Index i = 0; i < k; ++i) n(i) = -lim[static_cast<std::size_t>(i)];
  for (;;) {
    if (!n.isZero()) {
      const Eigen::VectorXd v = generators * n.cast<double>();
      const double nv = v.norm();
      if (nv <= bound + slack) out.push_back({n, v, nv});
    }
    Eigen::Index i = 0;
    while (i < k && n(i) == lim[static_cast<std::size_t>(i)]) {
      n(i) = -lim[static_cast<std::size_t>(i)];
      ++i;
    }
    if (i == k) break;
    ++n(i);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LatticeVector& a, const LatticeVector& b) { return a.norm < b.norm; });
  return out;
}

namespace detail {

inline void normalize_sign(Eigen::VectorXd& v) {
  const double tol = 1e-9 * v.norm();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > tol) {
      if (v(i) < 0) v = -v;
      return;
    }
}

/// Sign-normalise each column, then sort by (length, lexicographic).
inline Eigen::MatrixXd canonical_columns(const Eigen::MatrixXd& m) {
  std::vector<Eigen::VectorXd> cols;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::VectorXd v = m.col(j);
    normalize_sign(v);
    cols.push_back(v);
  }
  std::stable_sort(cols.begin(), cols.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double na = a.norm(), nb = b.norm();
    if (std::abs(na - nb) > 1e-9 * std::max(na, nb)) return na < nb;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double tol = 1e-9 * std::max(na, nb);
      if (std::abs(a(i) - b(i)) > tol) return a(i) > b(i);
    }
    return false;
  });
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = cols[j];
  return out;
}

/// Maximal sets of pairwise orthogonal vectors (Bron-Kerbosch), capped.
inline void orthogonal_cliques(const std::vector<std::vector<bool>>& adj, std::vector<int> r,
                               std::vector<int> p, std::vector<int> x,
                               std::vector<std::vector<int>>& out, std::size_t cap) {
  if (out.size() >= cap) return;
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  const std::vector<int> pc = p;
  for (int v : pc) {
    std::vector<int> r2 = r, p2, x2;
    r2.push_back(v);
    for (int u : p)
      if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) p2.push_back(u);
    for (int u : x)
      if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)]) x2.push_back(u);
    orthogonal_cliques(adj, r2, p2, x2, out, cap);
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

inline std::vector<Eigen::VectorXd> split_off_shortest(Eigen::MatrixXd basis) {
  const Eigen::Index k = basis.cols();
  if (k == 0) return {};
  // Reduced generators keep the enumeration box small.
  IntMatrix track = IntMatrix::Identity(k, k);
  pairwise_reduce(basis, track);
  double bound = basis.col(0).norm();
  for (Eigen::Index j = 1; j < k; ++j) bound = std::min(bound, basis.col(j).norm());
  const auto vecs = shortest_vectors_oracle(basis, bound);
  const double lambda = vecs.front().norm;

  // Shortest vectors up to sign: keep the one whose first nonzero coefficient is positive.
  std::vector<LatticeVector> shortest;
  for (const auto& v : vecs) {
    if (v.norm > lambda * (1.0 + 1e-9)) break;
    Eigen::Index lead = 0;
    while (v.coeffs(lead) == 0) ++lead;
    if (v.coeffs(lead) > 0) shortest.push_back(v);
  }
  const auto s = static_cast<int>(shortest.size());
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(s), std::vector<bool>(static_cast<std::size_t>(s)));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          i != j && std::abs(shortest[static_cast<std::size_t>(i)].vec.dot(shortest[static_cast<std::size_t>(j)].vec)) <=
                        1e-9 * lambda * lambda;
  std::vector<int> all(static_cast<std::size_t>(s));
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::vector<int>> cliques;
  orthogonal_cliques(adj, {}, all, {}, cliques, 4096);

  for (const auto& clique : cliques) {
    // Lattice splits off span_Z(T) iff every basis vector has integral
    // projection coefficients onto T.
    IntMatrix residual = IntMatrix::Identity(k, k);
    bool integral = true;
    for (Eigen::Index i = 0; i < k && integral; ++i)
      for (int t : clique) {
        const auto& tv = shortest[static_cast<std::size_t>(t)];
        const double c = basis.col(i).dot(tv.vec) / tv.vec.squaredNorm();
        const double rc = std::round(c);
        if (std::abs(c - rc) > 1e-8) {
          integral = false;
          break;
        }
        const auto ci = static_cast<long long>(rc);
        for (Eigen::Index row = 0; row < k; ++row)
          residual(row, i) = integer::add(residual(row, i), -integer::mul(ci, tv.coeffs(row)));
      }
    if (!integral) continue;
    const IntMatrix rest = integer::integer_column_basis(residual);
    if (rest.cols() != k - static_cast<Eigen::Index>(clique.size())) continue;
    try {
      std::vector<Eigen::VectorXd> out;
      for (int t : clique) out.push_back(shortest[static_cast<std::size_t>(t)].vec);
      const auto tail = split_off_shortest(basis * rest.cast<double>());
      out.insert(out.end(), tail.begin(), tail.end());
      return out;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotRectangular) throw;
    }
  }
  throw Error(ErrorCode::NotRectangular, "shortest vectors do not split off orthogonally");
}

}  // namespace detail

/// Orthogonal basis of a rectangular lattice (columns of `generators`),
/// found by repeatedly splitting off the shortest vectors. Output is
/// canonical: first nonzero coordinate positive, sorted by length then
/// lexicographically.
inline Eigen::MatrixXd rectangular_basis(const Eigen::MatrixXd& generators) {
  const Eigen::Index k = generators.cols();
  const auto found = detail::split_off_shortest(generators);
  Eigen::MatrixXd basis(generators.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) basis.col(j) = found[static_cast<std::size_t>(j)];

  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j)
      if (std::abs(basis.col(i).dot(basis.col(j))) > 1e-9 * basis.col(i).norm() * basis.col(j).norm())
        throw Error(ErrorCode::NotRectangular, "basis not orthogonal");
  // Unimodular change of basis from the generators.
  const Eigen::MatrixXd coeff = generators.colPivHouseholderQr().solve(basis);
  IntMatrix c(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const double rc = std::round(coeff(i, j));
      if (std::abs(coeff(i, j) - rc) > 1e-8) throw Error(ErrorCode::NotRectangular, "non-integral change of basis");
      c(i, j) = static_cast<long long>(rc);
    }
  if (std::llabs(integer::determinant(c)) != 1)
    throw Error(ErrorCode::NotRectangular, "orthogonal vectors span a proper sublattice");
  return detail::canonical_columns(basis);
}

inline UnitLattice with_rectangular_basis(UnitLattice lat) {
  lat.rect_basis = rectangular_basis(lat.generators);
  lat.certified_rectangular = true;
  return lat;
}

/// The circle traced by e^{t ad b_j} xi, t in [0, 1].
struct GeneratingCircle {
  Element direction;  // b_j
  Element e1, e2;
  double radius = 0.0;
  std::vector<int> multiples;  // alpha_l(b_j) / 2 pi per moving plane
  double max_deviation = 0.0;  // distance of the ratios from integers
};

inline std::vector<GeneratingCircle> generating_circles(const UnitLattice& lat,
                                                        const WeightDecomposition& wd,
                                                        double tol = 1e-8) {
  if (!lat.certified_rectangular)
    throw Error(ErrorCode::NotRectangular, "lattice has no certified rectangular basis");
  const double rfloor = 1e-9 * std::max(wd.xi_norm, 1e-300);
  std::vector<GeneratingCircle> out;
  for (Eigen::Index j = 0; j < lat.rect_basis.cols(); ++j) {
    GeneratingCircle c;
    c.direction = lat.element(lat.rect_basis.col(j));
    c.e1 = Element::Zero(wd.xi.size());
    c.e2 = Element::Zero(wd.xi.size());
    double r2 = 0.0;
    for (const auto& p : wd.planes) {
      if (p.radius <= rfloor) continue;
      const double ratio = p.weight.dot(lat.rect_basis.col(j)) / kTwoPi;
      const double m = std::round(ratio);
      c.max_deviation = std::max(c.max_deviation, std::abs(ratio - m));
      if (std::abs(ratio - m) > tol || std::abs(m) > 1.0)
        throw Error(ErrorCode::NotPlanar, "alpha(b)/2pi = " + std::to_string(ratio));
      c.multiples.push_back(static_cast<int>(m));
      if (m != 0.0) {
        c.e1 += p.ref_u * p.u + p.ref_v * p.v;
        c.e2 += m * (p.ref_u * p.v - p.ref_v * p.u);
        r2 += p.radius * p.radius;
      }
    }
    if (r2 == 0.0) throw Error(ErrorCode::NotPlanar, "generator does not move xi");
    c.radius = std::sqrt(r2);
    c.e1 /= c.radius;
    c.e2 /= c.radius;
    out.push_back(std::move(c));
  }
  return out;
}

/// Largest |<plane_i, plane_j>| entry between distinct circle planes.
inline double circle_plane_overlap(const LieAlgebra& alg, const std::vector<GeneratingCircle>& cs) {
  double r = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j)
      for (const Element* a : {&cs[i].e1, &cs[i].e2})
        for (const Element* b : {&cs[j].e1, &cs[j].e2}) r = std::max(r, std::abs(alg.inner(*a, *b)));
  return r;
}

/// f_*(b_i) = signs[i] * b_{perm[i]}.
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> signs;

  SignedPermutation(std::vector<int> p, std::vector<int> s) : perm(std::move(p)), signs(std::move(s)) {
    if (perm.size() != signs.size()) throw Error(ErrorCode::DimensionMismatch, "perm/signs");
    std::vector<bool> seen(perm.size(), false);
    for (int v : perm) {
      if (v < 0 || static_cast<std::size_t>(v) >= perm.size() || seen[static_cast<std::size_t>(v)])
        throw Error(ErrorCode::DimensionMismatch, "perm is not a bijection");
      seen[static_cast<std::size_t>(v)] = true;
    }
    for (int s : signs)
      if (s != 1 && s != -1) throw Error(ErrorCode::DimensionMismatch, "signs must be +-1");
  }

  std::size_t size() const { return perm.size(); }

  Eigen::MatrixXd matrix() const {
    const auto n = static_cast<Eigen::Index>(perm.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < perm.size(); ++i)
      m(perm[i], static_cast<Eigen::Index>(i)) = signs[i];
    return m;
  }
};

struct FixedSetDescription {
  int dimension = 0;
  std::vector<std::vector<int>> cycles;
  std::vector<int> cycle_signs;                 // product of signs along each cycle
  std::vector<Eigen::VectorXd> coefficients;    // fixed directions in the b-basis
  std::vector<Eigen::VectorXd> directions;      // same, in ambient coordinates
};

/// Component of the fixed set through the base point: one circle direction
/// per cycle whose sign product is +1; cycles with product -1 contribute
/// nothing (an isolated fixed point when every cycle is negative).
inline FixedSetDescription fixed_components(const SignedPermutation& sp, const Eigen::MatrixXd& basis) {
  if (static_cast<std::size_t>(basis.cols()) != sp.size())
    throw Error(ErrorCode::DimensionMismatch, "basis size");
  FixedSetDescription out;
  std::vector<bool> seen(sp.size(), false);
  for (std::size_t start = 0; start < sp.size(); ++start) {
    if (seen[start]) continue;
    std::vector<int> cycle;
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sp.size()));
    double c = 1.0;
    int product = 1;
    for (auto i = static_cast<int>(start); !seen[static_cast<std::size_t>(i)]; i = sp.perm[static_cast<std::size_t>(i)]) {
      seen[static_cast<std::size_t>(i)] = true;
      cycle.push_back(i);
      coeff(i) = c;
      c *= sp.signs[static_cast<std::size_t>(i)];
      product *= sp.signs[static_cast<std::size_t>(i)];
    }
    out.cycles.push_back(cycle);
    out.cycle_signs.push_back(product);
    if (product == 1) {
      ++out.dimension;
      out.coefficients.push_back(coeff);
      out.directions.push_back(basis * coeff);
    }
  }
  return out;
}

}  // namespace clifford
