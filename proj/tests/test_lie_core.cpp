#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace clifford;
using fixtures::commutator;

namespace {

const std::complex<double> I(0.0, 1.0);

Eigen::MatrixXcd pauli(int j) {
  Eigen::MatrixXcd s(2, 2);
  if (j == 1) s << 0, 1, 1, 0;
  if (j == 2) s << 0, -I, I, 0;
  if (j == 3) s << 1, 0, 0, -1;
  return s;
}

}  // namespace

TEST(BuildAlgebra, Dimensions) {
  EXPECT_EQ(build_algebra(Family::SU, 2).dim(), 3);
  EXPECT_EQ(build_algebra(Family::SU, 4).dim(), 15);
  EXPECT_EQ(build_algebra(Family::SO, 5).dim(), 10);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(build_algebra(Family::SP, n).dim(), n * (2 * n + 1));
}

TEST(BuildAlgebra, RejectsSmallParameters) {
  EXPECT_THROW(build_algebra(Family::SU, 1), Error);
  EXPECT_THROW(build_algebra(Family::SO, 2), Error);
  EXPECT_THROW(build_algebra(Family::SP, 0), Error);
  EXPECT_THROW(parse_family("G2"), Error);
  EXPECT_EQ(parse_family("SO"), Family::SO);
}

TEST(BuildAlgebra, Su2IsHalfPauli) {
  const LieAlgebra alg = build_algebra(Family::SU, 2);
  for (int j = 1; j <= 3; ++j) {
    const Eigen::MatrixXcd x = 0.5 * I * pauli(j);
    EXPECT_LT((alg.matrices()[static_cast<std::size_t>(j - 1)] - x).norm(), 1e-15);
    EXPECT_NEAR(alg.gram()(j - 1, j - 1), 0.5, 1e-15);
  }
}

TEST(Bracket, Su2Pauli) {
  const LieAlgebra alg = build_algebra(Family::SU, 2);
  const Element x1 = Element::Unit(3, 0), x2 = Element::Unit(3, 1), x3 = Element::Unit(3, 2);
  EXPECT_LT((alg.bracket(x1, x2) + x3).norm(), 1e-14);
  EXPECT_LT(alg.bracket(x1, x1).norm(), 1e-15);
}

TEST(Bracket, So3Rotations) {
  const LieAlgebra alg = build_algebra(Family::SO, 3);
  // Basis order L_12, L_13, L_23.
  const Element l12 = Element::Unit(3, 0), l13 = Element::Unit(3, 1), l23 = Element::Unit(3, 2);
  EXPECT_LT((alg.bracket(l12, l23) - l13).norm(), 1e-14);
}

class EveryFamily : public ::testing::TestWithParam<std::pair<Family, int>> {};

TEST_P(EveryFamily, BracketMatchesMatrixCommutator) {
  const auto [family, n] = GetParam();
  const LieAlgebra alg = build_algebra(family, n);
  Rng rng(3);
  for (int s = 0; s < 10; ++s) {
    const Element x = alg.gaussian(rng), y = alg.gaussian(rng);
    const Eigen::MatrixXcd oracle = commutator(alg.to_matrix(x), alg.to_matrix(y));
    EXPECT_LT((alg.to_matrix(alg.bracket(x, y)) - oracle).norm(), 1e-10 * (1.0 + oracle.norm()));
  }
}

TEST_P(EveryFamily, JacobiOnRandomTriples) {
  const auto [family, n] = GetParam();
  const LieAlgebra alg = build_algebra(family, n);
  Rng rng(5);
  for (int s = 0; s < 100; ++s) {
    const Element x = alg.gaussian(rng), y = alg.gaussian(rng), z = alg.gaussian(rng);
    const Element j = alg.bracket(x, alg.bracket(y, z)) + alg.bracket(y, alg.bracket(z, x)) +
                      alg.bracket(z, alg.bracket(x, y));
    EXPECT_LE(alg.norm(j), 1e-10 * (alg.norm(x) * alg.norm(y) * alg.norm(z) + 1.0));
  }
}

TEST_P(EveryFamily, AdIsSkewForTraceForm) {
  const auto [family, n] = GetParam();
  const LieAlgebra alg = build_algebra(family, n);
  Rng rng(9);
  const Element x = alg.gaussian(rng);
  const Operator ad = alg.ad(x);
  EXPECT_LE((ad.transpose() * alg.gram() + alg.gram() * ad).norm(), 1e-10);
  EXPECT_LT(alg.ad(x).operator*(x).norm(), 1e-12);
  EXPECT_EQ(alg.ad(Element::Zero(alg.dim())).norm(), 0.0);
}

TEST_P(EveryFamily, ExponentialMatchesMatrixConjugation) {
  const auto [family, n] = GetParam();
  const LieAlgebra alg = build_algebra(family, n);
  Rng rng(13);
  for (int s = 0; s < 3; ++s) {
    const Element v = alg.gaussian(rng), w = alg.gaussian(rng);
    const double t = 0.7 + s;
    const Element got = exp_ad_apply(alg, v, t, w);
    const Element oracle = alg.from_matrix(fixtures::conjugate_by_exp(alg.to_matrix(v), t, alg.to_matrix(w)));
    EXPECT_LT(alg.norm(got - oracle), 1e-9 * alg.norm(w));
    EXPECT_NEAR(alg.norm(got), alg.norm(w), 1e-9);
    const Element two_step = exp_ad_apply(alg, v, 0.4, exp_ad_apply(alg, v, t, w));
    EXPECT_LT(alg.norm(two_step - exp_ad_apply(alg, v, t + 0.4, w)), 1e-9);
  }
  const Element w = alg.gaussian(rng);
  EXPECT_LT(alg.norm(exp_ad_apply(alg, alg.gaussian(rng), 0.0, w) - w), 1e-14);
}

TEST_P(EveryFamily, StructureValidates) {
  const auto [family, n] = GetParam();
  const ValidationReport v = validate_structure(build_algebra(family, n));
  EXPECT_TRUE(v.passed());
  EXPECT_EQ(v.antisymmetry_residual, 0.0);
}

INSTANTIATE_TEST_SUITE_P(Catalog, EveryFamily,
                         ::testing::Values(std::pair{Family::SU, 2}, std::pair{Family::SU, 3},
                                           std::pair{Family::SU, 5}, std::pair{Family::SO, 3},
                                           std::pair{Family::SO, 6}, std::pair{Family::SP, 1},
                                           std::pair{Family::SP, 2}));

TEST(ExpAd, Su2ClosedFormRotation) {
  const LieAlgebra alg = build_algebra(Family::SU, 2);
  const Element x1 = Element::Unit(3, 0), x2 = Element::Unit(3, 1), x3 = Element::Unit(3, 2);
  for (double t : {0.3, 1.0, 2.5}) {
    const Element expected = std::cos(t) * x1 - std::sin(t) * x2;
    EXPECT_LT((exp_ad_apply(alg, x3, t, x1) - expected).norm(), 1e-12);
  }
  EXPECT_LT((exp_ad_apply(alg, x3, 2.0 * std::numbers::pi, x1) - x1).norm(), 1e-12);
  const AdFlow flow(alg, x3);
  EXPECT_FALSE(flow.used_fallback());
  EXPECT_LE(flow.schur_residual(), 1e-10);
}

TEST(Killing, MatchesTraceFormMultiples) {
  // Killing = c * tr(XY) with c = 2n (su), n-2 (so), 2n+2 (sp); the trace
  // form is -tr, so K = -c G.
  const std::vector<std::tuple<Family, int, double>> cases = {
      {Family::SU, 2, 4.0}, {Family::SU, 3, 6.0}, {Family::SO, 5, 3.0}, {Family::SP, 2, 6.0}};
  for (const auto& [f, n, c] : cases) {
    const LieAlgebra alg = build_algebra(f, n);
    EXPECT_LT((killing_form(alg) + c * alg.gram()).norm(), 1e-10) << to_string(f) << n;
  }
}

TEST(Validation, Su3Passes) {
  const ValidationReport v = validate_structure(build_algebra(Family::SU, 3));
  EXPECT_LE(v.jacobi_relative(), 1e-12);
  EXPECT_TRUE(v.killing_negative_definite);
  EXPECT_TRUE(v.passed());
}

TEST(Validation, PerturbedConstantsFailJacobi) {
  const LieAlgebra base = build_algebra(Family::SU, 3);
  auto ad = base.ad_basis();
  // c_{01}^{2} += 1e-3 keeping antisymmetry: ad[i](k, j) = c_{ij}^k.
  ad[0](2, 1) += 1e-3;
  ad[1](2, 0) -= 1e-3;
  const LieAlgebra bent(base.family(), base.parameter(), base.labels(), base.matrices(), base.gram(), ad);
  const ValidationReport v = validate_structure(bent);
  EXPECT_FALSE(v.jacobi_ok);
  EXPECT_FALSE(v.passed());
}

TEST(Linalg, PfaffianFourByFour) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  const double a01 = 1.3, a02 = -0.4, a03 = 2.1, a12 = 0.7, a13 = -1.1, a23 = 0.9;
  a(0, 1) = a01; a(0, 2) = a02; a(0, 3) = a03; a(1, 2) = a12; a(1, 3) = a13; a(2, 3) = a23;
  a -= Eigen::MatrixXd(a.transpose());
  EXPECT_NEAR(linalg::pfaffian(a), a01 * a23 - a02 * a13 + a03 * a12, 1e-12);
  EXPECT_NEAR(linalg::pfaffian(a) * linalg::pfaffian(a), a.determinant(), 1e-10);
  EXPECT_EQ(linalg::pfaffian(Eigen::MatrixXd::Zero(3, 3)), 0.0);
}

TEST(Linalg, SkewBlocksReconstruct) {
  Rng rng(21);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(7, 7);
  for (Eigen::Index i = 0; i < 7; ++i)
    for (Eigen::Index j = 0; j < 7; ++j) m(i, j) = nd(rng);
  m = m - Eigen::MatrixXd(m.transpose());
  const auto sb = linalg::skew_blocks(m);
  EXPECT_EQ(sb.plane_count(), 3);
  EXPECT_EQ(sb.kernel_dim, 1);
  EXPECT_LT(sb.residual, 1e-12);
  for (Eigen::Index k = 0; k < sb.plane_count(); ++k)
    EXPECT_LT((m * sb.u(k) - sb.angles[static_cast<std::size_t>(k)] * sb.v(k)).norm(), 1e-10);
}
