#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace clifford;
using fixtures::TorusFixture;

namespace {

Eigen::MatrixXd cols2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, c, b, d;
  return m;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::EmptyReport;  // sentinel: nothing thrown
}

}  // namespace

TEST(WeightDecomposition, Su2SinglePlane) {
  const TorusFixture f(1, 1);
  ASSERT_EQ(f.wd.planes.size(), 1u);
  EXPECT_NEAR(f.wd.planes[0].radius, 1.0 / std::sqrt(2.0), 1e-12);
  // a is spanned by a unit vector u = sqrt(2) x_1, on which the weight is sqrt(2).
  EXPECT_NEAR(std::abs(f.wd.planes[0].weight(0)), std::sqrt(2.0), 1e-12);
}

TEST(WeightDecomposition, InvariantsAcrossCases) {
  for (const auto& [p, q] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
    const TorusFixture f(p, q);
    EXPECT_EQ(2 * static_cast<Eigen::Index>(f.wd.planes.size()) + f.wd.v0_basis.cols(), f.alg.dim());
    const WeightResiduals r = weight_residuals(f.alg, f.wd);
    EXPECT_LE(r.action, 1e-8);
    EXPECT_LE(r.orthogonality, 1e-9);
    EXPECT_LE(r.reconstruction, 1e-9);
    const CliffordModel cm = clifford_reduction(f.wd);
    EXPECT_EQ(static_cast<Eigen::Index>(cm.circles.size()), f.a.rank);
    EXPECT_GT(weight_class_separation(cm), 1e-6);
  }
}

TEST(CliffordReduction, SynchronizedPlanesMerge) {
  WeightDecomposition wd;
  const Eigen::Index d = 5;
  wd.torus_basis = Eigen::MatrixXd::Identity(d, 2);
  wd.v0_basis = Eigen::MatrixXd(Element::Unit(d, 4));
  wd.xi = Element::Zero(d);
  auto plane = [&](Eigen::Index iu, Eigen::Index iv, double w0, double w1, double radius) {
    WeightPlane p;
    p.u = Element::Unit(d, iu);
    p.v = Element::Unit(d, iv);
    p.weight = Eigen::RowVector2d(w0, w1);
    p.radius = radius;
    p.ref_u = radius;
    wd.xi += radius * p.u;
    return p;
  };
  wd.planes.push_back(plane(0, 1, 1.0, 0.0, 0.3));
  wd.planes.push_back(plane(2, 3, -1.0, 0.0, 0.4));
  wd.xi += 0.2 * Element::Unit(d, 4);
  wd.xi_norm = wd.xi.norm();
  const CliffordModel cm = clifford_reduction(wd);
  ASSERT_EQ(cm.circles.size(), 1u);
  EXPECT_NEAR(cm.circles[0].radius, 0.5, 1e-12);
  EXPECT_GT(cm.circles[0].weight_class(0), 0.0);
  EXPECT_NEAR(cm.center(4), 0.2, 1e-12);

  // A zero-weight plane is absorbed into the center.
  wd.planes.push_back(plane(4, 4, 0.0, 0.0, 0.0));
  EXPECT_EQ(clifford_reduction(wd).circles.size(), 1u);
}

TEST(UnitLattice, Su2Period) {
  const TorusFixture f(1, 1);
  ASSERT_EQ(f.lattice.rank(), 1);
  EXPECT_NEAR(std::abs(f.lattice.generators(0, 0)), kTwoPi / std::sqrt(2.0), 1e-12);
  EXPECT_LE(f.lattice.membership_residual, 1e-8);
  // Nothing shorter returns: half the period maps xi to -xi.
  const Element half = f.lattice.element(f.lattice.generators.col(0) / 2.0);
  EXPECT_NEAR(f.alg.norm(exp_ad_apply(f.alg, half, 1.0, f.t.xi) + f.t.xi), 0.0, 1e-12);
}

TEST(UnitLattice, RankEqualsDimA) {
  for (const auto& [p, q] : {std::pair{2, 2}, std::pair{2, 4}, std::pair{3, 3}}) {
    const TorusFixture f(p, q);
    EXPECT_EQ(f.lattice.rank(), f.a.rank);
    EXPECT_EQ(linalg::numerical_rank(f.lattice.generators), f.a.rank);
    EXPECT_LE(f.lattice.membership_residual, 1e-8);
    EXPECT_TRUE(f.lattice.certified_rectangular);
    EXPECT_LT((f.lattice.generators - f.lattice.scale * f.lattice.integer_generators.cast<double>()).norm(), 1e-12);
  }
}

TEST(ShortestVectors, Examples) {
  EXPECT_EQ(shortest_vectors_oracle(Eigen::MatrixXd::Identity(2, 2), 1.0).size(), 4u);
  const Eigen::MatrixXd hex = cols2(1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0);
  EXPECT_EQ(shortest_vectors_oracle(hex, 1.0).size(), 6u);
  const auto rect = shortest_vectors_oracle(cols2(1.0, 0.0, 0.0, 2.0), 1.5);
  ASSERT_EQ(rect.size(), 2u);
  for (const auto& v : rect) EXPECT_NEAR(std::abs(v.vec(0)), 1.0, 1e-15);
  EXPECT_EQ(code_of([] { shortest_vectors_oracle(Eigen::MatrixXd::Identity(7, 7), 1.0); }), ErrorCode::RankTooLarge);
}

TEST(RectangularBasis, Examples) {
  const Eigen::MatrixXd r = rectangular_basis(cols2(1.0, 0.0, 0.0, 2.0));
  EXPECT_LT((r - cols2(1.0, 0.0, 0.0, 2.0)).norm(), 1e-12);
  // Skewed generators of the same lattice.
  const Eigen::MatrixXd skew = rectangular_basis(cols2(1.0, 0.0, 3.0, 2.0));
  EXPECT_LT((skew - cols2(1.0, 0.0, 0.0, 2.0)).norm(), 1e-12);
  const Eigen::MatrixXd hex = cols2(1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0);
  EXPECT_EQ(code_of([&] { rectangular_basis(hex); }), ErrorCode::NotRectangular);
}

TEST(RectangularBasis, SquareLatticeHasUniqueOrthogonalBasis) {
  const Eigen::MatrixXd r = rectangular_basis(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_LT((r - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-12);
  // Oracle: every orthogonal pair of lattice vectors of norm <= 2 that
  // generates Z^2 is +-e1, +-e2.
  const auto vecs = shortest_vectors_oracle(Eigen::MatrixXd::Identity(2, 2), 2.0);
  int bases = 0;
  for (const auto& a : vecs)
    for (const auto& b : vecs) {
      if (std::abs(a.vec.dot(b.vec)) > 1e-12) continue;
      IntMatrix m(2, 2);
      m << a.coeffs(0), b.coeffs(0), a.coeffs(1), b.coeffs(1);
      if (std::llabs(integer::determinant(m)) != 1) continue;
      ++bases;
      EXPECT_NEAR(a.norm, 1.0, 1e-15);
      EXPECT_NEAR(b.norm, 1.0, 1e-15);
    }
  EXPECT_EQ(bases, 8);  // 4 choices of a, 2 of b
}

TEST(RectangularBasis, EqualLengthsInHigherRank) {
  // Z^3 in a rotated frame, mixed by a unimodular matrix.
  Eigen::MatrixXd q = Eigen::MatrixXd(Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix());
  Eigen::Matrix3d u;
  u << 1, 1, 0, 0, 1, 1, 0, 0, 1;
  const Eigen::MatrixXd r = rectangular_basis(q * u);
  EXPECT_LT((r.transpose() * r - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-10);
}

TEST(GeneratingCircles, Su4) {
  const TorusFixture f(2, 2);
  const auto circles = generating_circles(f.lattice, f.wd);
  ASSERT_EQ(circles.size(), 2u);
  EXPECT_LE(circle_plane_overlap(f.alg, circles), 1e-9);
  for (const auto& c : circles) {
    EXPECT_LE(c.max_deviation, 1e-8);
    for (int m : c.multiples) EXPECT_LE(std::abs(m), 1);
    EXPECT_NEAR(f.alg.norm(c.e1), 1.0, 1e-12);
    EXPECT_NEAR(f.alg.inner(c.e1, c.e2), 0.0, 1e-12);
  }
  const TorusFixture g(1, 1);
  const auto one = generating_circles(g.lattice, g.wd);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0].radius, 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(GeneratingCircles, NonUnitDirectionIsNotPlanar) {
  TorusFixture f(2, 2);
  UnitLattice doubled = f.lattice;
  doubled.rect_basis.col(0) *= 0.5;
  EXPECT_EQ(code_of([&] { generating_circles(doubled, f.wd); }), ErrorCode::NotPlanar);
}

TEST(TorusChecks, EqualsClifford) {
  for (const auto& [p, q] : {std::pair{1, 1}, std::pair{2, 2}}) {
    const TorusFixture f(p, q);
    const CliffordModel cm = clifford_reduction(f.wd);
    EXPECT_TRUE(torus_equals_clifford_check(f.a, cm, f.lattice).passed);
    CliffordModel dup = cm;
    dup.circles.push_back(dup.circles.back());
    EXPECT_FALSE(torus_equals_clifford_check(f.a, dup, f.lattice).passed);
  }
}

TEST(TorusChecks, ThirdPowerSpan) {
  const TorusFixture s(1, 1);
  const CheckReport one = third_power_span_check(s.alg, s.t, s.a, s.wd, s.a.basis.col(0));
  EXPECT_TRUE(one.passed);
  EXPECT_EQ(one.checked, 1);

  const TorusFixture f(2, 2);
  Rng rng(3);
  const CheckReport two = third_power_span_check(f.alg, f.t, f.a, f.wd, f.a.basis * detail::gaussian_vector(2, rng));
  EXPECT_TRUE(two.passed);
  EXPECT_LE(two.checked, 2);

  // Equal speeds on both circles.
  const CliffordModel cm = clifford_reduction(f.wd);
  const Eigen::VectorXd h = (cm.circles[0].weight_class / cm.circles[0].weight_class.squaredNorm() +
                             cm.circles[1].weight_class / cm.circles[1].weight_class.squaredNorm())
                                .transpose();
  EXPECT_EQ(code_of([&] { third_power_span_check(f.alg, f.t, f.a, f.wd, f.a.basis * h); }), ErrorCode::NotDense);
}

TEST(FixedComponents, LemmaThreeExamples) {
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_EQ(fixed_components(SignedPermutation({0, 1, 2}, {1, 1, 1}), b).dimension, 3);
  const auto cyc = fixed_components(SignedPermutation({1, 2, 0}, {1, 1, 1}), b);
  ASSERT_EQ(cyc.dimension, 1);
  EXPECT_LT((cyc.directions[0] - Eigen::Vector3d(1, 1, 1)).norm(), 1e-15);
  EXPECT_EQ(fixed_components(SignedPermutation({1, 2, 0}, {1, 1, -1}), b).dimension, 0);
  EXPECT_THROW(SignedPermutation({0, 0, 1}, {1, 1, 1}), Error);
  EXPECT_THROW(SignedPermutation({0, 1}, {1, 2}), Error);
}

TEST(FixedComponents, DirectionsAreFixed) {
  const SignedPermutation sp({2, 0, 1, 3}, {-1, 1, -1, -1});
  const auto fs = fixed_components(sp, Eigen::MatrixXd::Identity(4, 4));
  const Eigen::MatrixXd m = sp.matrix();
  for (const auto& c : fs.coefficients) EXPECT_LT((m * c - c).norm(), 1e-15);
  EXPECT_EQ(fs.dimension, 1);
}
