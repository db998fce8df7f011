#pragma once

// Checks that the maximal torus through xi is the Clifford torus of its
// weight model, and that iterated third derivatives span its tangent space.

#include "clifford/check_report.hpp"
#include "clifford/errors.hpp"
#include "clifford/lattice.hpp"
#include "clifford/orbit.hpp"
#include "clifford/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clifford {

/// Number of Clifford circles == dim a == rank of the unit lattice, and the
/// circle weight classes are linearly independent.
inline CheckReport torus_equals_clifford_check(const AbelianSubspace& a, const CliffordModel& cm,
                                               const UnitLattice& lat) {
  CheckReport r;
  r.name = "torus_equals_clifford";
  const auto circles = static_cast<Eigen::Index>(cm.circles.size());
  Eigen::MatrixXd classes(circles, a.rank);
  for (Eigen::Index i = 0; i < circles; ++i) classes.row(i) = cm.circles[static_cast<std::size_t>(i)].weight_class;
  const Eigen::Index class_rank = circles == 0 ? 0 : linalg::numerical_rank(classes);
  const Eigen::Index lattice_rank = lat.rank() == 0 ? 0 : linalg::numerical_rank(lat.generators);
  r.checked = static_cast<int>(circles);
  r.passed = circles == a.rank && lattice_rank == a.rank && class_rank == circles;
  r.max_residual = lat.membership_residual;
  r.detail = "circles=" + std::to_string(circles) + " rank=" + std::to_string(a.rank) +
             " lattice_rank=" + std::to_string(lattice_rank) +
             " class_rank=" + std::to_string(class_rank);
  return r;
}

/// Starting from H in a, solve [H_{l+1}, xi] = -ad(H_l)^3 xi inside a and
/// collect the velocities [H_l, xi]. Passes when they span the full tangent
/// space of the Clifford model (one direction per circle). Requires the
/// circle weights to take distinct nonzero absolute values on H.
inline CheckReport third_power_span_check(const LieAlgebra& alg, const Tripotent& t,
                                          const AbelianSubspace& a, const WeightDecomposition& wd,
                                          const Element& h, int max_iter = 16) {
  const CliffordModel cm = clifford_reduction(wd);
  const Eigen::VectorXd hc = a.basis.transpose() * alg.gram().diagonal().cwiseProduct(h);
  std::vector<double> vals;
  for (const auto& c : cm.circles) vals.push_back(std::abs(c.weight_class.dot(hc)));
  const double vmax = vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] <= 1e-6 * std::max(vmax, 1e-300))
      throw Error(ErrorCode::NotDense, "H is annihilated by a circle weight");
    for (std::size_t j = i + 1; j < vals.size(); ++j)
      if (std::abs(vals[i] - vals[j]) <= 1e-6 * vmax)
        throw Error(ErrorCode::NotDense, "H has equal speeds on two circles");
  }

  const auto target = static_cast<Eigen::Index>(cm.circles.size());
  Frame tangent(alg.dim(), a.rank);
  for (Eigen::Index i = 0; i < a.rank; ++i) tangent.col(i) = alg.bracket(a.basis.col(i), t.xi);
  const Eigen::MatrixXd te = alg.to_euclid(tangent);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> solver(te);

  CheckReport r;
  r.name = "third_power_span";
  Element cur = h / alg.norm(h);
  Eigen::MatrixXd velocities(alg.dim(), 0);
  for (int it = 0; it < max_iter; ++it) {
    const Element v = alg.bracket(cur, t.xi);
    Eigen::MatrixXd grown(alg.dim(), velocities.cols() + 1);
    grown << velocities, alg.to_euclid(v) / alg.norm(v);
    velocities = grown;
    r.checked = it + 1;
    if (linalg::numerical_rank(velocities, 1e-8) >= target) break;
    // Speeds grow like the cube each step; only the direction matters.
    const Element d3 = alg.bracket(cur, alg.bracket(cur, v));
    const Eigen::VectorXd rhs = alg.to_euclid(Element(-d3));
    const Eigen::VectorXd coeff = solver.solve(rhs);
    r.max_residual = std::max(r.max_residual, (te * coeff - rhs).norm() / std::max(rhs.norm(), 1e-300));
    const Element next = a.basis * coeff;
    const double nn = alg.norm(next);
    if (nn == 0.0) break;
    cur = next / nn;
  }
  const Eigen::Index span_rank = linalg::numerical_rank(velocities, 1e-8);
  r.passed = span_rank == target && r.max_residual <= 1e-8;
  r.detail = "span_rank=" + std::to_string(span_rank) + " circles=" + std::to_string(target);
  return r;
}

}  // namespace clifford
