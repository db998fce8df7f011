#pragma once

#include "clifford/clifford.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <complex>

namespace fixtures {

using namespace clifford;

inline Tripotent su_tripotent(const LieAlgebra& alg, int p, int q) {
  return make_tripotent(alg, alg.from_matrix(xi_matrix(su_case(p, q))));
}

inline Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return a * b - b * a;
}

/// Ad(exp(tV)) W computed with dense complex matrix exponentials.
inline Eigen::MatrixXcd conjugate_by_exp(const Eigen::MatrixXcd& v, double t, const Eigen::MatrixXcd& w) {
  const Eigen::MatrixXcd g = (t * v).exp();
  return g * w * g.adjoint();
}

/// Everything up to the unit lattice for one SU(p,q) case.
struct TorusFixture {
  LieAlgebra alg;
  Tripotent t;
  CartanSplit split;
  AbelianSubspace a;
  WeightDecomposition wd;
  UnitLattice lattice;

  TorusFixture(int p, int q, std::uint64_t seed = 11)
      : alg(build_algebra(Family::SU, p + q)),
        t(su_tripotent(alg, p, q)),
        split(cartan_split(alg, t)),
        a(maximal_abelian(alg, split, seed)),
        wd(weight_decomposition(alg, a, t, seed + 1)),
        lattice(with_rectangular_basis(unit_lattice(alg, wd))) {}
};

}  // namespace fixtures
