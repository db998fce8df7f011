#pragma once

// Exact integer tools behind the unit lattice: continued-fraction rational
// reconstruction, Smith normal form with transforms, and lattice bases from
// generating sets. All arithmetic is overflow-checked.

#include "clifford/errors.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <utility>

namespace clifford {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

namespace integer {

inline long long mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::IntegerOverflow, "multiply");
  return r;
}

inline long long add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::IntegerOverflow, "add");
  return r;
}

inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Best continued-fraction convergent p/q of x with q <= max_den and
/// |x - p/q| <= tol; nullopt when no convergent qualifies.
inline std::optional<Rational> rational_reconstruct(double x, long long max_den = 4096,
                                                    double tol = 1e-8) {
  if (!std::isfinite(x)) return std::nullopt;
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(r);
    if (std::abs(fl) > 9e15) return std::nullopt;
    const auto a = static_cast<long long>(fl);
    const long long p2 = add(mul(a, p1), p0), q2 = add(mul(a, q1), q0);
    if (q2 > max_den) break;
    if (std::abs(x - static_cast<double>(p2) / static_cast<double>(q2)) <= tol)
      return Rational{p2, q2};
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = r - fl;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

struct SmithForm {
  IntMatrix U;  // m x m unimodular
  IntMatrix V;  // n x n unimodular
  IntMatrix D;  // U * A * V, diagonal with d_1 | d_2 | ..., d_i >= 0
  Eigen::Index rank = 0;
};

inline SmithForm smith_normal_form(const IntMatrix& a) {
  const Eigen::Index m = a.rows(), n = a.cols();
  SmithForm s{IntMatrix::Identity(m, m), IntMatrix::Identity(n, n), a, 0};
  IntMatrix& d = s.D;

  auto row_axpy = [&](Eigen::Index dst, Eigen::Index src, long long q) {  // row_dst -= q row_src
    for (Eigen::Index j = 0; j < n; ++j) d(dst, j) = add(d(dst, j), -mul(q, d(src, j)));
    for (Eigen::Index j = 0; j < m; ++j) s.U(dst, j) = add(s.U(dst, j), -mul(q, s.U(src, j)));
  };
  auto col_axpy = [&](Eigen::Index dst, Eigen::Index src, long long q) {  // col_dst -= q col_src
    for (Eigen::Index i = 0; i < m; ++i) d(i, dst) = add(d(i, dst), -mul(q, d(i, src)));
    for (Eigen::Index i = 0; i < n; ++i) s.V(i, dst) = add(s.V(i, dst), -mul(q, s.V(i, src)));
  };

  for (Eigen::Index t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      Eigen::Index pi = -1, pj = -1;
      long long best = 0;
      for (Eigen::Index i = t; i < m; ++i)
        for (Eigen::Index j = t; j < n; ++j)
          if (d(i, j) != 0 && (pi < 0 || std::llabs(d(i, j)) < best)) {
            best = std::llabs(d(i, j));
            pi = i;
            pj = j;
          }
      if (pi < 0) {
        s.rank = t;
        return s;
      }
      d.row(t).swap(d.row(pi));
      s.U.row(t).swap(s.U.row(pi));
      d.col(t).swap(d.col(pj));
      s.V.col(t).swap(s.V.col(pj));

      bool clean = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        row_axpy(i, t, floor_div(d(i, t), d(t, t)));
        if (d(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        col_axpy(j, t, floor_div(d(t, j), d(t, t)));
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      Eigen::Index bad = -1;
      for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      row_axpy(t, bad, -1);  // row_t += row_bad, then re-reduce
    }
    if (d(t, t) < 0) {
      d.row(t) = -d.row(t);
      s.U.row(t) = -s.U.row(t);
    }
  }
  s.rank = 0;
  for (Eigen::Index t = 0; t < std::min(m, n); ++t)
    if (d(t, t) != 0) ++s.rank;
  return s;
}

/// Basis (columns) of the Z-span of the columns of gens, by column echelon
/// reduction with unimodular column operations.
inline IntMatrix integer_column_basis(IntMatrix g) {
  const Eigen::Index rows = g.rows(), cols = g.cols();
  Eigen::Index pivot_col = 0;
  for (Eigen::Index r = 0; r < rows && pivot_col < cols; ++r) {
    for (;;) {
      Eigen::Index best = -1;
      for (Eigen::Index j = pivot_col; j < cols; ++j)
        if (g(r, j) != 0 && (best < 0 || std::llabs(g(r, j)) < std::llabs(g(r, best)))) best = j;
      if (best < 0) break;
      g.col(pivot_col).swap(g.col(best));
      bool done = true;
      for (Eigen::Index j = pivot_col + 1; j < cols; ++j) {
        if (g(r, j) == 0) continue;
        const long long q = floor_div(g(r, j), g(r, pivot_col));
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = add(g(i, j), -mul(q, g(i, pivot_col)));
        if (g(r, j) != 0) done = false;
      }
      if (done) {
        ++pivot_col;
        break;
      }
    }
  }
  return g.leftCols(pivot_col);
}

inline long long determinant(IntMatrix a) {
  // Bareiss fraction-free elimination.
  const Eigen::Index n = a.rows();
  if (n == 0) return 1;
  long long sign = 1, prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index sw = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          sw = i;
          break;
        }
      if (sw < 0) return 0;
      a.row(k).swap(a.row(sw));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        a(i, j) = add(mul(a(i, j), a(k, k)), -mul(a(i, k), a(k, j))) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

}  // namespace integer
}  // namespace clifford
