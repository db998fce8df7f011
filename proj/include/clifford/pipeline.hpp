#pragma once

// Seed cases, the end-to-end pipeline, and report emission.

#include "clifford/errors.hpp"
#include "clifford/lattice.hpp"
#include "clifford/lie_algebra.hpp"
#include "clifford/orbit.hpp"
#include "clifford/strong_roots.hpp"
#include "clifford/torus.hpp"
#include "clifford/weights.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace clifford {

enum class XiRecipe { DiagBlock, RotationGenerator, SpBlock };

struct CaseSpec {
  Family family = Family::SU;
  XiRecipe recipe = XiRecipe::DiagBlock;
  int p = 1, q = 1;  // DiagBlock
  int n = 2;         // RotationGenerator (so(n)), SpBlock (sp(n))
  std::uint64_t seed = 1;
  Tolerances tol;

  std::string id() const {
    switch (family) {
      case Family::SU: return "SU(" + std::to_string(p) + "," + std::to_string(q) + ")";
      case Family::SO: return "SO(" + std::to_string(n) + ")";
      case Family::SP: return "SP(" + std::to_string(n) + ")";
    }
    return "?";
  }
  /// The n of su(n), so(n), sp(n).
  int algebra_parameter() const { return family == Family::SU ? p + q : n; }
  int matrix_size() const { return family == Family::SP ? 2 * n : algebra_parameter(); }
  Eigen::Index algebra_dim() const {
    const Eigen::Index m = algebra_parameter();
    switch (family) {
      case Family::SU: return m * m - 1;
      case Family::SO: return m * (m - 1) / 2;
      case Family::SP: return m * (2 * m + 1);
    }
    return 0;
  }
  std::vector<std::pair<std::string, int>> params() const {
    if (family == Family::SU) return {{"p", p}, {"q", q}};
    return {{"n", n}};
  }
};

inline CaseSpec su_case(int p, int q, std::uint64_t seed = 1) {
  if (p < 1 || q < 1) throw Error(ErrorCode::ParameterTooSmall, "SU needs p, q >= 1");
  CaseSpec c;
  c.family = Family::SU;
  c.recipe = XiRecipe::DiagBlock;
  c.p = p;
  c.q = q;
  c.seed = seed;
  return c;
}

inline CaseSpec so_case(int n, std::uint64_t seed = 1) {
  if (n < 3) throw Error(ErrorCode::ParameterTooSmall, "SO needs n >= 3");
  CaseSpec c;
  c.family = Family::SO;
  c.recipe = XiRecipe::RotationGenerator;
  c.n = n;
  c.seed = seed;
  return c;
}

inline CaseSpec sp_case(int n, std::uint64_t seed = 1) {
  if (n < 1) throw Error(ErrorCode::ParameterTooSmall, "SP needs n >= 1");
  CaseSpec c;
  c.family = Family::SP;
  c.recipe = XiRecipe::SpBlock;
  c.n = n;
  c.seed = seed;
  return c;
}

/// SU(p,q) with p <= q, p+q <= 6; SO(n), 4 <= n <= 8; SP(n), n <= 3;
/// restricted to algebra dimension <= max_dim.
inline std::vector<CaseSpec> catalog_cases(int max_dim = 35, std::uint64_t seed = 1) {
  if (max_dim < 3) throw Error(ErrorCode::ParameterTooSmall, "max_dim >= 3");
  std::vector<CaseSpec> all;
  for (int s = 2; s <= 6; ++s)
    for (int p = 1; 2 * p <= s; ++p) all.push_back(su_case(p, s - p, seed));
  for (int n = 4; n <= 8; ++n) all.push_back(so_case(n, seed));
  for (int n = 1; n <= 3; ++n) all.push_back(sp_case(n, seed));
  std::vector<CaseSpec> out;
  for (const auto& c : all)
    if (c.algebra_dim() <= max_dim) out.push_back(c);
  return out;
}

inline Eigen::MatrixXcd xi_matrix(const CaseSpec& c) {
  const Eigen::Index m = c.matrix_size();
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(m, m);
  switch (c.recipe) {
    case XiRecipe::DiagBlock:
      for (Eigen::Index i = 0; i < m; ++i)
        x(i, i) = {0.0, i < c.p ? static_cast<double>(c.q) / static_cast<double>(m)
                                : -static_cast<double>(c.p) / static_cast<double>(m)};
      break;
    case XiRecipe::RotationGenerator:
      x(0, 1) = 1.0;
      x(1, 0) = -1.0;
      break;
    case XiRecipe::SpBlock:
      for (Eigen::Index i = 0; i < c.n; ++i) {
        x(i, i) = {0.0, 0.5};
        x(c.n + i, c.n + i) = {0.0, -0.5};
      }
      break;
  }
  return x;
}

struct CaseResiduals {
  std::optional<double> jacobi, tripotent, lemma7, symmetry, sl2, commutation, cartan, roots,
      strong_orth;
};

struct CaseReport {
  std::string case_id;
  Family family = Family::SU;
  std::vector<std::pair<std::string, int>> params;
  Eigen::Index dim = 0;
  std::optional<int> rank, circles, so_root_count, noncompact_count, compact_count;
  bool lattice_rectangular = false;
  CaseResiduals residuals;
  double duration_ms = 0.0;
  bool thm2 = false, hc = false, rect_corollary = false;
  std::vector<std::string> failures;

  bool passed() const { return thm2 && hc && rect_corollary; }
};

namespace detail {

inline std::uint64_t stage_seed(std::uint64_t seed, std::uint64_t stage) {
  return seed * 1000003ULL + stage * 7919ULL;
}

}  // namespace detail

/// Runs every stage, recording failures instead of aborting.
inline CaseReport run_case(const CaseSpec& spec, int lemma7_samples = 100, int symmetry_samples = 100) {
  const auto start = std::chrono::steady_clock::now();
  CaseReport rep;
  rep.case_id = spec.id();
  rep.family = spec.family;
  rep.params = spec.params();
  const double ltol = 1e-8;
  auto fail = [&rep](const std::string& stage, const std::string& what) {
    rep.failures.push_back(stage + ": " + what);
  };

  bool thm2 = true, hc = true;
  try {
    const LieAlgebra alg = build_algebra(spec.family, spec.algebra_parameter());
    rep.dim = alg.dim();
    const ValidationReport v = validate_structure(alg, detail::stage_seed(spec.seed, 0));
    rep.residuals.jacobi = v.jacobi_relative();
    if (!v.passed()) {
      fail("structure", "structure constants failed validation");
      thm2 = hc = false;
    }

    const Tripotent t = make_tripotent(alg, alg.from_matrix(xi_matrix(spec)), spec.tol.algebraic);
    rep.residuals.tripotent = t.residual;
    const CartanSplit split = cartan_split(alg, t);
    if (split_residuals(alg, split).max() > spec.tol.algebraic) {
      fail("cartan_split", "split residual too large");
      thm2 = false;
    }
    const AbelianSubspace a = maximal_abelian(alg, split, detail::stage_seed(spec.seed, 1));
    rep.rank = static_cast<int>(a.rank);

    // Third-derivative sampling and extrinsic symmetry depend only on a and xi.
    {
      Rng rng(detail::stage_seed(spec.seed, 2));
      double l7 = 0.0;
      for (int i = 0; i < lemma7_samples; ++i)
        l7 = std::max(l7, third_derivative_off_torus(alg, t, a, a.basis * detail::gaussian_vector(a.rank, rng)));
      rep.residuals.lemma7 = l7;
      if (l7 > ltol) {
        fail("lemma7", "third derivative leaves the torus tangent space");
        thm2 = false;
      }
      const SymmetryReport sym = extrinsic_symmetry_check(alg, t, symmetry_samples,
                                                          detail::stage_seed(spec.seed, 3), spec.tol.membership);
      rep.residuals.symmetry = std::max({sym.max_spectrum_residual, sym.involution_residual, sym.fixed_point_residual});
      if (!sym.passed) {
        fail("symmetry", "reflected orbit point failed membership");
        thm2 = false;
      }
    }

    std::optional<UnitLattice> lattice;
    std::optional<WeightDecomposition> wd;
    try {
      wd = weight_decomposition(alg, a, t, detail::stage_seed(spec.seed, 4), spec.tol.spectral_gap);
      const CliffordModel cm = clifford_reduction(*wd);
      rep.circles = static_cast<int>(cm.circles.size());
      UnitLattice lat = unit_lattice(alg, *wd);
      try {
        lat = with_rectangular_basis(lat);
        rep.lattice_rectangular = true;
      } catch (const Error& e) {
        fail("rectangular_basis", e.what());
      }
      const CheckReport tc = torus_equals_clifford_check(a, cm, lat);
      if (!tc.passed) {
        fail("torus_equals_clifford", tc.detail);
        thm2 = false;
      }
      if (lat.membership_residual > ltol) {
        fail("unit_lattice", "exp(ad b) xi != xi");
        thm2 = false;
      }
      if (lat.certified_rectangular) {
        const auto gc = generating_circles(lat, *wd, ltol);
        if (circle_plane_overlap(alg, gc) > ltol) {
          fail("generating_circles", "circle planes not orthogonal");
          thm2 = false;
        }
      }
      Rng rng(detail::stage_seed(spec.seed, 5));
      const CheckReport tp = third_power_span_check(alg, t, a, *wd, a.basis * detail::gaussian_vector(a.rank, rng));
      if (!tp.passed) {
        fail("third_power_span", tp.detail);
        thm2 = false;
      }
      lattice = std::move(lat);
    } catch (const Error& e) {
      fail("torus", e.what());
      thm2 = false;
    }

    try {
      if (!lattice || !lattice->certified_rectangular)
        throw Error(ErrorCode::NotRectangular, "no generating circles to build triples from");
      const TripleSet ts = build_triples(alg, lattice->rect_elements(), t);
      rep.residuals.sl2 = ts.max();
      const CheckReport cc = commutation_certificate(alg, ts.triples);
      rep.residuals.commutation = cc.max_residual;
      if (!cc.passed) throw Error(ErrorCode::RelationResidualTooLarge, "triples do not commute");
      const CartanSubalgebra h = cartan_extend(alg, a, t, ts.triples, detail::stage_seed(spec.seed, 6));
      rep.residuals.cartan = h.residual;
      const RootSystem rs = root_space_decomposition(alg, h, detail::stage_seed(spec.seed, 7));
      if (static_cast<Eigen::Index>(rs.roots.size()) + h.basis.cols() != alg.dim())
        throw Error(ErrorCode::DegenerateRootSpace, "#roots + dim h != dim g");
      const RootClassification cl = classify_noncompact(alg, rs, t);
      rep.residuals.roots = std::max(rs.residual, cl.max_deviation);
      rep.noncompact_count = cl.noncompact;
      rep.compact_count = cl.compact;
      const StrongOrthogonalityCertificate cert = strong_orthogonality_certificate(alg, ts.triples, cl.system, t);
      rep.residuals.strong_orth = cert.residual();
      require_strongly_orthogonal(cert);
      rep.so_root_count = static_cast<int>(cert.matched_roots.size());
      const double worst = std::max({*rep.residuals.sl2, *rep.residuals.commutation, *rep.residuals.cartan,
                                     *rep.residuals.roots, *rep.residuals.strong_orth});
      if (worst > ltol) throw Error(ErrorCode::RelationResidualTooLarge, "residual above 1e-8");
      if (rep.so_root_count != rep.rank) throw Error(ErrorCode::RootMatchFailed, "root count != rank");
    } catch (const Error& e) {
      fail("strong_roots", e.what());
      hc = false;
    }
  } catch (const Error& e) {
    fail("setup", e.what());
    thm2 = hc = false;
  }
  rep.thm2 = thm2 && rep.lattice_rectangular;
  rep.hc = hc;
  rep.rect_corollary = rep.lattice_rectangular;
  rep.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

enum class ReportFormat { Json, Text };

inline nlohmann::ordered_json to_json(const CaseReport& r, bool timing = true) {
  using nlohmann::ordered_json;
  auto opt = [](const auto& v) -> ordered_json { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  ordered_json res = ordered_json::object();
  res["jacobi"] = opt(r.residuals.jacobi);
  res["tripotent"] = opt(r.residuals.tripotent);
  res["lemma7"] = opt(r.residuals.lemma7);
  res["symmetry"] = opt(r.residuals.symmetry);
  res["sl2"] = opt(r.residuals.sl2);
  res["commutation"] = opt(r.residuals.commutation);
  res["cartan"] = opt(r.residuals.cartan);
  res["roots"] = opt(r.residuals.roots);
  res["strong_orth"] = opt(r.residuals.strong_orth);
  ordered_json j = ordered_json::object();
  j["case_id"] = r.case_id;
  j["family"] = std::string(to_string(r.family));
  j["params"] = params;
  j["rank"] = opt(r.rank);
  j["circles"] = opt(r.circles);
  j["lattice_rectangular"] = r.lattice_rectangular;
  j["so_root_count"] = opt(r.so_root_count);
  j["noncompact_count"] = opt(r.noncompact_count);
  j["compact_count"] = opt(r.compact_count);
  j["residuals"] = res;
  j["duration_ms"] = timing ? std::round(r.duration_ms * 1000.0) / 1000.0 : 0.0;
  j["passed"] = {{"thm2", r.thm2}, {"hc", r.hc}, {"rect_corollary", r.rect_corollary}};
  return j;
}

inline std::string render_json(const std::vector<CaseReport>& reports, bool timing = true) {
  if (reports.empty()) throw Error(ErrorCode::EmptyReport, "no reports to emit");
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_json(r, timing));
  return arr.dump(2) + "\n";
}

inline std::string render_text(const std::vector<CaseReport>& reports, bool timing = true) {
  if (reports.empty()) throw Error(ErrorCode::EmptyReport, "no reports to emit");
  auto cell = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("-"); };
  auto yn = [](bool b) { return std::string(b ? "pass" : "FAIL"); };
  std::ostringstream os;
  os << std::left << std::setw(10) << "case" << std::right << std::setw(5) << "dim" << std::setw(6) << "rank"
     << std::setw(8) << "circles" << std::setw(6) << "rect" << std::setw(9) << "so_roots" << std::setw(11)
     << "noncompact" << std::setw(9) << "compact" << std::setw(7) << "thm2" << std::setw(6) << "hc"
     << std::setw(10) << "max_resid" << std::setw(10) << "ms" << "\n";
  for (const auto& r : reports) {
    double worst = 0.0;
    for (const auto& v : {r.residuals.jacobi, r.residuals.tripotent, r.residuals.lemma7, r.residuals.symmetry,
                          r.residuals.sl2, r.residuals.commutation, r.residuals.cartan, r.residuals.roots,
                          r.residuals.strong_orth})
      if (v) worst = std::max(worst, *v);
    char resid[32];
    std::snprintf(resid, sizeof resid, "%.2e", worst);
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.1f", timing ? r.duration_ms : 0.0);
    os << std::left << std::setw(10) << r.case_id << std::right << std::setw(5) << r.dim << std::setw(6)
       << cell(r.rank) << std::setw(8) << cell(r.circles) << std::setw(6) << (r.lattice_rectangular ? "yes" : "no")
       << std::setw(9) << cell(r.so_root_count) << std::setw(11) << cell(r.noncompact_count) << std::setw(9)
       << cell(r.compact_count) << std::setw(7) << yn(r.thm2) << std::setw(6) << yn(r.hc) << std::setw(10)
       << resid << std::setw(10) << ms << "\n";
    for (const auto& f : r.failures) os << "  ! " << f << "\n";
  }
  return os.str();
}

/// Writes to `path`, or to stdout when path is "-".
inline void emit_report(const std::vector<CaseReport>& reports, ReportFormat format, const std::string& path,
                        bool timing = true) {
  const std::string body = format == ReportFormat::Json ? render_json(reports, timing) : render_text(reports, timing);
  if (path == "-") {
    std::cout << body << std::flush;
    if (!std::cout) throw Error(ErrorCode::IoFailure, "stdout write failed");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  out << body;
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path);
}

}  // namespace clifford
