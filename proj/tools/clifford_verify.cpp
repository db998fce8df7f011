// clifford_verify: run the torus / strong-root certification pipeline on
// single cases or on the built-in catalog, and audit structure constants.

#include "clifford/clifford.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace clifford;

struct OutputOptions {
  std::string json_out;
  std::string format = "text";
  bool no_timing = false;
};

void add_output_flags(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--json-out", o.json_out, "write the JSON report to this path ('-' for stdout)");
  cmd->add_option("--format", o.format, "stdout format when --json-out is not '-'")
      ->check(CLI::IsMember({"text", "json", "none"}));
  cmd->add_flag("--no-timing", o.no_timing, "write duration_ms as 0 for reproducible output");
}

int emit(const std::vector<CaseReport>& reports, const OutputOptions& o) {
  const bool timing = !o.no_timing;
  if (!o.json_out.empty()) emit_report(reports, ReportFormat::Json, o.json_out, timing);
  if (o.json_out != "-") {
    if (o.format == "text") emit_report(reports, ReportFormat::Text, "-", timing);
    else if (o.format == "json") emit_report(reports, ReportFormat::Json, "-", timing);
  }
  for (const auto& r : reports)
    for (const auto& f : r.failures) std::cerr << r.case_id << ": " << f << "\n";
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();
  return ok ? 0 : 1;
}

Tolerances tolerances(std::optional<double> tol) {
  Tolerances t;
  if (tol) t.algebraic = *tol;
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify Clifford tori and strongly orthogonal roots of hermitian adjoint orbits"};
  app.require_subcommand(1);

  std::string family;
  int p = 0, q = 0, n = 0;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  OutputOptions run_out;
  auto* run = app.add_subcommand("run", "run a single case");
  run->add_option("--family", family, "SU, SO or SP")->required()->check(CLI::IsMember({"SU", "SO", "SP"}));
  run->add_option("--p", p, "SU block size p")->check(CLI::PositiveNumber);
  run->add_option("--q", q, "SU block size q")->check(CLI::PositiveNumber);
  run->add_option("--n", n, "matrix size for SO(n) / SP(n)")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "random seed");
  run->add_option("--tol", tol, "algebraic tolerance for the tripotent test")->check(CLI::PositiveNumber);
  add_output_flags(run, run_out);

  int max_dim = 35;
  bool list_only = false;
  OutputOptions cat_out;
  auto* catalog = app.add_subcommand("catalog", "run every catalog case up to a dimension bound");
  catalog->add_option("--max-dim", max_dim, "largest algebra dimension")->check(CLI::Range(3, 1000));
  catalog->add_option("--seed", seed, "random seed");
  catalog->add_option("--tol", tol, "algebraic tolerance for the tripotent test")->check(CLI::PositiveNumber);
  catalog->add_flag("--list", list_only, "print case ids and exit");
  add_output_flags(catalog, cat_out);

  std::string vfamily;
  int vn = 0;
  auto* validate = app.add_subcommand("validate", "audit structure constants only");
  validate->add_option("--family", vfamily, "SU, SO or SP (default: every catalog algebra)")
      ->check(CLI::IsMember({"SU", "SO", "SP"}));
  validate->add_option("--n", vn, "matrix size")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      CaseSpec spec;
      const Family f = parse_family(family);
      if (f == Family::SU) {
        if (p == 0 || q == 0) throw CLI::ValidationError("--p/--q", "SU needs --p and --q");
        spec = su_case(p, q, seed);
      } else {
        if (n == 0) throw CLI::ValidationError("--n", family + " needs --n");
        spec = f == Family::SO ? so_case(n, seed) : sp_case(n, seed);
      }
      spec.tol = tolerances(tol);
      return emit({run_case(spec)}, run_out);
    }
    if (catalog->parsed()) {
      auto cases = catalog_cases(max_dim, seed);
      if (list_only) {
        for (const auto& c : cases) std::cout << c.id() << "  dim=" << c.algebra_dim() << "\n";
        return 0;
      }
      std::vector<CaseReport> reports;
      for (auto& c : cases) {
        c.tol = tolerances(tol);
        reports.push_back(run_case(c));
      }
      return emit(reports, cat_out);
    }
    if (validate->parsed()) {
      std::vector<std::pair<Family, int>> targets;
      if (!vfamily.empty()) {
        if (vn == 0) throw CLI::ValidationError("--n", "validate needs --n with --family");
        targets.emplace_back(parse_family(vfamily), vn);
      } else {
        for (const auto& c : catalog_cases(35)) targets.emplace_back(c.family, c.algebra_parameter());
      }
      bool ok = true;
      for (const auto& [f, m] : targets) {
        const LieAlgebra alg = build_algebra(f, m);
        const ValidationReport v = validate_structure(alg);
        std::printf("%s(%d) dim=%-3ld jacobi=%.2e antisym=%.1e ad_inv=%.2e killing=[%.3g, %.3g] %s\n",
                    std::string(to_string(f)).c_str(), m, static_cast<long>(alg.dim()), v.jacobi_relative(),
                    v.antisymmetry_residual, v.ad_invariance_residual, v.killing_min, v.killing_max,
                    v.passed() ? "pass" : "FAIL");
        ok = ok && v.passed();
      }
      return ok ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ParameterTooSmall ? 2 : 1;
  }
  return 2;
}
