// symnmf command-line front end.
//
//   symnmf run    --matrix <source> --k 80 [--inner gcd|bpp] [--eta 1e-3] [--update ada|g1.01]
//                 [--starts 5] [--seed 0] [--numax 500] [--out report.json] [--trace trace.csv]
//   symnmf gen    --matrix <source> --out a.mtx
//   symnmf points --kind wsn|sc|sk|dd --n 1000 [--seed 0] --out points.csv
//   symnmf table  report.json...
//
// Exit status of `run`: 0 when the best start converged, 2 when it hit the
// iteration cap, 1 on any error.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symnmf/error.hpp"
#include "symnmf/experiment.hpp"
#include "symnmf/matrix_market.hpp"
#include "symnmf/similarity.hpp"

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitError = 1;
constexpr int kExitCap = 2;

struct RunOptions {
  std::string matrix;
  std::string id;
  std::string group = "default";
  long k = 0;
  std::string inner = "gcd";
  double eta = 1e-3;
  std::string update = "ada";
  int starts = 5;
  std::uint64_t seed = 0;
  int numax = 500;
  double tau1 = 1e-3;
  double tau2 = 0.1;
  int jobs = 0;
  std::string out;
  std::string trace;
};

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("SYMNMF_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw symnmf::InvalidInputError(std::string("SYMNMF_SEED is not an unsigned integer: '") + env + "'");
  }
}

int run_command(const RunOptions& o) {
  symnmf::ExperimentSpec spec;
  spec.problem_id = o.id.empty() ? o.matrix : o.id;
  spec.group = o.group;
  spec.matrix_source = o.matrix;
  spec.k = o.k;
  if (o.inner == "gcd") {
    spec.inner = symnmf::GcdInner{symnmf::GcdConfig{o.eta, 0}};
  } else {
    spec.inner = symnmf::BppInner{};
  }
  spec.update = symnmf::parse_update(o.update);
  spec.starts = o.starts;
  spec.base_seed = seed_from_env(o.seed);
  spec.nu_max = o.numax;
  spec.tau1 = o.tau1;
  spec.tau2 = o.tau2;
  spec.jobs = o.jobs;

  const symnmf::ExperimentReport report = symnmf::run_experiment(spec);

  for (const auto& s : report.starts) {
    if (s.failed) {
      std::cerr << "start seed=" << s.seed << " failed: " << s.error << '\n';
    }
  }
  std::cout << "problem " << report.problem_id << "  n=" << report.n << " k=" << report.k
            << "  best seed " << report.best_seed << '\n';
  std::cout << symnmf::format_row(symnmf::aggregate({report}).front()) << '\n';
  std::cout << "cor " << report.cor << "  status "
            << (report.status == symnmf::SymStatus::Converged ? "converged" : "iteration cap") << '\n';

  if (!o.out.empty()) symnmf::export_report(report, symnmf::ExportFormat::Json, o.out);
  if (!o.trace.empty()) symnmf::export_report(report, symnmf::ExportFormat::Csv, o.trace);
  return report.status == symnmf::SymStatus::Converged ? kExitConverged : kExitCap;
}

int gen_command(const std::string& source, const std::string& out) {
  const symnmf::DenseMatrix a = symnmf::resolve_matrix_source(source);
  symnmf::MatrixMarketWriteOptions opts;
  opts.symmetric = a.rows() == a.cols() && a == a.transpose();
  symnmf::write_matrix_market(out, a, opts);
  std::cout << "wrote " << a.rows() << "x" << a.cols() << " matrix to " << out << '\n';
  return kExitConverged;
}

int points_command(const std::string& kind, long n, std::uint64_t seed, const std::string& out) {
  const auto points = symnmf::gen_synthetic(symnmf::parse_synthetic_kind(kind), n, seed);
  symnmf::write_points_csv(out, points);
  std::cout << "wrote " << points.points.size() << " points to " << out << '\n';
  return kExitConverged;
}

int table_command(const std::vector<std::string>& paths) {
  std::vector<symnmf::ExperimentReport> reports;
  reports.reserve(paths.size());
  for (const auto& p : paths) reports.push_back(symnmf::read_report_json(p));
  std::cout << "group           eps_S   nu_tot          T\n";
  for (const auto& row : symnmf::aggregate(reports)) std::cout << symnmf::format_row(row) << '\n';
  return kExitConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric nonnegative matrix factorization by penalized ANLS"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "multi-start SymNMF on one matrix");
  run_cmd->add_option("--matrix", run.matrix,
                      "MatrixMarket file or gen:class1:n=..,p=.. | gen:wsn:n=.. | cosine:f | kernel:f | points:f")
      ->required();
  run_cmd->add_option("--k", run.k, "factorization rank")->required()->check(CLI::PositiveNumber);
  run_cmd->add_option("--inner", run.inner, "inner NNLS solver")->check(CLI::IsMember({"gcd", "bpp"}));
  run_cmd->add_option("--eta", run.eta, "GCD stopping tolerance")->check(CLI::PositiveNumber);
  run_cmd->add_option("--update", run.update, "beta update: ada or g<zeta>");
  run_cmd->add_option("--starts", run.starts, "random starting points")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed, "base seed (SYMNMF_SEED overrides)");
  run_cmd->add_option("--numax", run.numax, "outer iteration cap")->check(CLI::PositiveNumber);
  run_cmd->add_option("--tau1", run.tau1, "relative stall tolerance");
  run_cmd->add_option("--tau2", run.tau2, "symmetry tolerance");
  run_cmd->add_option("--jobs", run.jobs, "simultaneous starts, 0 = auto")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--id", run.id, "problem id in the report");
  run_cmd->add_option("--group", run.group, "aggregation group in the report");
  run_cmd->add_option("--out", run.out, "summary JSON path");
  run_cmd->add_option("--trace", run.trace, "best-start trace CSV path");

  std::string gen_source, gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "materialize a matrix source as MatrixMarket");
  gen_cmd->add_option("--matrix", gen_source, "matrix source, as for run")->required();
  gen_cmd->add_option("--out", gen_out, "output .mtx path")->required();

  std::string pts_kind, pts_out;
  long pts_n = 0;
  std::uint64_t pts_seed = 0;
  auto* pts_cmd = app.add_subcommand("points", "generate a synthetic planar point set");
  pts_cmd->add_option("--kind", pts_kind, "wsn, sc, sk or dd")->required();
  pts_cmd->add_option("--n", pts_n, "number of points")->required()->check(CLI::PositiveNumber);
  pts_cmd->add_option("--seed", pts_seed, "generator seed");
  pts_cmd->add_option("--out", pts_out, "output CSV path")->required();

  std::vector<std::string> table_paths;
  auto* table_cmd = app.add_subcommand("table", "aggregate report JSON files by group");
  table_cmd->add_option("reports", table_paths, "report JSON files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitConverged : kExitError;
  }

  try {
    if (*run_cmd) return run_command(run);
    if (*gen_cmd) return gen_command(gen_source, gen_out);
    if (*pts_cmd) return points_command(pts_kind, pts_n, pts_seed, pts_out);
    if (*table_cmd) return table_command(table_paths);
  } catch (const std::exception& e) {
    std::cerr << "symnmf: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
