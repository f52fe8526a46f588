#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "symnmf/sym_anls.hpp"

namespace symnmf {

/// Multi-start SymNMF experiment on one matrix.
struct ExperimentSpec {
  std::string problem_id;
  std::string group;  ///< aggregation key, e.g. "class1"
  /// MatrixMarket path, or one of
  ///   gen:class1:n=<n>,p=<p>[,seed=<s>]        A = V V^T, V uniform
  ///   gen:<wsn|sc|sk|dd>:n=<n>[,seed=<s>]     planar points, diameter sigma, normalized cut
  ///   cosine:<vectors.csv>                    cosine similarity of row vectors
  ///   kernel:<vectors.csv>                    Gaussian kernel (7-NN sigma) + normalized cut
  ///   points:<points.csv>                     Gaussian kernel (diameter sigma) + normalized cut
  std::string matrix_source;
  Index k = 1;
  InnerSolver inner = GcdInner{};
  BetaUpdate update = AdaUpdate{};
  int starts = 5;
  std::uint64_t base_seed = 0;
  /// When nonempty, overrides starts/base_seed: one start per listed seed.
  std::vector<std::uint64_t> seeds;
  int nu_max = 500;
  double tau1 = 1e-3;
  double tau2 = 0.1;
  /// Simultaneous runs; 0 picks min(starts, hardware threads).
  int jobs = 0;
};

struct StartSummary {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  double eps_S = 0.0;
  int nu_tot = 0;
  std::int64_t cor = 0;
  double elapsed_s = 0.0;
  SymStatus status = SymStatus::IterationCap;

  bool operator==(const StartSummary&) const = default;
};

struct ExperimentReport {
  std::string problem_id;
  std::string group;
  Index n = 0;
  Index k = 0;
  double eps_S = 0.0;  ///< final eps_S of the best start
  int nu_tot = 0;      ///< outer iterations of the best start
  std::int64_t cor = 0;  ///< inner corrections of the best start
  double T = 0.0;      ///< largest wall time over starts
  std::uint64_t best_seed = 0;
  SymStatus status = SymStatus::IterationCap;
  std::vector<StartSummary> starts;
  std::vector<IterationTrace> trace;  ///< best start

  bool operator==(const ExperimentReport&) const = default;
};

/// Builds the matrix described by an ExperimentSpec::matrix_source string.
DenseMatrix resolve_matrix_source(const std::string& source);

/// Parses "ada" or "g<zeta>" (e.g. g1.01).
BetaUpdate parse_update(std::string_view name);
std::string update_name(const BetaUpdate& update);

/// Runs `starts` independent sym_anls calls with seeds base_seed + i (or the
/// explicit seed list) and keeps
/// the one with the smallest final eps_S (ties: fewer iterations, then smaller
/// seed). Throws if every start fails.
ExperimentReport run_experiment(const ExperimentSpec& spec, const DenseMatrix& a);
ExperimentReport run_experiment(const ExperimentSpec& spec);

struct TableRow {
  std::string group;
  std::size_t problems = 0;
  double eps_S = 0.0;
  double nu_tot = 0.0;
  double T = 0.0;
};

/// Arithmetic means per group, groups in order of first appearance.
std::vector<TableRow> aggregate(const std::vector<ExperimentReport>& reports);

/// "group  eps_S  nu_tot  T" with 3, 2 and 2 decimals.
std::string format_row(const TableRow& row);

/// cor_av(nu) = corrections(nu) / (2 n) for each trace row.
std::vector<double> corrections_per_row(const ExperimentReport& report);

enum class ExportFormat { Csv, Json };

/// Csv writes the best-start trace; Json writes every report field.
void export_report(const ExperimentReport& report, ExportFormat format, const std::string& path);
void write_report_json(std::ostream& out, const ExperimentReport& report);
ExperimentReport read_report_json(std::istream& in);
ExperimentReport read_report_json(const std::string& path);

}  // namespace symnmf
