#include "symnmf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "symnmf/error.hpp"
#include "symnmf/matrix_market.hpp"
#include "symnmf/similarity.hpp"

namespace symnmf {

namespace {

using nlohmann::json;

std::map<std::string, std::string> parse_params(std::string_view text, const std::string& source) {
  std::map<std::string, std::string> params;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw InvalidInputError("matrix source '" + source + "': expected key=value, got '" + std::string(item) + "'");
    }
    params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    pos = comma + 1;
  }
  return params;
}

long long integer_param(const std::map<std::string, std::string>& params, const std::string& key,
                        const std::string& source, std::optional<long long> fallback = std::nullopt) {
  const auto it = params.find(key);
  if (it == params.end()) {
    if (fallback) return *fallback;
    throw InvalidInputError("matrix source '" + source + "': missing parameter '" + key + "'");
  }
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) {
    throw InvalidInputError("matrix source '" + source + "': '" + key + "' must be an integer");
  }
  return v;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw IoError("report JSON: bad number '" + s + "'");
  }
  return j.get<double>();
}

std::string status_name(SymStatus s) { return s == SymStatus::Converged ? "converged" : "iteration_cap"; }

SymStatus parse_status(const std::string& s) {
  if (s == "converged") return SymStatus::Converged;
  if (s == "iteration_cap") return SymStatus::IterationCap;
  throw IoError("report JSON: unknown status '" + s + "'");
}

bool better(const StartSummary& a, const StartSummary& b) {
  if (a.eps_S != b.eps_S) return a.eps_S < b.eps_S;
  if (a.nu_tot != b.nu_tot) return a.nu_tot < b.nu_tot;
  return a.seed < b.seed;
}

}  // namespace

DenseMatrix resolve_matrix_source(const std::string& source) {
  auto after = [&](std::string_view prefix) { return source.substr(prefix.size()); };
  if (source.starts_with("gen:")) {
    const std::string rest = after("gen:");
    const std::size_t colon = rest.find(':');
    const std::string kind = rest.substr(0, colon);
    const auto params =
        parse_params(colon == std::string::npos ? std::string_view{} : std::string_view(rest).substr(colon + 1), source);
    const auto seed = static_cast<std::uint64_t>(integer_param(params, "seed", source, 1));
    const Index n = integer_param(params, "n", source);
    if (kind == "class1") {
      return random_lowrank(n, integer_param(params, "p", source), seed);
    }
    const PointSet points = gen_synthetic(parse_synthetic_kind(kind), n, seed);
    return kernel_similarity(points.as_columns(), {SigmaMode::Diameter, 0.0});
  }
  if (source.starts_with("cosine:")) return cosine_similarity(read_vectors_csv(after("cosine:")));
  if (source.starts_with("kernel:")) return kernel_similarity(read_vectors_csv(after("kernel:")), {SigmaMode::Knn7, 0.0});
  if (source.starts_with("points:")) {
    return kernel_similarity(read_points_csv(after("points:")).as_columns(), {SigmaMode::Diameter, 0.0});
  }
  return read_matrix_market(source);
}

BetaUpdate parse_update(std::string_view name) {
  if (name == "ada" || name == "ADA") return AdaUpdate{};
  if (name.size() > 1 && (name[0] == 'g' || name[0] == 'G')) {
    const std::string digits(name.substr(1));
    std::size_t used = 0;
    double zeta = 0.0;
    try {
      zeta = std::stod(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == digits.size() && zeta > 1.0) return GeometricUpdate{zeta};
  }
  throw InvalidInputError("unknown update strategy '" + std::string(name) + "' (expected ada or g<ratio>, ratio > 1)");
}

std::string update_name(const BetaUpdate& update) {
  if (const auto* g = std::get_if<GeometricUpdate>(&update)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "g%g", g->zeta);
    return buf;
  }
  return "ada";
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const DenseMatrix& a) {
  if (spec.seeds.empty() && spec.starts < 1) throw InvalidInputError("ExperimentSpec: starts must be >= 1");
  if (spec.jobs < 0) throw InvalidInputError("ExperimentSpec: jobs must be >= 0");
  validate_symmetric_input(a);

  SymConfig cfg;
  cfg.k = spec.k;
  cfg.tau1 = spec.tau1;
  cfg.tau2 = spec.tau2;
  cfg.nu_max = spec.nu_max;
  cfg.inner = spec.inner;
  cfg.update = spec.update;

  const auto starts = spec.seeds.empty() ? static_cast<std::size_t>(spec.starts) : spec.seeds.size();
  std::vector<StartSummary> summaries(starts);
  std::vector<std::vector<IterationTrace>> traces(starts);

  auto run_one = [&](std::size_t i) {
    using Clock = std::chrono::steady_clock;
    StartSummary& s = summaries[i];
    s.seed = spec.seeds.empty() ? spec.base_seed + i : spec.seeds[i];
    SymConfig local = cfg;
    local.seed = s.seed;
    const auto t0 = Clock::now();
    try {
      SymResult r = sym_anls(a, local);
      s.eps_S = r.trace.back().penalty.eps_S;
      s.nu_tot = r.trace.back().nu;
      s.cor = r.stats.corrections;
      s.status = r.status;
      traces[i] = std::move(r.trace);
    } catch (const std::exception& e) {
      s.failed = true;
      s.error = e.what();
    }
    s.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  };

  std::size_t jobs = spec.jobs > 0 ? static_cast<std::size_t>(spec.jobs)
                                   : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  jobs = std::min(jobs, starts);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < starts; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < starts; i = next++) run_one(i);
      });
    }
  }

  ExperimentReport report;
  report.problem_id = spec.problem_id;
  report.group = spec.group;
  report.n = a.rows();
  report.k = spec.k;
  report.starts = summaries;

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < starts; ++i) {
    report.T = std::max(report.T, summaries[i].elapsed_s);
    if (summaries[i].failed) continue;
    if (!best || better(summaries[i], summaries[*best])) best = i;
  }
  if (!best) throw Error("all " + std::to_string(starts) + " starts failed; first error: " + summaries.front().error);

  const StartSummary& b = summaries[*best];
  report.eps_S = b.eps_S;
  report.nu_tot = b.nu_tot;
  report.cor = b.cor;
  report.best_seed = b.seed;
  report.status = b.status;
  report.trace = std::move(traces[*best]);
  return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  return run_experiment(spec, resolve_matrix_source(spec.matrix_source));
}

std::vector<TableRow> aggregate(const std::vector<ExperimentReport>& reports) {
  std::vector<TableRow> rows;
  for (const auto& r : reports) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const TableRow& row) { return row.group == r.group; });
    if (it == rows.end()) {
      rows.push_back(TableRow{r.group});
      it = rows.end() - 1;
    }
    ++it->problems;
    it->eps_S += r.eps_S;
    it->nu_tot += r.nu_tot;
    it->T += r.T;
  }
  for (auto& row : rows) {
    const auto count = static_cast<double>(row.problems);
    row.eps_S /= count;
    row.nu_tot /= count;
    row.T /= count;
  }
  return rows;
}

std::string format_row(const TableRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %8.3f %8.2f %10.2f", row.group.c_str(), row.eps_S, row.nu_tot, row.T);
  return buf;
}

std::vector<double> corrections_per_row(const ExperimentReport& report) {
  std::vector<double> out;
  out.reserve(report.trace.size());
  for (const auto& row : report.trace) {
    out.push_back(static_cast<double>(row.corrections) / (2.0 * static_cast<double>(report.n)));
  }
  return out;
}

void write_report_json(std::ostream& out, const ExperimentReport& report) {
  json j;
  j["problem_id"] = report.problem_id;
  j["group"] = report.group;
  j["n"] = report.n;
  j["k"] = report.k;
  j["eps_S"] = number(report.eps_S);
  j["nu_tot"] = report.nu_tot;
  j["cor"] = report.cor;
  j["T"] = number(report.T);
  j["best_seed"] = report.best_seed;
  j["status"] = status_name(report.status);
  j["starts"] = json::array();
  for (const auto& s : report.starts) {
    j["starts"].push_back({{"seed", s.seed},
                           {"failed", s.failed},
                           {"error", s.error},
                           {"eps_S", number(s.eps_S)},
                           {"nu_tot", s.nu_tot},
                           {"cor", s.cor},
                           {"elapsed_s", number(s.elapsed_s)},
                           {"status", status_name(s.status)}});
  }
  j["trace"] = json::array();
  const auto cor_av = corrections_per_row(report);
  for (std::size_t i = 0; i < report.trace.size(); ++i) {
    const auto& row = report.trace[i];
    const auto& p = row.penalty;
    j["trace"].push_back({{"nu", row.nu},
                          {"beta", number(p.beta)},
                          {"alpha", number(p.alpha)},
                          {"eps_S", number(p.eps_S)},
                          {"eps_N", number(p.eps_N)},
                          {"delta", number(p.delta)},
                          {"rho", number(p.rho)},
                          {"corrections", row.corrections},
                          {"elapsed_s", number(row.elapsed_s)},
                          {"cor_av", number(cor_av[i])}});
  }
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write_report_json: stream write failed");
}

ExperimentReport read_report_json(std::istream& in) {
  ExperimentReport r;
  try {
    const json j = json::parse(in);
    r.problem_id = j.at("problem_id").get<std::string>();
    r.group = j.at("group").get<std::string>();
    r.n = j.at("n").get<Index>();
    r.k = j.at("k").get<Index>();
    r.eps_S = number(j.at("eps_S"));
    r.nu_tot = j.at("nu_tot").get<int>();
    r.cor = j.at("cor").get<std::int64_t>();
    r.T = number(j.at("T"));
    r.best_seed = j.at("best_seed").get<std::uint64_t>();
    r.status = parse_status(j.at("status").get<std::string>());
    for (const auto& s : j.at("starts")) {
      StartSummary st;
      st.seed = s.at("seed").get<std::uint64_t>();
      st.failed = s.at("failed").get<bool>();
      st.error = s.at("error").get<std::string>();
      st.eps_S = number(s.at("eps_S"));
      st.nu_tot = s.at("nu_tot").get<int>();
      st.cor = s.at("cor").get<std::int64_t>();
      st.elapsed_s = number(s.at("elapsed_s"));
      st.status = parse_status(s.at("status").get<std::string>());
      r.starts.push_back(st);
    }
    for (const auto& t : j.at("trace")) {
      IterationTrace row;
      row.nu = t.at("nu").get<int>();
      row.penalty.beta = number(t.at("beta"));
      row.penalty.alpha = number(t.at("alpha"));
      row.penalty.eps_S = number(t.at("eps_S"));
      row.penalty.eps_N = number(t.at("eps_N"));
      row.penalty.delta = number(t.at("delta"));
      row.penalty.rho = number(t.at("rho"));
      row.corrections = t.at("corrections").get<std::int64_t>();
      row.elapsed_s = number(t.at("elapsed_s"));
      r.trace.push_back(row);
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("report JSON: ") + e.what());
  }
  return r;
}

ExperimentReport read_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_report_json(in);
}

void export_report(const ExperimentReport& report, ExportFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (format == ExportFormat::Csv) {
    write_trace_csv(out, report.trace);
    if (!out) throw IoError("write to '" + path + "' failed");
  } else {
    write_report_json(out, report);
  }
}

}  // namespace symnmf
