#include "symnmf/similarity.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "symnmf/error.hpp"
#include "symnmf/rng.hpp"

namespace symnmf {

DenseMatrix PointSet::as_columns() const {
  DenseMatrix m(2, static_cast<Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    m(0, static_cast<Index>(i)) = points[i].x;
    m(1, static_cast<Index>(i)) = points[i].y;
  }
  return m;
}

DenseMatrix random_lowrank_factor(Index n, Index p, std::uint64_t seed) {
  if (p < 1 || p > n) throw InvalidInputError("random_lowrank: need 1 <= p <= n");
  Rng rng(seed);
  return random_uniform(n, p, rng);
}

DenseMatrix random_lowrank(Index n, Index p, std::uint64_t seed) {
  return gram_matrix(random_lowrank_factor(n, p, seed).transpose());
}

DenseMatrix cosine_similarity(const DenseMatrix& vectors) {
  const Index n = vectors.cols();
  DenseVector norms = vectors.colwise().norm().transpose();
  for (Index i = 0; i < n; ++i) {
    if (norms(i) == 0.0) throw InvalidInputError("cosine_similarity: column " + std::to_string(i) + " is zero");
  }
  const DenseMatrix dots = gram_matrix(vectors);
  DenseMatrix a = DenseMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double v = std::min(1.0, dots(i, j) / (norms(i) * norms(j)));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

DenseMatrix gaussian_kernel(const DenseMatrix& vectors, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidInputError("gaussian_kernel: sigma must be positive and finite");
  }
  const Index n = vectors.cols();
  const double inv_sigma2 = 1.0 / (sigma * sigma);
  DenseMatrix e = DenseMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double v = std::exp(-(vectors.col(i) - vectors.col(j)).squaredNorm() * inv_sigma2);
      e(i, j) = v;
      e(j, i) = v;
    }
  }
  return e;
}

DenseMatrix normalized_cut(const DenseMatrix& e) {
  if (e.rows() != e.cols()) throw DimensionError("normalized_cut: matrix must be square");
  const Index n = e.rows();
  DenseVector scale = e.rowwise().sum();
  for (Index i = 0; i < n; ++i) {
    if (!(scale(i) > 0.0)) {
      throw InvalidInputError("normalized_cut: point " + std::to_string(i) + " is isolated (zero degree)");
    }
    scale(i) = 1.0 / std::sqrt(scale(i));
  }
  DenseMatrix a(n, n);
  for (Index j = 0; j < n; ++j) {
    a(j, j) = scale(j) * e(j, j) * scale(j);
    for (Index i = j + 1; i < n; ++i) {
      const double v = scale(i) * e(i, j) * scale(j);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

double sigma_knn(const DenseMatrix& vectors, Index neighbor) {
  const Index n = vectors.cols();
  if (neighbor < 1) throw InvalidInputError("sigma_knn: neighbor rank must be >= 1");
  if (n < neighbor + 1) {
    throw InvalidInputError("sigma_knn: need at least " + std::to_string(neighbor + 1) + " points, got " +
                            std::to_string(n));
  }
  std::vector<double> dist(static_cast<std::size_t>(n - 1));
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (Index j = 0; j < n; ++j) {
      if (j != i) dist[c++] = (vectors.col(i) - vectors.col(j)).norm();
    }
    auto nth = dist.begin() + (neighbor - 1);
    std::nth_element(dist.begin(), nth, dist.end());
    total += *nth;
  }
  return total / static_cast<double>(n);
}

double sigma_diameter(const DenseMatrix& vectors) {
  const Index n = vectors.cols();
  if (n < 2) throw InvalidInputError("sigma_diameter: need at least two points");
  double diameter2 = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      diameter2 = std::max(diameter2, (vectors.col(i) - vectors.col(j)).squaredNorm());
    }
  }
  return std::numbers::sqrt2 / 10.0 * std::sqrt(diameter2);
}

double resolve_sigma(const DenseMatrix& vectors, const KernelConfig& cfg) {
  switch (cfg.mode) {
    case SigmaMode::Knn7:
      return sigma_knn7(vectors);
    case SigmaMode::Diameter:
      return sigma_diameter(vectors);
    case SigmaMode::Explicit:
      if (!(cfg.sigma > 0.0)) throw InvalidInputError("KernelConfig: explicit sigma must be positive");
      return cfg.sigma;
  }
  throw InvalidInputError("KernelConfig: unknown sigma mode");
}

DenseMatrix kernel_similarity(const DenseMatrix& vectors, const KernelConfig& cfg) {
  return normalized_cut(gaussian_kernel(vectors, resolve_sigma(vectors, cfg)));
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "wsn") return SyntheticKind::WellSeparatedNoise;
  if (s == "sc") return SyntheticKind::SubClusters;
  if (s == "sk") return SyntheticKind::Skew;
  if (s == "dd") return SyntheticKind::DifferentDensity;
  throw InvalidInputError("unknown synthetic dataset '" + std::string(name) + "' (expected wsn, sc, sk or dd)");
}

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::WellSeparatedNoise:
      return "wsn";
    case SyntheticKind::SubClusters:
      return "sc";
    case SyntheticKind::Skew:
      return "sk";
    case SyntheticKind::DifferentDensity:
      return "dd";
  }
  return "?";
}

namespace {

struct Blob {
  Point2 center;
  double stddev;
};

void add_blob(PointSet& out, Rng& rng, const Blob& blob, Index count, int label) {
  for (Index i = 0; i < count; ++i) {
    const double x = blob.center.x + blob.stddev * rng.normal();
    const double y = blob.center.y + blob.stddev * rng.normal();
    out.points.push_back({x, y});
    out.labels.push_back(label);
  }
}

// Splits `total` as evenly as possible; earlier parts get the remainder.
std::vector<Index> even_split(Index total, Index parts) {
  std::vector<Index> sizes(static_cast<std::size_t>(parts), total / parts);
  for (Index i = 0; i < total % parts; ++i) ++sizes[static_cast<std::size_t>(i)];
  return sizes;
}

}  // namespace

PointSet gen_synthetic(SyntheticKind kind, Index n, std::uint64_t seed) {
  if (n < 100) throw InvalidInputError("gen_synthetic: need at least 100 points");
  Rng rng(seed);
  PointSet out;
  out.points.reserve(static_cast<std::size_t>(n));
  out.labels.reserve(static_cast<std::size_t>(n));

  switch (kind) {
    case SyntheticKind::WellSeparatedNoise: {
      const Index noise = n / 20;
      const std::array<Blob, 5> blobs{{{{0.2, 0.2}, 0.04},
                                       {{0.8, 0.2}, 0.04},
                                       {{0.5, 0.5}, 0.04},
                                       {{0.2, 0.8}, 0.04},
                                       {{0.8, 0.8}, 0.04}}};
      const auto sizes = even_split(n - noise, 5);
      for (std::size_t b = 0; b < blobs.size(); ++b) add_blob(out, rng, blobs[b], sizes[b], static_cast<int>(b));
      for (Index i = 0; i < noise; ++i) {
        const double x = rng.uniform();
        const double y = rng.uniform();
        out.points.push_back({x, y});
        out.labels.push_back(kNoiseLabel);
      }
      break;
    }
    case SyntheticKind::SubClusters: {
      const auto sizes = even_split(n, 3);
      const auto left = even_split(sizes[0], 2);
      add_blob(out, rng, {{0.17, 0.25}, 0.025}, left[0], 0);
      add_blob(out, rng, {{0.33, 0.25}, 0.025}, left[1], 0);
      const auto right = even_split(sizes[1], 2);
      add_blob(out, rng, {{0.75, 0.17}, 0.025}, right[0], 1);
      add_blob(out, rng, {{0.75, 0.33}, 0.025}, right[1], 1);
      add_blob(out, rng, {{0.5, 0.75}, 0.05}, sizes[2], 2);
      break;
    }
    case SyntheticKind::Skew: {
      const auto sizes = even_split(n, 3);
      add_blob(out, rng, {{0.2, 0.25}, 0.02}, sizes[0], 0);
      add_blob(out, rng, {{0.75, 0.2}, 0.04}, sizes[1], 1);
      add_blob(out, rng, {{0.5, 0.75}, 0.08}, sizes[2], 2);
      break;
    }
    case SyntheticKind::DifferentDensity: {
      const std::array<Index, 4> weights{8, 4, 2, 1};
      const std::array<Point2, 4> centers{{{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}}};
      std::array<Index, 4> sizes{};
      Index assigned = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        sizes[b] = n * weights[b] / 15;
        assigned += sizes[b];
      }
      sizes[0] += n - assigned;
      for (std::size_t b = 0; b < 4; ++b) add_blob(out, rng, {centers[b], 0.05}, sizes[b], static_cast<int>(b));
      break;
    }
  }
  return out;
}

namespace {

bool data_line(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first != std::string::npos && line[first] != '#';
}

// Parses comma separated doubles; false if any field is not a number.
bool parse_fields(const std::string& line, std::vector<double>& fields) {
  fields.clear();
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    if (b == std::string::npos) return false;
    const std::string trimmed = cell.substr(b, e - b + 1);
    std::size_t used = 0;
    try {
      fields.push_back(std::stod(trimmed, &used));
    } catch (const std::exception&) {
      return false;
    }
    if (used != trimmed.size()) return false;
  }
  return !fields.empty();
}

template <typename RowFn>
void for_each_row(std::istream& in, const char* what, RowFn&& fn) {
  std::string line;
  std::vector<double> fields;
  bool first = true;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!data_line(line)) continue;
    const bool ok = parse_fields(line, fields);
    if (!ok && first) {
      first = false;
      continue;  // header
    }
    first = false;
    if (!ok) throw IoError(std::string(what) + ": line " + std::to_string(lineno) + " is not numeric");
    fn(fields, lineno);
  }
}

}  // namespace

PointSet read_points_csv(std::istream& in) {
  PointSet out;
  bool labelled = false;
  for_each_row(in, "point CSV", [&](const std::vector<double>& f, long long lineno) {
    if (f.size() != 2 && f.size() != 3) {
      throw IoError("point CSV: line " + std::to_string(lineno) + " must have 2 or 3 fields");
    }
    if (out.points.empty()) labelled = f.size() == 3;
    if (labelled != (f.size() == 3)) throw IoError("point CSV: inconsistent label column at line " + std::to_string(lineno));
    if (!std::isfinite(f[0]) || !std::isfinite(f[1])) {
      throw IoError("point CSV: non-finite coordinate at line " + std::to_string(lineno));
    }
    out.points.push_back({f[0], f[1]});
    if (labelled) out.labels.push_back(static_cast<int>(f[2]));
  });
  if (out.points.empty()) throw IoError("point CSV: no points");
  return out;
}

PointSet read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_points_csv(in);
}

void write_points_csv(std::ostream& out, const PointSet& points) {
  const bool labelled = points.labels.size() == points.points.size() && !points.labels.empty();
  out << (labelled ? "x,y,label\n" : "x,y\n") << std::setprecision(17);
  for (std::size_t i = 0; i < points.points.size(); ++i) {
    out << points.points[i].x << ',' << points.points[i].y;
    if (labelled) out << ',' << points.labels[i];
    out << '\n';
  }
  if (!out) throw IoError("write_points_csv: stream write failed");
}

void write_points_csv(const std::string& path, const PointSet& points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_points_csv(out, points);
}

DenseMatrix read_vectors_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  for_each_row(in, "vector CSV", [&](const std::vector<double>& f, long long lineno) {
    if (!rows.empty() && f.size() != rows.front().size()) {
      throw IoError("vector CSV: line " + std::to_string(lineno) + " has " + std::to_string(f.size()) +
                    " fields, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(f);
  });
  if (rows.empty()) throw IoError("vector CSV: no vectors");
  DenseMatrix m(static_cast<Index>(rows.front().size()), static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < rows[j].size(); ++i) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[j][i];
  }
  return m;
}

DenseMatrix read_vectors_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_vectors_csv(in);
}

}  // namespace symnmf
