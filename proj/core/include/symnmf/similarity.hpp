#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "symnmf/matrix.hpp"

namespace symnmf {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Planar point cloud with optional per-point cluster ids.
struct PointSet {
  std::vector<Point2> points;
  std::vector<int> labels;  ///< empty, or one id per point; kNoiseLabel marks noise

  /// 2 x n matrix, one point per column.
  [[nodiscard]] DenseMatrix as_columns() const;
};

inline constexpr int kNoiseLabel = -1;

enum class SigmaMode {
  Knn7,      ///< mean distance to the 7th nearest neighbor
  Diameter,  ///< sqrt(2)/10 times the largest pairwise distance
  Explicit,
};

struct KernelConfig {
  SigmaMode mode = SigmaMode::Knn7;
  double sigma = 0.0;  ///< used when mode == Explicit; must be > 0
};

/// n x p factor with uniform [0, 1) entries drawn column by column.
DenseMatrix random_lowrank_factor(Index n, Index p, std::uint64_t seed);

/// A = V V^T for V = random_lowrank_factor(n, p, seed); exactly symmetric.
DenseMatrix random_lowrank(Index n, Index p, std::uint64_t seed);

/// a_ij = cos(angle(m_i, m_j)) between columns, zero diagonal. Throws on a zero column.
DenseMatrix cosine_similarity(const DenseMatrix& vectors);

/// e_ij = exp(-||m_i - m_j||^2 / sigma^2) between columns, zero diagonal.
DenseMatrix gaussian_kernel(const DenseMatrix& vectors, double sigma);

/// a_ij = d_i^{-1/2} e_ij d_j^{-1/2} with d the row sums. Throws when some d_i = 0.
DenseMatrix normalized_cut(const DenseMatrix& e);

/// Mean over points of the distance to the `neighbor`-th nearest other point.
double sigma_knn(const DenseMatrix& vectors, Index neighbor);
inline double sigma_knn7(const DenseMatrix& vectors) { return sigma_knn(vectors, 7); }

/// sqrt(2)/10 * max_{i,j} ||m_i - m_j||. Needs at least two points.
double sigma_diameter(const DenseMatrix& vectors);

double resolve_sigma(const DenseMatrix& vectors, const KernelConfig& cfg);

/// normalized_cut(gaussian_kernel(vectors, resolve_sigma(vectors, cfg))).
DenseMatrix kernel_similarity(const DenseMatrix& vectors, const KernelConfig& cfg);

/// Planar benchmark layouts in the unit square.
enum class SyntheticKind {
  WellSeparatedNoise,  ///< five equal-variance blobs plus 5% uniform noise
  SubClusters,         ///< three clusters, two of them made of two sub-blobs
  Skew,                ///< three blobs with standard deviations 1:2:4
  DifferentDensity,    ///< four blobs with cardinalities 8:4:2:1
};

/// Accepts wsn, sc, sk, dd (case-insensitive). Throws InvalidInputError otherwise.
SyntheticKind parse_synthetic_kind(std::string_view name);
std::string_view to_string(SyntheticKind kind);

/// n >= 100 points, deterministic per seed.
PointSet gen_synthetic(SyntheticKind kind, Index n, std::uint64_t seed);

/// "x,y[,label]" per line. Blank lines, '#' comments and one leading header are skipped.
PointSet read_points_csv(std::istream& in);
PointSet read_points_csv(const std::string& path);
void write_points_csv(std::ostream& out, const PointSet& points);
void write_points_csv(const std::string& path, const PointSet& points);

/// One data vector per line; returns d x n with one vector per column.
DenseMatrix read_vectors_csv(std::istream& in);
DenseMatrix read_vectors_csv(const std::string& path);

}  // namespace symnmf
