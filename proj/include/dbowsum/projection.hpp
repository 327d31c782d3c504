#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "dbowsum/common.hpp"
#include "dbowsum/rng.hpp"
#include "dbowsum/vecmath.hpp"

namespace dbowsum {

struct ProjectedPoint {
  std::string set_id;
  std::string kind;  // document, system_summary, reference_centroid
  double x = 0.0;
  double y = 0.0;
};

struct LabeledVector {
  std::string set_id;
  std::string kind;
  EmbeddingVector vector;
};

namespace detail {

// Power iteration for one unit eigenvector of the covariance of the
// centered rows. prev, when given, is projected out every step so the
// second component stays orthogonal to the first. A vanishing iterate
// means a zero eigenvalue; the zero vector is returned for it.
inline std::vector<double> power_component(const std::vector<std::vector<double>>& rows,
                                           double scale, const std::vector<double>* prev) {
  constexpr int kIterations = 200;
  constexpr double kTol = 1e-9;
  const std::size_t n = rows.size();
  const std::size_t d = rows.front().size();
  const double floor = 1e-12 * (scale > 0.0 ? scale : 1.0);

  auto project_out = [&](std::vector<double>& v) {
    if (!prev) return;
    double p = 0.0;
    for (std::size_t j = 0; j < d; ++j) p += v[j] * (*prev)[j];
    for (std::size_t j = 0; j < d; ++j) v[j] -= p * (*prev)[j];
  };
  auto norm_of = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  SplitMix64 rng(0x9e3779b9UL);
  std::vector<double> v(d);
  for (std::size_t j = 0; j < d; ++j) v[j] = rng.next_real() - 0.5;
  project_out(v);
  double norm = norm_of(v);
  if (norm == 0.0) return std::vector<double>(d, 0.0);
  for (double& x : v) x /= norm;

  std::vector<double> y(d);
  for (int iter = 0; iter < kIterations; ++iter) {
    y.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double p = 0.0;
      for (std::size_t j = 0; j < d; ++j) p += rows[i][j] * v[j];
      for (std::size_t j = 0; j < d; ++j) y[j] += p * rows[i][j];
    }
    for (double& x : y) x /= static_cast<double>(n - 1);
    project_out(y);
    norm = norm_of(y);
    if (norm < floor) return std::vector<double>(d, 0.0);
    for (double& x : y) x /= norm;
    double align = 0.0;
    for (std::size_t j = 0; j < d; ++j) align += y[j] * v[j];
    v = y;
    if (1.0 - std::fabs(align) < kTol) break;
  }

  std::size_t arg = 0;
  for (std::size_t j = 1; j < d; ++j) {
    if (std::fabs(v[j]) > std::fabs(v[arg])) arg = j;
  }
  if (v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
  return v;
}

}  // namespace detail

// Mean-centers the vectors and projects them onto the top two principal
// components. Degenerate directions (zero variance) map to coordinate 0.
inline std::vector<std::pair<double, double>> pca_project(
    const std::vector<EmbeddingVector>& vectors) {
  const std::size_t n = vectors.size();
  if (n < 2) throw Error("need at least 2 vectors");
  const std::size_t d = vectors.front().size();
  if (d < 2) throw Error("vector length must be >= 2");
  for (const EmbeddingVector& v : vectors) {
    if (v.size() != d) throw Error("vector length mismatch");
  }

  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean[j] += vectors[i][j];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  double variance = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      rows[i][j] = static_cast<double>(vectors[i][j]) - mean[j];
      variance += rows[i][j] * rows[i][j];
    }
  }
  variance /= static_cast<double>(n - 1);

  std::vector<std::pair<double, double>> out(n, {0.0, 0.0});
  if (variance == 0.0) return out;

  const std::vector<double> c1 = detail::power_component(rows, variance, nullptr);
  const std::vector<double> c2 = detail::power_component(rows, variance, &c1);
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0;
    double y = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      x += rows[i][j] * c1[j];
      y += rows[i][j] * c2[j];
    }
    out[i] = {x, y};
  }
  return out;
}

// All labeled vectors are projected jointly so coordinates are comparable
// across sets and kinds.
inline std::vector<ProjectedPoint> project_points(const std::vector<LabeledVector>& items) {
  std::vector<EmbeddingVector> vectors;
  vectors.reserve(items.size());
  for (const LabeledVector& item : items) vectors.push_back(item.vector);
  const std::vector<std::pair<double, double>> coords = pca_project(vectors);
  std::vector<ProjectedPoint> out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.push_back({items[i].set_id, items[i].kind, coords[i].first, coords[i].second});
  }
  return out;
}

inline void write_projection_tsv(const std::string& path,
                                 const std::vector<ProjectedPoint>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << "set_id\tkind\tx\ty\n";
  for (const ProjectedPoint& p : points) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s\t%s\t%.6f\t%.6f\n", p.set_id.c_str(), p.kind.c_str(),
                  p.x, p.y);
    out << buf;
  }
  if (!out) throw Error("cannot write file: " + path);
}

}  // namespace dbowsum
