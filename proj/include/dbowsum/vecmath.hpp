#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dbowsum/common.hpp"

namespace dbowsum {

using EmbeddingVector = std::vector<float>;

template <class Real>
double dot(const Real* a, const Real* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += static_cast<double>(a[i]) * b[i];
  return sum;
}

// Elementwise mean of the given vectors.
template <class Real>
std::vector<Real> centroid(const std::vector<std::vector<Real>>& vectors) {
  if (vectors.empty()) throw Error("no documents");
  const std::size_t n = vectors[0].size();
  std::vector<double> sum(n, 0.0);
  for (const auto& v : vectors) {
    if (v.size() != n) throw Error("vector length mismatch");
    for (std::size_t i = 0; i < n; ++i) sum[i] += v[i];
  }
  std::vector<Real> mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    mean[i] = static_cast<Real>(sum[i] / static_cast<double>(vectors.size()));
  }
  return mean;
}

// Squared Euclidean distance ||a - b||^2.
template <class Real>
double recon_error(const std::vector<Real>& a, const std::vector<Real>& b) {
  if (a.size() != b.size()) throw Error("vector length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return sum;
}

template <class Real>
double cosine_sim(const std::vector<Real>& a, const std::vector<Real>& b) {
  if (a.size() != b.size()) throw Error("vector length mismatch");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<double>(a[i]) * b[i];
    aa += static_cast<double>(a[i]) * a[i];
    bb += static_cast<double>(b[i]) * b[i];
  }
  if (aa == 0.0 || bb == 0.0) throw Error("zero-norm vector");
  double c = ab / (std::sqrt(aa) * std::sqrt(bb));
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c;
}

namespace detail {

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow; -log(sigmoid(x)) == softplus(-x).
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace detail

}  // namespace dbowsum
