//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "blockmol/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blockmol::kernels {

namespace scalar {

double dot(const double *a, const double *b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

double reduce_max(const double *x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, x[i]);
  }
  return m;
}

double cosine(const double *a, const double *b, std::size_t n) {
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) {
    return 0.0;
  }
  return ab / std::sqrt(aa * bb);
}

}  // namespace scalar

#if defined(BLOCKMOL_HAVE_AVX2)
namespace avx2 {
bool supported();
double dot(const double *a, const double *b, std::size_t n);
double reduce_max(const double *x, std::size_t n);
double cosine(const double *a, const double *b, std::size_t n);
}  // namespace avx2
#endif

namespace {

struct Backend {
  const char *name;
  double (*dot)(const double *, const double *, std::size_t);
  double (*reduce_max)(const double *, std::size_t);
  double (*cosine)(const double *, const double *, std::size_t);
};

Backend pick_backend() {
#if defined(BLOCKMOL_HAVE_AVX2)
  if (avx2::supported()) {
    return Backend{"avx2", &avx2::dot, &avx2::reduce_max, &avx2::cosine};
  }
#endif
  return Backend{"scalar", &scalar::dot, &scalar::reduce_max, &scalar::cosine};
}

const Backend &active() {
  static const Backend backend = pick_backend();
  return backend;
}

}  // namespace

double dot(const double *a, const double *b, std::size_t n) {
  return active().dot(a, b, n);
}

double reduce_max(const double *x, std::size_t n) {
  return active().reduce_max(x, n);
}

double cosine(const double *a, const double *b, std::size_t n) {
  return active().cosine(a, b, n);
}

double exp_sum_shifted(const double *x, std::size_t n, double shift) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::exp(x[i] - shift);
  }
  return acc;
}

double log_sum_exp(const double *x, std::size_t n) {
  const double m = reduce_max(x, n);
  if (!std::isfinite(m)) {
    return m;  // empty input or +/-inf entries dominate either way
  }
  return m + std::log(exp_sum_shifted(x, n, m));
}

const char *active_backend() { return active().name; }

}  // namespace blockmol::kernels
