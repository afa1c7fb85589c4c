//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Small dense-vector primitives used by the embedding and scoring code.
// Each primitive has a scalar reference implementation plus optionally a
// vectorized variant; the fastest supported variant is selected once at
// runtime. scalar:: stays publicly visible so tests can check the active
// backend against the reference.

#pragma once

#include <cstddef>

namespace blockmol::kernels {

namespace scalar {

double dot(const double *a, const double *b, std::size_t n);
double reduce_max(const double *x, std::size_t n);
double cosine(const double *a, const double *b, std::size_t n);

}  // namespace scalar

// Dispatched entry points. Results may differ from scalar:: in the last
// few ulps (different summation order), never more.
double dot(const double *a, const double *b, std::size_t n);
double reduce_max(const double *x, std::size_t n);  // -inf for n == 0
// cosine(a, b) in [-1, 1]; returns 0 when either vector has zero norm.
double cosine(const double *a, const double *b, std::size_t n);

// sum_i exp(x[i] - shift); exp() stays scalar libm on every backend.
double exp_sum_shifted(const double *x, std::size_t n, double shift);
// max-shifted log(sum_i exp(x[i])); overflow-safe, -inf for n == 0.
double log_sum_exp(const double *x, std::size_t n);

// Name of the selected backend: "scalar" or "avx2".
const char *active_backend();

}  // namespace blockmol::kernels
