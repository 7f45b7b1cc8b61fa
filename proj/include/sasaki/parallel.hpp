#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sasaki::par {

enum class Mode { Serial, OpenMP };

// Process-wide execution mode for the data-parallel kernels. The serial
// path is the reference implementation; both paths share the same blocked
// reduction order so results agree bitwise.
Mode mode();
void set_mode(Mode m);
int thread_count();

inline constexpr std::ptrdiff_t kBlock = 1024;

// Element counts below this run serially even in OpenMP mode; cheap
// per-element loops (axpy, reductions) lose to region overhead there.
// Heavy per-element kernels use for_each, which always parallelizes.
inline constexpr std::ptrdiff_t kLightCutoff = 1 << 16;

namespace detail {
template <class F>
void run_indexed(std::ptrdiff_t n, F&& f, bool parallel) {
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
    return;
  }
#endif
  (void)parallel;
  for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
}
}  // namespace detail

template <class F>
void for_each(std::ptrdiff_t n, F&& f) {
  detail::run_indexed(n, f, mode() == Mode::OpenMP);
}

template <class F>
void for_each_light(std::ptrdiff_t n, F&& f) {
  detail::run_indexed(n, f, mode() == Mode::OpenMP && n >= kLightCutoff);
}

template <class F>
void for_each_serial(std::ptrdiff_t n, F&& f) {
  detail::run_indexed(n, f, false);
}

// Blockwise sum: fixed kBlock partials accumulated in index order, so the
// result does not depend on the thread count.
double sum(const double* x, std::ptrdiff_t n);
double dot(const double* x, const double* y, std::ptrdiff_t n);
double sup_norm(const double* x, std::ptrdiff_t n);

double serial_sum(const double* x, std::ptrdiff_t n);
double serial_dot(const double* x, const double* y, std::ptrdiff_t n);
double serial_sup_norm(const double* x, std::ptrdiff_t n);

inline double sum(const std::vector<double>& v) {
  return sum(v.data(), static_cast<std::ptrdiff_t>(v.size()));
}
inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return dot(a.data(), b.data(), static_cast<std::ptrdiff_t>(a.size()));
}
inline double sup_norm(const std::vector<double>& v) {
  return sup_norm(v.data(), static_cast<std::ptrdiff_t>(v.size()));
}

}  // namespace sasaki::par
