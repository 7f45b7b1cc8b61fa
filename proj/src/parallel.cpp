#include "sasaki/parallel.hpp"

#include <atomic>
#include <cmath>

namespace sasaki::par {

namespace {
std::atomic<Mode> g_mode{
#ifdef _OPENMP
    Mode::OpenMP
#else
    Mode::Serial
#endif
};

// Partial sums over fixed blocks, combined in block order. Identical for
// the serial and OpenMP paths; small inputs skip both the scratch vector
// and the parallel region.
template <class BlockFn>
double blocked_reduce(std::ptrdiff_t n, BlockFn&& block, bool parallel) {
  const std::ptrdiff_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks <= 1) return n > 0 ? block(0, n) : 0.0;
  if (!parallel || n < kLightCutoff) {
    double total = 0.0;
    for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
      const std::ptrdiff_t lo = b * kBlock;
      total += block(lo, std::min(n, lo + kBlock));
    }
    return total;
  }
  std::vector<double> partial(nblocks);
  detail::run_indexed(
      nblocks,
      [&](std::ptrdiff_t b) {
        const std::ptrdiff_t lo = b * kBlock;
        partial[b] = block(lo, std::min(n, lo + kBlock));
      },
      true);
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}
}  // namespace

Mode mode() { return g_mode.load(std::memory_order_relaxed); }
void set_mode(Mode m) { g_mode.store(m, std::memory_order_relaxed); }

int thread_count() {
#ifdef _OPENMP
  return mode() == Mode::OpenMP ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

double sum(const double* x, std::ptrdiff_t n) {
  return blocked_reduce(
      n,
      [x](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        double s = 0.0;
        for (std::ptrdiff_t i = lo; i < hi; ++i) s += x[i];
        return s;
      },
      mode() == Mode::OpenMP);
}

double serial_sum(const double* x, std::ptrdiff_t n) {
  return blocked_reduce(
      n,
      [x](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        double s = 0.0;
        for (std::ptrdiff_t i = lo; i < hi; ++i) s += x[i];
        return s;
      },
      false);
}

double dot(const double* x, const double* y, std::ptrdiff_t n) {
  return blocked_reduce(
      n,
      [x, y](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        double s = 0.0;
        for (std::ptrdiff_t i = lo; i < hi; ++i) s += x[i] * y[i];
        return s;
      },
      mode() == Mode::OpenMP);
}

double serial_dot(const double* x, const double* y, std::ptrdiff_t n) {
  return blocked_reduce(
      n,
      [x, y](std::ptrdiff_t lo, std::ptrdiff_t hi) {
        double s = 0.0;
        for (std::ptrdiff_t i = lo; i < hi; ++i) s += x[i] * y[i];
        return s;
      },
      false);
}

namespace {
double sup_impl(const double* x, std::ptrdiff_t n, bool parallel) {
  double m = 0.0;
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static) reduction(max : m)
    for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
  }
#endif
  (void)parallel;
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}
}  // namespace

double sup_norm(const double* x, std::ptrdiff_t n) {
  return sup_impl(x, n, mode() == Mode::OpenMP && n >= kLightCutoff);
}
double serial_sup_norm(const double* x, std::ptrdiff_t n) {
  return sup_impl(x, n, false);
}

}  // namespace sasaki::par
