#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace sasaki {

using Cx = std::complex<double>;
using CVec = std::vector<Cx>;

inline constexpr Cx kI{0.0, 1.0};

// Version tag for the fixed ordering (dx, dz^1..dz^k, dzbar^1..dzbar^k)
// of the complexified holonomic cobasis. Embedded in every report.
inline constexpr const char* kBasisConvention = "dx,dz,dzbar/v1";

// Index helpers for the 2k+1 complexified basis.
// 0 -> dx, 1..k -> dz^m, k+1..2k -> dzbar^m.
struct Basis {
  int k;
  int dim() const { return 2 * k + 1; }
  int hol(int m) const { return 1 + m; }
  int anti(int m) const { return 1 + k + m; }
  bool is_hol(int mu) const { return mu >= 1 && mu <= k; }
  bool is_anti(int mu) const { return mu > k; }
  // conjugation: fixes 0, swaps dz^m <-> dzbar^m
  int bar(int mu) const {
    if (mu == 0) return 0;
    return mu <= k ? mu + k : mu - k;
  }
  // coordinate index of a hol/anti basis slot
  int coord(int mu) const { return mu <= k ? mu - 1 : mu - k - 1; }
};

// Chart point (x, z^1..z^k) in C^k x R.
struct ChartPoint {
  double x = 0.0;
  CVec z;

  ChartPoint() = default;
  ChartPoint(double x_, CVec z_) : x(x_), z(std::move(z_)) {}
  explicit ChartPoint(CVec z_) : x(0.0), z(std::move(z_)) {}

  int k() const { return static_cast<int>(z.size()); }
  bool finite() const {
    if (!std::isfinite(x)) return false;
    for (const Cx& c : z)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
  }
};

struct InvalidSpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct HessianNotPositiveDefiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularHessianError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StepUnderflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Seeded uniform double in [0,1). mt19937_64 bits mapped directly so the
// stream does not depend on libstdc++'s distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Cx complex_in_disc(double radius) {
    // rejection from the bounding square
    for (;;) {
      double a = uniform(-radius, radius), b = uniform(-radius, radius);
      if (a * a + b * b <= radius * radius) return {a, b};
    }
  }
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Points with sum |z^m|^2 < radius^2, x = 0.
inline std::vector<ChartPoint> sample_ball(int k, int count, double radius,
                                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ChartPoint> pts;
  pts.reserve(count);
  while (static_cast<int>(pts.size()) < count) {
    CVec z(k);
    double s = 0.0;
    for (int m = 0; m < k; ++m) {
      z[m] = rng.complex_in_disc(radius);
      s += std::norm(z[m]);
    }
    if (s < radius * radius) pts.emplace_back(std::move(z));
  }
  return pts;
}

}  // namespace sasaki
