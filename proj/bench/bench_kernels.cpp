// Timing comparison of the serial reference kernels against the OpenMP
// paths: reductions, Liouville residual assembly + CG, and a batch
// Einstein point campaign.

#include <chrono>
#include <cstdio>
#include <vector>

#include "sasaki/einstein.hpp"
#include "sasaki/parallel.hpp"
#include "sasaki/solver.hpp"

using namespace sasaki;
using clk = std::chrono::steady_clock;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = clk::now();
  for (int r = 0; r < reps; ++r) fn();
  return std::chrono::duration<double>(clk::now() - t0).count() / reps;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.4f ms %10.4f ms %8.2fx\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel);
}

template <class F>
void compare(const char* name, int reps, F&& fn) {
  par::set_mode(par::Mode::Serial);
  const double s = time_of(fn, reps);
  par::set_mode(par::Mode::OpenMP);
  const double p = time_of(fn, reps);
  row(name, s, p);
}

}  // namespace

int main() {
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp",
              "speedup");
  std::printf("threads available: %d\n", []() {
    par::set_mode(par::Mode::OpenMP);
    return par::thread_count();
  }());

  std::vector<double> a(1 << 22), b(1 << 22);
  Rng rng(7);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.uniform(-1, 1);
    b[i] = rng.uniform(-1, 1);
  }
  compare("dot 4M", 20, [&] { (void)par::dot(a, b); });
  compare("sup_norm 4M", 20, [&] { (void)par::sup_norm(a); });

  compare("liouville solve 128x128", 3, [&] {
    const int N = 128;
    const double hw = 0.5, h = 2.0 * hw / (N - 1);
    GridField g =
        GridField::make(N, N, -hw, -hw, h, sphere_manufactured_k1, 0.0);
    (void)solve_liouville_k1(g, 1.0, {});
  });

  compare("verify grid 96x96", 3, [&] {
    const int N = 96;
    const double hw = 0.5, h = 2.0 * hw / (N - 1);
    GridField g = GridField::from_function(N, N, -hw, -hw, h,
                                           sphere_manufactured_k1);
    (void)verify_solution(g, 4);
  });

  compare("classify sphere k=3, 200 pts", 3, [&] {
    (void)classify(PotentialSpec::sphere(3), {200, 1.5, 99});
  });

  par::set_mode(par::Mode::OpenMP);
  return 0;
}
