// Compares the serial reference and the OpenMP grid evaluation of the
// kernel density profile, and checks that they agree bitwise.
#include "dpaudit/density.hpp"
#include "dpaudit/loss.hpp"
#include "dpaudit/mechanisms.hpp"
#include "dpaudit/rng.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
  using namespace dpaudit;
  std::size_t n = 200000;
  std::size_t grid_points = 2001;
  int reps = 5;
  if (argc > 1) n = std::stoull(argv[1]);
  if (argc > 2) grid_points = std::stoull(argv[2]);
  if (argc > 3) reps = std::atoi(argv[3]);

  Rng rng(42);
  const Mechanism mech = make_mechanism(MechKind::Laplace, 1.5);
  Input in;
  in.stat = {0.0};
  const Sample sample = mech.draw(in, n, rng);
  const Kernel kernel{KernelShape::Gaussian, 1};
  const double h = default_bandwidth(sample, BandwidthMode::Estimation);
  const auto est = DensityEstimate::tkde(sample, h, kernel, 1e-3);
  const auto grid = EvalGrid::continuous(-1.0, 1.0, grid_points).continuous_points();

  using clock = std::chrono::steady_clock;
  auto time_it = [&](auto&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
      const auto t0 = clock::now();
      fn();
      const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      if (ms < best) best = ms;
    }
    return best;
  };

  std::vector<double> serial, parallel;
  const double t_serial = time_it([&] { serial = est.profile_serial(grid); });
  const double t_parallel = time_it([&] { parallel = est.profile(grid); });

  bool identical = serial.size() == parallel.size();
  for (std::size_t j = 0; identical && j < serial.size(); ++j)
    if (serial[j] != parallel[j]) identical = false;

  std::printf("n=%zu grid=%zu reps=%d\n", n, grid_points, reps);
  std::printf("serial   : %10.2f ms\n", t_serial);
  std::printf("parallel : %10.2f ms  (speedup %.2fx)\n", t_parallel, t_serial / t_parallel);
  std::printf("bitwise identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
