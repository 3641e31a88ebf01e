// Times the sweep kernels: serial reference vs the OpenMP worker pool, and
// checks the outputs agree bitwise.

#include <chrono>
#include <cstdio>
#include <string>

#include "projcomp/sweep.hpp"

using namespace projcomp;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
double timed(F&& fn) {
  auto t0 = Clock::now();
  fn();
  return seconds_since(t0);
}

bool same_verdicts(const std::vector<CompletenessVerdict>& a,
                   const std::vector<CompletenessVerdict>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].csv_row() != b[i].csv_row()) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int n = argc > 1 ? std::atoi(argv[1]) : 32;

  std::printf("sweep benchmark, %d geodesics per kernel\n", n);
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled at build time; both paths run serially\n");
#endif

  {
    CompletenessSweepSpec spec;
    spec.conn = "sphere";
    spec.count = n;
    spec.t_end = 30.0;
    std::vector<CompletenessVerdict> serial, parallel;
    double ts = timed([&] { serial = completeness_sweep(spec, false); });
    double tp = timed([&] { parallel = completeness_sweep(spec, true); });
    std::printf("completeness sweep (sphere): serial %.3fs  parallel %.3fs  "
                "speedup %.2fx  identical %s\n",
                ts, tp, ts / tp, same_verdicts(serial, parallel) ? "yes" : "NO");
  }
  {
    CompletenessSweepSpec spec;
    spec.conn = "lie:so3";
    spec.count = n;
    std::vector<CompletenessVerdict> serial, parallel;
    double ts = timed([&] { serial = completeness_sweep(spec, false); });
    double tp = timed([&] { parallel = completeness_sweep(spec, true); });
    std::printf("completeness sweep (lie:so3): serial %.3fs  parallel %.3fs  "
                "speedup %.2fx  identical %s\n",
                ts, tp, ts / tp, same_verdicts(serial, parallel) ? "yes" : "NO");
  }
  {
    ZollMetric metric(build_paper_profile(1.0, 0.25, 0.5));
    ZollSweepSpec spec;
    spec.count = std::max(4, n / 2);
    std::vector<ZollSweepCase> serial, parallel;
    double ts = timed([&] { serial = zoll_closure_sweep(metric, spec, false); });
    double tp = timed([&] { parallel = zoll_closure_sweep(metric, spec, true); });
    bool same = serial.size() == parallel.size();
    for (std::size_t i = 0; same && i < serial.size(); ++i)
      same = serial[i].closure.closed == parallel[i].closure.closed &&
             serial[i].closure.period == parallel[i].closure.period;
    std::printf("zoll closure sweep (paper): serial %.3fs  parallel %.3fs  "
                "speedup %.2fx  identical %s\n",
                ts, tp, ts / tp, same ? "yes" : "NO");
  }
  return 0;
}
