#ifndef PROJCOMP_SWEEP_HPP
#define PROJCOMP_SWEEP_HPP

#include <exception>
#include <functional>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "projcomp/oscillation.hpp"
#include "projcomp/registry.hpp"
#include "projcomp/zoll.hpp"

namespace projcomp {

/// Runs n independent jobs and collects results in input order. The parallel
/// path fans out over an OpenMP worker pool; per-index work is pure, so the
/// output is bitwise identical to the serial reference.
template <class R, class F>
std::vector<R> run_indexed(int n, F&& job, bool parallel, int threads = 0) {
  std::vector<R> out(static_cast<std::size_t>(n));
  if (!parallel) {
    for (int i = 0; i < n; ++i) out[i] = job(i);
    return out;
  }
  std::exception_ptr first_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads( \
    threads > 0 ? threads : omp_get_max_threads())
#endif
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = job(i);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        if (!first_error) first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

struct CompletenessSweepSpec {
  std::string conn = "sphere";
  GeometryParams params;
  int count = 8;
  std::uint64_t seed = 1;
  double t_end = 40.0;
  double window_lo = 0.05;
  VerdictOptions vopts;
};

/// Verdict for one geodesic of a registry geometry (both rays examined).
CompletenessVerdict geodesic_verdict(const GeometryHandle& geom,
                                     const VectorXd& x0, const VectorXd& v0,
                                     const CompletenessSweepSpec& spec,
                                     const std::string& id);

std::vector<CompletenessVerdict> completeness_sweep(
    const CompletenessSweepSpec& spec, bool parallel = true, int threads = 0);

struct ZollSweepCase {
  double z0 = 0.0, theta0 = 0.0, psi = 0.0;
  ZollClosure closure;
  CompletenessVerdict verdict;  // jacobi-zero route when closed
};

struct ZollSweepSpec {
  int count = 20;
  std::uint64_t seed = 7;
  bool with_jacobi = true;
  ZollClosureOptions closure;
  JacobiZeroOptions jacobi;
};

std::vector<ZollSweepCase> zoll_closure_sweep(const ZollMetric& metric,
                                              const ZollSweepSpec& spec,
                                              bool parallel = true,
                                              int threads = 0);

}  // namespace projcomp

#endif
