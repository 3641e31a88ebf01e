#include "projcomp/sweep.hpp"

#include <cmath>

#include "projcomp/rng.hpp"

namespace projcomp {

namespace {

struct RayData {
  std::function<double(double)> q;
  double reach = 0.0;
};

RayData single_chart_ray(const GeometryHandle& geom, const VectorXd& x0,
                         const VectorXd& v0, double t_end,
                         const OdeOptions& ode) {
  auto traj = std::make_shared<GeodesicTrajectory>(
      integrate_geodesic(geom.chart, x0, v0, 0.0, t_end, ode));
  if (traj->end == GeodesicTrajectory::End::kStepFailure)
    throw StepFailure("completeness sweep: geodesic integration failed");
  RayData ray;
  ray.reach = traj->t_end;
  const ChartConnection* chart = &geom.chart;
  ray.q = [traj, chart](double t) {
    return RicciAlong(*chart, *traj)(t);
  };
  return ray;
}

RayData atlas_ray(const GeometryHandle& geom, const VectorXd& x0,
                  const VectorXd& v0, double t_end, const OdeOptions& ode) {
  auto atlas = std::make_shared<Atlas>(geom.metric->atlas());
  AtlasIntegrateOptions aopt;
  aopt.ode = ode;
  aopt.ode.h_max = 0.04;
  auto traj = std::make_shared<AtlasTrajectory>(
      integrate_atlas_geodesic(*atlas, 0, x0, v0, 0.0, t_end, aopt));
  if (traj->end == AtlasTrajectory::End::kStepFailure)
    throw StepFailure("completeness sweep: atlas integration failed");
  RayData ray;
  ray.reach = traj->t_end;
  ray.q = [atlas, traj](double t) { return AtlasRicciAlong(*atlas, *traj)(t); };
  return ray;
}

}  // namespace

CompletenessVerdict geodesic_verdict(const GeometryHandle& geom,
                                     const VectorXd& x0, const VectorXd& v0,
                                     const CompletenessSweepSpec& spec,
                                     const std::string& id) {
  RayData fwd, bwd;
  if (geom.kind == GeometryHandle::Kind::kZollAtlas) {
    fwd = atlas_ray(geom, x0, v0, spec.t_end, spec.vopts.ode);
    bwd = atlas_ray(geom, x0, -v0, spec.t_end, spec.vopts.ode);
  } else {
    fwd = single_chart_ray(geom, x0, v0, spec.t_end, spec.vopts.ode);
    bwd = single_chart_ray(geom, x0, -v0, spec.t_end, spec.vopts.ode);
  }
  double window_hi = 0.999 * std::min(fwd.reach, bwd.reach);
  double window_lo = std::min(spec.window_lo, 0.1 * window_hi);
  return completeness_verdict(fwd.q, bwd.q, window_lo, window_hi, spec.vopts,
                              id);
}

std::vector<CompletenessVerdict> completeness_sweep(
    const CompletenessSweepSpec& spec, bool parallel, int threads) {
  GeometryHandle geom = geometry_by_name(spec.conn, spec.params);
  return run_indexed<CompletenessVerdict>(
      spec.count,
      [&](int i) {
        VectorXd x0, v0;
        geom.sample_ic(spec.seed, i, x0, v0);
        return geodesic_verdict(geom, x0, v0, spec,
                                spec.conn + "#" + std::to_string(i));
      },
      parallel, threads);
}

std::vector<ZollSweepCase> zoll_closure_sweep(const ZollMetric& metric,
                                              const ZollSweepSpec& spec,
                                              bool parallel, int threads) {
  return run_indexed<ZollSweepCase>(
      spec.count,
      [&](int i) {
        SplitMix64 rng(spec.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
        ZollSweepCase c;
        c.z0 = rng.uniform(-0.7, 0.7);
        c.theta0 = rng.uniform(0.0, 2.0 * M_PI);
        c.psi = rng.uniform(0.0, 2.0 * M_PI);
        c.closure = zoll_geodesic_closure(metric, c.z0, c.theta0, c.psi,
                                          spec.closure);
        if (c.closure.closed && spec.with_jacobi) {
          ClosedGeodesic geo{c.z0, c.theta0, c.psi, c.closure.period};
          c.verdict = jacobi_zero_completeness(metric, geo, 0.0, 1.0,
                                               spec.jacobi);
          c.verdict.geodesic_id = "zoll#" + std::to_string(i);
        }
        return c;
      },
      parallel, threads);
}

}  // namespace projcomp
