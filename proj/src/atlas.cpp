#include "projcomp/atlas.hpp"

#include <cmath>

namespace projcomp {

AtlasSample AtlasTrajectory::sample(double t) const {
  const bool fwd = t_end >= t_start;
  const Piece* piece = &pieces.back();
  for (const auto& p : pieces) {
    if (fwd ? (t <= p.sol.t1() + 1e-14) : (t >= p.sol.t1() - 1e-14)) {
      piece = &p;
      break;
    }
  }
  const int n = dim;
  VectorXd y = piece->sol.eval(t);
  AtlasSample s;
  s.t = t;
  s.chart = piece->chart;
  s.x = y.head(n);
  s.v = y.segment(n, n);
  if (layout.frame) {
    s.frame.resize(n, n - 1);
    for (int c = 0; c < n - 1; ++c)
      s.frame.col(c) = y.segment(layout.frame_offset() + c * n, n);
  }
  if (layout.jacobi) {
    s.a = y.segment(layout.a_offset(), n - 1);
    s.a1 = y.segment(layout.a1_offset(), n - 1);
  }
  return s;
}

AtlasTrajectory integrate_atlas_geodesic(const Atlas& atlas, int chart0,
                                         const VectorXd& x0, const VectorXd& v0,
                                         double t0, double t1,
                                         const AtlasIntegrateOptions& opt,
                                         const AtlasObserver& observer) {
  const int n = atlas.charts.at(chart0).dim;
  JointLayout lay{n, opt.with_frame || opt.with_jacobi, opt.with_jacobi};

  AtlasTrajectory out;
  out.dim = n;
  out.layout = lay;
  out.t_start = t0;

  VectorXd y(lay.size());
  y.head(n) = x0;
  y.segment(n, n) = v0;
  if (lay.frame) {
    Eigen::MatrixXd q = jacobi_start_frame(v0);
    for (int c = 0; c < n - 1; ++c)
      y.segment(lay.frame_offset() + c * n, n) = q.col(c + 1);
  }
  if (lay.jacobi) {
    VectorXd a0 = opt.a0.size() ? opt.a0 : VectorXd::Zero(n - 1);
    VectorXd a1_0 = opt.a1_0.size() ? opt.a1_0 : VectorXd::Zero(n - 1);
    y.segment(lay.a_offset(), n - 1) = a0;
    y.segment(lay.a1_offset(), n - 1) = a1_0;
  }

  int chart = chart0;
  double t = t0;
  bool stopped = false;

  for (int trans = 0; trans <= opt.max_transitions; ++trans) {
    const ChartConnection& conn = atlas.charts[chart];
    OdeRhs rhs = make_joint_rhs(conn, lay);

    out.pieces.push_back({chart, DenseSolution{}});
    DenseSolution& sol = out.pieces.back().sol;

    bool switch_pending = false;
    int next_chart = chart;
    StepObserver obs = [&](const DenseSegment& seg) {
      sol.append(seg);
      if (observer) {
        AtlasObserverEvent ev{chart, &seg};
        if (observer(ev) == ObserverSignal::kStop) {
          stopped = true;
          return ObserverSignal::kStop;
        }
      }
      VectorXd xe = seg.eval(seg.t1()).head(n);
      int pref = atlas.prefer(chart, xe);
      if (pref != chart) {
        switch_pending = true;
        next_chart = pref;
        return ObserverSignal::kStop;
      }
      return ObserverSignal::kContinue;
    };

    OdeResult res = integrate(rhs, t, y, t1, opt.ode, obs);
    t = res.t;
    y = res.y;
    if (sol.empty()) out.pieces.pop_back();

    if (stopped) {
      out.end = AtlasTrajectory::End::kStopped;
      out.t_end = t;
      return out;
    }
    if (res.status == OdeResult::Status::kFailed) {
      out.end = AtlasTrajectory::End::kStepFailure;
      out.detail = res.detail;
      out.t_end = t;
      return out;
    }
    if (!switch_pending) {
      out.end = AtlasTrajectory::End::kReachedEnd;
      out.t_end = t;
      return out;
    }

    // Transition: transform x, v and frame columns; (a, a1) are frame
    // components and carry over unchanged.
    VectorXd xf = y.head(n);
    Eigen::MatrixXd jac = atlas.map_jacobian(chart, next_chart, xf);
    VectorXd xn = atlas.map_point(chart, next_chart, xf);
    if (!atlas.charts[next_chart].contains(xn))
      throw PoleHandling("atlas transition landed outside the target chart");
    y.head(n) = xn;
    y.segment(n, n) = jac * y.segment(n, n);
    if (lay.frame)
      for (int c = 0; c < n - 1; ++c)
        y.segment(lay.frame_offset() + c * n, n) =
            jac * y.segment(lay.frame_offset() + c * n, n);
    chart = next_chart;
  }
  throw PoleHandling("atlas transition limit exceeded");
}

double AtlasRicciAlong::operator()(double t) const {
  AtlasSample s = m_traj->sample(t);
  const ChartConnection& conn = m_atlas->charts[s.chart];
  Eigen::MatrixXd ric = ricci_tensor(conn, s.x);
  return s.v.dot(ric * s.v);
}

}  // namespace projcomp
