#include "projcomp/chart.hpp"

#include <cmath>
#include <memory>

#include "projcomp/rng.hpp"

namespace projcomp {

ChartConnection flat_connection(int dim) {
  ChartConnection c;
  c.dim = dim;
  c.christoffel = [](const VectorXd&, Tensor3& g) { g.set_zero(); };
  c.box_lo = VectorXd::Constant(dim, -1.0);
  c.box_hi = VectorXd::Constant(dim, 1.0);
  c.analytic_ricci = [dim](const VectorXd&) {
    return Eigen::MatrixXd::Zero(dim, dim);
  };
  c.name = "flat";
  return c;
}

VectorXd christoffel_bilinear(const Tensor3& g, const VectorXd& u,
                              const VectorXd& w) {
  const int n = g.n;
  VectorXd out = VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += g(i, j, k) * u[j] * w[k];
    out[i] = s;
  }
  return out;
}

Tensor4 curvature_tensor(const ChartConnection& conn, const VectorXd& x) {
  const int n = conn.dim;
  Tensor3 g0(n);
  conn.eval_christoffel(x, g0);
  // dg[m](i,j,k) = ∂_m Γ^i_{jk}, central differences with per-coordinate step
  std::vector<Tensor3> dg(n, Tensor3(n));
  Tensor3 gp(n), gm(n);
  for (int m = 0; m < n; ++m) {
    const double h = conn.fd_scale * (1.0 + std::abs(x[m]));
    VectorXd xp = x, xm = x;
    xp[m] += h;
    xm[m] -= h;
    conn.eval_christoffel(xp, gp);
    conn.eval_christoffel(xm, gm);
    for (std::size_t q = 0; q < gp.v.size(); ++q)
      dg[m].v[q] = (gp.v[q] - gm.v[q]) / (2.0 * h);
  }
  Tensor4 r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = dg[k](i, l, j) - dg[l](i, k, j);
          for (int m = 0; m < n; ++m)
            s += g0(i, k, m) * g0(m, l, j) - g0(i, l, m) * g0(m, k, j);
          r(i, j, k, l) = s;
        }
  return r;
}

Eigen::MatrixXd ricci_tensor(const ChartConnection& conn, const VectorXd& x) {
  if (conn.analytic_ricci) return conn.analytic_ricci(x);
  const int n = conn.dim;
  Tensor4 r = curvature_tensor(conn, x);
  Eigen::MatrixXd ric(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += 0.5 * (r(k, i, k, j) + r(k, j, k, i));
      ric(i, j) = s;
    }
  return ric;
}

namespace {

/// Localizes the domain-boundary crossing inside a dense segment by binary
/// search on the inside() predicate; returns the last inside time.
double localize_exit(const ChartConnection& conn, const DenseSegment& seg,
                     int dim) {
  double lo = seg.t0(), hi = seg.t1();
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (conn.contains(seg.eval(mid).head(dim)))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

GeodesicTrajectory integrate_geodesic(const ChartConnection& conn,
                                      const VectorXd& x0, const VectorXd& v0,
                                      double t0, double t1,
                                      const OdeOptions& opt) {
  const int n = conn.dim;
  if (x0.size() != n || v0.size() != n)
    throw std::invalid_argument("integrate_geodesic: dimension mismatch");
  if (!conn.contains(x0))
    throw std::invalid_argument("integrate_geodesic: x0 outside chart domain");
  if (v0.norm() == 0.0)
    throw std::invalid_argument("integrate_geodesic: zero initial velocity");

  GeodesicTrajectory traj;
  traj.dim = n;
  traj.t_start = t0;
  traj.t_requested = t1;

  // The quartic interpolant's defect runs ~50x the accepted step error;
  // stepping with this margin keeps the trajectory residual within the
  // configured tolerance.
  OdeOptions tight = opt;
  tight.atol = opt.atol * 0.02;
  tight.rtol = opt.rtol * 0.02;

  Tensor3 g(n);
  OdeRhs rhs = [&conn, &g, n](double, const VectorXd& y, VectorXd& dy) {
    dy.resize(2 * n);
    VectorXd x = y.head(n), v = y.tail(n);
    conn.eval_christoffel(x, g);
    dy.head(n) = v;
    dy.tail(n) = -christoffel_bilinear(g, v, v);
  };

  VectorXd y0(2 * n);
  y0 << x0, v0;

  bool exited = false;
  double t_exit = t1;
  Tensor3 gd(n);
  VectorXd f_mid(2 * n);
  StepObserver obs = [&](const DenseSegment& seg) {
    // step defect at the midpoint, in local-error units
    double tm = 0.5 * (seg.t0() + seg.t1());
    VectorXd ym = seg.eval(tm);
    VectorXd dm = seg.eval_derivative(tm);
    conn.eval_christoffel(ym.head(n), gd);
    f_mid.head(n) = ym.tail(n);
    f_mid.tail(n) = -christoffel_bilinear(gd, ym.tail(n), ym.tail(n));
    double defect = (dm - f_mid).lpNorm<Eigen::Infinity>() *
                    std::abs(seg.t1() - seg.t0());
    traj.max_step_defect = std::max(traj.max_step_defect, defect);

    traj.sol.append(seg);
    if (!conn.contains(seg.eval(seg.t1()).head(n))) {
      exited = true;
      t_exit = localize_exit(conn, seg, n);
      return ObserverSignal::kStop;
    }
    return ObserverSignal::kContinue;
  };

  OdeResult res = integrate(rhs, t0, y0, t1, tight, obs);
  if (exited) {
    traj.end = GeodesicTrajectory::End::kChartExit;
    traj.t_end = t_exit;
    VectorXd ye = traj.sol.eval(t_exit);
    traj.x_end = ye.head(n);
    traj.v_end = ye.tail(n);
  } else if (!res.ok()) {
    traj.end = GeodesicTrajectory::End::kStepFailure;
    traj.t_end = res.t;
    traj.x_end = res.y.head(n);
    traj.v_end = res.y.tail(n);
  } else {
    traj.end = GeodesicTrajectory::End::kReachedEnd;
    traj.t_end = res.t;
    traj.x_end = res.y.head(n);
    traj.v_end = res.y.tail(n);
  }
  return traj;
}

double RicciAlong::operator()(double t) const {
  VectorXd y = m_traj->sol.eval(t);
  const int n = m_conn->dim;
  VectorXd x = y.head(n), v = y.tail(n);
  Eigen::MatrixXd ric = ricci_tensor(*m_conn, x);
  return v.dot(ric * v);
}

namespace {

/// Orthonormal completion of v into a basis: column 0 is parallel to v.
Eigen::MatrixXd completed_frame(const VectorXd& v) {
  const int n = static_cast<int>(v.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m.col(0) = v;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  // Q's first column is ±v/|v|; align it with v.
  if (q.col(0).dot(v) < 0) q = -q;
  return q;
}

}  // namespace

VectorXd JacobiField::a(double t) const {
  const int n = dim;
  return sol.eval(t).segment(2 * n + n * (n - 1), n - 1);
}

VectorXd JacobiField::a1(double t) const {
  const int n = dim;
  return sol.eval(t).segment(2 * n + n * (n - 1) + (n - 1), n - 1);
}

Eigen::MatrixXd JacobiField::frame(double t) const {
  const int n = dim;
  VectorXd y = sol.eval(t);
  Eigen::MatrixXd fr(n, n);
  fr.col(0) = y.segment(n, n);
  for (int c = 0; c < n - 1; ++c) fr.col(c + 1) = y.segment(2 * n + c * n, n);
  return fr;
}

OdeRhs make_joint_rhs(const ChartConnection& conn, const JointLayout& lay) {
  const int n = lay.n;
  auto g = std::make_shared<Tensor3>(n);
  JointLayout l = lay;
  return [&conn, g, l, n](double, const VectorXd& y, VectorXd& dy) {
    dy.resize(y.size());
    VectorXd x = y.head(n), v = y.segment(n, n);
    conn.eval_christoffel(x, *g);
    dy.head(n) = v;
    dy.segment(n, n) = -christoffel_bilinear(*g, v, v);
    if (!l.frame) return;

    Eigen::MatrixXd frame(n, n);
    frame.col(0) = v;
    for (int c = 0; c < n - 1; ++c) {
      VectorXd e = y.segment(l.frame_offset() + c * n, n);
      frame.col(c + 1) = e;
      dy.segment(l.frame_offset() + c * n, n) = -christoffel_bilinear(*g, v, e);
    }
    if (!l.jacobi) return;

    VectorXd a = y.segment(l.a_offset(), n - 1);
    VectorXd a1 = y.segment(l.a1_offset(), n - 1);

    Tensor4 r = curvature_tensor(conn, x);
    // w_J = R(e_1, e_J) e_1 in chart coordinates
    Eigen::MatrixXd w(n, n - 1);
    for (int jj = 0; jj < n - 1; ++jj) {
      VectorXd ej = frame.col(jj + 1);
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int ll = 0; ll < n; ++ll)
              s += r(i, j, k, ll) * v[j] * v[k] * ej[ll];
        w(i, jj) = s;
      }
    }
    auto lu = frame.partialPivLu();
    Eigen::MatrixXd coeffs = lu.solve(w);  // K^I_{11J} in rows 1..n-1
    VectorXd da = a1;
    if (conn.has_torsion) {
      Eigen::MatrixXd tor(n, n - 1);
      for (int jj = 0; jj < n - 1; ++jj) {
        VectorXd ej = frame.col(jj + 1);
        tor.col(jj) = christoffel_bilinear(*g, v, ej) -
                      christoffel_bilinear(*g, ej, v);
      }
      Eigen::MatrixXd tc = lu.solve(tor);
      da += tc.bottomRows(n - 1) * a;
    }
    dy.segment(l.a_offset(), n - 1) = da;
    dy.segment(l.a1_offset(), n - 1) = coeffs.bottomRows(n - 1) * a;
  };
}

Eigen::MatrixXd jacobi_start_frame(const VectorXd& v0) {
  return completed_frame(v0);
}

JacobiField integrate_jacobi(const ChartConnection& conn,
                             const GeodesicTrajectory& traj,
                             const VectorXd& a0, const VectorXd& a1_0,
                             const OdeOptions& opt) {
  const int n = conn.dim;
  if (a0.size() != n - 1 || a1_0.size() != n - 1)
    throw std::invalid_argument("integrate_jacobi: init has wrong size");

  const double t0 = traj.t_start;
  const double t1 = traj.t_end;
  VectorXd x0 = traj.x(t0), v0 = traj.v(t0);

  // Frame columns e_2..e_n: orthonormal complement of the start velocity,
  // then parallel transported.
  Eigen::MatrixXd q = completed_frame(v0);

  JointLayout lay{n, true, true};
  const int nf = n * (n - 1);
  VectorXd y0(lay.size());
  y0.head(n) = x0;
  y0.segment(n, n) = v0;
  for (int c = 0; c < n - 1; ++c)
    y0.segment(lay.frame_offset() + c * n, n) = q.col(c + 1);
  y0.segment(lay.a_offset(), n - 1) = a0;
  y0.segment(lay.a1_offset(), n - 1) = a1_0;

  OdeRhs rhs = make_joint_rhs(conn, lay);

  JacobiField field;
  field.dim = n;
  field.t0 = t0;
  field.t1 = t1;
  OdeOptions tight = opt;
  tight.atol = opt.atol * 0.02;
  tight.rtol = opt.rtol * 0.02;
  OdeResult res = integrate_dense(rhs, t0, y0, t1, tight, field.sol);
  if (!res.ok()) throw StepFailure("integrate_jacobi: " + res.detail);

  if (n == 2) {
    field.zero_times = component_zeros(field.sol, 2 * n + nf);
  } else {
    // Norm minima below tolerance.
    double amax = 0.0;
    for (const auto& seg : field.sol.segments())
      amax = std::max(amax,
                      seg.eval(seg.t1()).segment(2 * n + nf, n - 1).norm());
    for (const auto& seg : field.sol.segments()) {
      for (int s = 0; s <= 4; ++s) {
        double t = seg.t0() + (seg.t1() - seg.t0()) * s / 4.0;
        if (seg.eval(t).segment(2 * n + nf, n - 1).norm() < 1e-8 * (amax + 1)) {
          if (field.zero_times.empty() ||
              std::abs(field.zero_times.back() - t) > 1e-6)
            field.zero_times.push_back(t);
        }
      }
    }
  }
  return field;
}

VectorXd geodesic_curvature(const ChartConnection& conn,
                            const std::function<VectorXd(double)>& curve,
                            double t, double fd_step) {
  const int n = conn.dim;
  const double h = fd_step;
  VectorXd cp = curve(t + h), cm = curve(t - h), c0 = curve(t);
  VectorXd u = (cp - cm) / (2.0 * h);
  if (u.norm() < 1e-10)
    throw std::invalid_argument("geodesic_curvature: degenerate velocity");
  VectorXd acc = (cp - 2.0 * c0 + cm) / (h * h);
  Tensor3 g(n);
  conn.eval_christoffel(c0, g);
  VectorXd cov = acc + christoffel_bilinear(g, u, u);
  Eigen::MatrixXd q = completed_frame(u);
  VectorXd comps = q.transpose() * cov;
  return comps.tail(n - 1) / u.squaredNorm();
}

std::pair<VectorXd, double> weyl_project(const Tensor3& diff) {
  const int n = diff.n;
  VectorXd lambda(n);
  for (int m = 0; m < n; ++m) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += diff(k, m, k) + diff(k, k, m);
    lambda[m] = s / (2.0 * n + 2.0);
  }
  double res2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double d = diff(i, j, k) - ((i == k ? lambda[j] : 0.0) +
                                    (i == j ? lambda[k] : 0.0));
        res2 += d * d;
      }
  return {lambda, std::sqrt(res2)};
}

WeylResult weyl_equivalence(const ChartConnection& conn_a,
                            const ChartConnection& conn_b,
                            const WeylOptions& opt) {
  if (conn_a.dim != conn_b.dim)
    throw std::invalid_argument("weyl_equivalence: dimension mismatch");
  const int n = conn_a.dim;
  SplitMix64 rng(opt.seed);
  WeylResult out;
  Tensor3 ga(n), gb(n), d(n);
  int attempts = 0;
  for (int s = 0; s < opt.n_samples; ++s) {
    if (++attempts > 100 * opt.n_samples)
      throw std::runtime_error("weyl_equivalence: sampling box misses domain");
    VectorXd x(n);
    for (int i = 0; i < n; ++i)
      x[i] = conn_a.box_lo[i] +
             (conn_a.box_hi[i] - conn_a.box_lo[i]) * rng.uniform();
    if (!conn_a.contains(x) || !conn_b.contains(x)) {
      --s;  // resample
      continue;
    }
    conn_a.eval_christoffel(x, ga);
    conn_b.eval_christoffel(x, gb);
    for (std::size_t q = 0; q < d.v.size(); ++q) d.v[q] = gb.v[q] - ga.v[q];
    auto [lambda, res] = weyl_project(d);
    out.samples.push_back({x, lambda, res});
    out.max_residual = std::max(out.max_residual, res);
  }
  out.equivalent = out.max_residual < opt.tol;
  return out;
}

}  // namespace projcomp
