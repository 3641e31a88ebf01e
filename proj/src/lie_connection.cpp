#include "projcomp/lie_connection.hpp"

#include <cmath>

namespace projcomp {

MatrixXd LeftInvariantConnection::gamma_of(const VectorXd& a) const {
  const int n = algebra.dim;
  MatrixXd m = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m += a[i] * gamma[i];
  return m;
}

LeftInvariantConnection scaled_ad_connection(const StructureConstants& sc,
                                             double p) {
  sc.validate();
  LeftInvariantConnection conn;
  conn.algebra = sc;
  conn.gamma.reserve(sc.dim);
  for (int i = 0; i < sc.dim; ++i) conn.gamma.push_back(p * sc.ad_basis(i));
  return conn;
}

LeftInvariantConnection zero_connection(const StructureConstants& sc) {
  sc.validate();
  LeftInvariantConnection conn;
  conn.algebra = sc;
  conn.gamma.assign(sc.dim, MatrixXd::Zero(sc.dim, sc.dim));
  return conn;
}

VectorXd connection_torsion(const LeftInvariantConnection& conn,
                            const VectorXd& a, const VectorXd& b) {
  if (a.size() != conn.algebra.dim || b.size() != conn.algebra.dim)
    throw std::invalid_argument("connection_torsion: dimension mismatch");
  return conn.gamma_of(a) * b - conn.gamma_of(b) * a -
         conn.algebra.bracket(a, b);
}

bool is_torsion_free(const LeftInvariantConnection& conn, double tol) {
  const int n = conn.algebra.dim;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VectorXd t = connection_torsion(conn, VectorXd::Unit(n, i),
                                      VectorXd::Unit(n, j));
      if (t.lpNorm<Eigen::Infinity>() > tol) return false;
    }
  return true;
}

MatrixXd connection_curvature(const LeftInvariantConnection& conn,
                              const VectorXd& a, const VectorXd& b) {
  if (a.size() != conn.algebra.dim || b.size() != conn.algebra.dim)
    throw std::invalid_argument("connection_curvature: dimension mismatch");
  MatrixXd ga = conn.gamma_of(a), gb = conn.gamma_of(b);
  return ga * gb - gb * ga - conn.gamma_of(conn.algebra.bracket(a, b));
}

MatrixXd symmetrized_ricci(const LeftInvariantConnection& conn) {
  const int n = conn.algebra.dim;
  // K^i_{jkl} = κ(e_k, e_l)^i_j
  std::vector<MatrixXd> kappa(n * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      kappa[k * n + l] = connection_curvature(conn, VectorXd::Unit(n, k),
                                              VectorXd::Unit(n, l));
  MatrixXd ric = MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += 0.5 * (kappa[i * n + l](i, j) + kappa[i * n + j](i, l));
      ric(j, l) = s;
    }
  return ric;
}

MatrixXd ProjectiveLift::e_of(const VectorXd& a) const {
  const int n = algebra.dim;
  MatrixXd m = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m += a[i] * e_map[i];
  return m;
}

Eigen::RowVectorXd ProjectiveLift::f_of(const VectorXd& a) const {
  return a.transpose() * f_form;
}

MatrixXd ProjectiveLift::c_of(const VectorXd& a) const {
  const int n = algebra.dim;
  MatrixXd c = MatrixXd::Zero(n + 1, n + 1);
  MatrixXd e = e_of(a);
  c(0, 0) = -e.trace();
  c.block(0, 1, 1, n) = f_of(a);
  c.block(1, 0, n, 1) = a;
  c.block(1, 1, n, n) = e;
  return c;
}

ProjectiveLift projective_lift(const LeftInvariantConnection& conn) {
  const int n = conn.algebra.dim;
  ProjectiveLift lift;
  lift.algebra = conn.algebra;
  lift.e_map.reserve(n);
  for (int i = 0; i < n; ++i) {
    MatrixXd g = conn.gamma[i];
    lift.e_map.push_back(g - (g.trace() / (n + 1)) * MatrixXd::Identity(n, n));
  }
  // F(e_i)_j = tr(Γ(e_j) ∘ ad_{e_i}) / (2(n+1)), by explicit double sum.
  lift.f_form = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    MatrixXd ad_i = conn.algebra.ad_basis(i);
    for (int j = 0; j < n; ++j) {
      double tr = 0.0;
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) tr += conn.gamma[j](r, s) * ad_i(s, r);
      lift.f_form(i, j) = tr / (2.0 * (n + 1));
    }
  }
  return lift;
}

NormalityReport normality_check(const ProjectiveLift& lift, double tol) {
  const int n = lift.algebra.dim;
  NormalityReport rep;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VectorXd a = VectorXd::Unit(n, i), b = VectorXd::Unit(n, j);
      MatrixXd ea = lift.e_of(a), eb = lift.e_of(b);
      VectorXd br = lift.algebra.bracket(a, b);
      VectorXd lhs = ea * b + ea.trace() * b - (eb * a + eb.trace() * a);
      rep.torsion_residual = std::max(rep.torsion_residual,
                                      (lhs - br).lpNorm<Eigen::Infinity>());
      // Invariant form: ℝⁿ block of [C(A),C(B)] - C([A,B]).
      MatrixXd ca = lift.c_of(a), cb = lift.c_of(b);
      MatrixXd comm = ca * cb - cb * ca - lift.c_of(br);
      rep.invariant_residual =
          std::max(rep.invariant_residual,
                   comm.block(1, 0, n, 1).lpNorm<Eigen::Infinity>());
    }
  // Traced curvature Σ_i K^i_{jil} of the lift, reported as a diagnostic.
  // K^i_{jkl} = gl-block of κ̂(e_k,e_l) minus δ^i_j κ̂⁰₀(e_k,e_l).
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        VectorXd ei = VectorXd::Unit(n, i), el = VectorXd::Unit(n, l);
        MatrixXd kap = lift.c_of(ei) * lift.c_of(el) -
                       lift.c_of(el) * lift.c_of(ei) -
                       lift.c_of(lift.algebra.bracket(ei, el));
        s += kap(1 + i, 1 + j) - (i == j ? kap(0, 0) : 0.0);
      }
      rep.traced_curvature_residual =
          std::max(rep.traced_curvature_residual, std::abs(s));
    }
  rep.normal = rep.torsion_residual < tol && rep.invariant_residual < tol;
  return rep;
}

namespace {

MatrixXd killing_form_cached(const StructureConstants& sc) {
  return killing_form(sc);
}

}  // namespace

MatrixXd sl2_family_curvature(double p, double q, const VectorXd& a,
                              const VectorXd& b) {
  StructureConstants sc = sl2_algebra();
  MatrixXd bk = killing_form_cached(sc);
  VectorXd br = sc.bracket(a, b);
  Eigen::RowVectorXd a_star = (bk * a).transpose();
  Eigen::RowVectorXd b_star = (bk * b).transpose();
  Eigen::RowVectorXd br_star = (bk * br).transpose();

  MatrixXd kappa = MatrixXd::Zero(4, 4);
  // Top-right block: F(A)E(B) - F(B)E(A) - F([A,B]) collapses by
  // ad-invariance of the Killing form to (2p-1) q [A,B]*.
  kappa.block(0, 1, 1, 3) = (2.0 * p - 1.0) * q * br_star;
  kappa.block(1, 0, 3, 1) = (2.0 * p - 1.0) * br;
  kappa.block(1, 1, 3, 3) = q * (a * b_star - b * a_star) +
                            p * (p - 1.0) * sc.ad(br);
  return kappa;
}

MatrixXd sl2_family_curvature_direct(double p, double q, const VectorXd& a,
                                     const VectorXd& b) {
  StructureConstants sc = sl2_algebra();
  MatrixXd bk = killing_form_cached(sc);
  auto c_of = [&](const VectorXd& x) {
    MatrixXd c = MatrixXd::Zero(4, 4);
    c.block(0, 1, 1, 3) = q * (bk * x).transpose();
    c.block(1, 0, 3, 1) = x;
    c.block(1, 1, 3, 3) = p * sc.ad(x);
    return c;
  };
  MatrixXd ca = c_of(a), cb = c_of(b);
  return ca * cb - cb * ca - c_of(sc.bracket(a, b));
}

Eigen::Matrix2d sl2_to_matrix(const VectorXd& a) {
  Eigen::Matrix2d h, e, f;
  h << 1, 0, 0, -1;
  e << 0, 1, 0, 0;
  f << 0, 0, 1, 0;
  return a[0] * h + a[1] * e + a[2] * f;
}

Sl2FlowResult sl2_geodesic_flow(double p, double q, const Eigen::Vector3d& a_dir,
                                const Sl2FlowState& init, double t_end,
                                const Sl2FlowOptions& opt) {
  StructureConstants sc = sl2_algebra();
  Sl2FlowResult out;

  // State vector: [a, b(3), c(9 row-major), h(4 row-major)]
  auto pack = [](const Sl2FlowState& s) {
    VectorXd y(17);
    y[0] = s.a;
    y.segment<3>(1) = s.b;
    for (int r = 0; r < 3; ++r)
      for (int cc = 0; cc < 3; ++cc) y[4 + 3 * r + cc] = s.c(r, cc);
    for (int r = 0; r < 2; ++r)
      for (int cc = 0; cc < 2; ++cc) y[13 + 2 * r + cc] = s.h(r, cc);
    return y;
  };
  auto unpack = [](const VectorXd& y) {
    Sl2FlowState s;
    s.a = y[0];
    s.b = y.segment<3>(1);
    for (int r = 0; r < 3; ++r)
      for (int cc = 0; cc < 3; ++cc) s.c(r, cc) = y[4 + 3 * r + cc];
    for (int r = 0; r < 2; ++r)
      for (int cc = 0; cc < 2; ++cc) s.h(r, cc) = y[13 + 2 * r + cc];
    return s;
  };

  const double det0 = init.c.determinant();
  if (std::abs(det0) <= opt.det_floor)
    throw std::invalid_argument("sl2_geodesic_flow: det c vanishes at start");

  bool singular = false, diverged = false;
  double t_singular = 0.0;
  OdeRhs rhs = [&](double, const VectorXd& y, VectorXd& dy) {
    Sl2FlowState s = unpack(y);
    double det = s.c.determinant();
    Eigen::Vector3d ca = s.c * a_dir;
    double guard = (std::abs(det) < 0.25 * opt.det_floor)
                       ? (det < 0 ? -0.25 * opt.det_floor : 0.25 * opt.det_floor)
                       : det;
    Sl2FlowState d;
    d.a = s.b.dot(a_dir);
    d.b = -(q / guard) * (s.c.transpose() * ca);
    d.c = -(1.0 / guard) * (ca * s.b.transpose() + p * sc.ad(ca) * s.c);
    d.h = s.h * ((1.0 / guard) * sl2_to_matrix(ca));
    dy = pack(d);
  };

  double next_sample = 0.0;
  auto record = [&](double t, const Sl2FlowState& s) {
    out.samples.push_back({t, s, s.c.determinant()});
  };
  record(0.0, init);
  next_sample = opt.sample_dt;

  double prev_det = det0;
  StepObserver obs = [&](const DenseSegment& seg) {
    while (next_sample <= seg.t1() + 1e-15) {
      Sl2FlowState s = unpack(seg.eval(std::min(next_sample, seg.t1())));
      record(std::min(next_sample, seg.t1()), s);
      next_sample += opt.sample_dt;
    }
    Sl2FlowState s = unpack(seg.eval(seg.t1()));
    double det = s.c.determinant();
    // The determinant can cross zero transversally within one step while the
    // coordinate ODE stays regular; a sign change is the same escape from the
    // structure group as a floor crossing.
    if (std::abs(det) < opt.det_floor || det * prev_det < 0.0) {
      singular = true;
      t_singular =
          (det * prev_det < 0.0)
              ? bisect_zero(
                    [&](double tt) {
                      return unpack(seg.eval(tt)).c.determinant();
                    },
                    seg.t0(), seg.t1(), 1e-12)
              : seg.t1();
      return ObserverSignal::kStop;
    }
    prev_det = det;
    // h is the developed group element; its growth is geometric, so only the
    // fiber coordinates (b, c) count as solver-state divergence. A ceiling
    // trip with det c collapsing is the same finite-time escape the det floor
    // detects, so it reports Singular.
    if (s.c.lpNorm<Eigen::Infinity>() > opt.state_ceiling ||
        s.b.lpNorm<Eigen::Infinity>() > opt.state_ceiling) {
      if (std::abs(det) < 0.01 * std::abs(det0))
        singular = true;
      else
        diverged = true;
      t_singular = seg.t1();
      return ObserverSignal::kStop;
    }
    return ObserverSignal::kContinue;
  };

  OdeResult res = integrate(rhs, 0.0, pack(init), t_end, opt.ode, obs);
  if (singular) {
    out.end = Sl2FlowResult::End::kSingular;
    out.t_end = t_singular;
    out.detail = "det c reached floor (projective parameter blow-up)";
  } else if (diverged) {
    out.end = Sl2FlowResult::End::kDiverged;
    out.t_end = t_singular;
    out.detail = "state norm passed the ceiling";
  } else if (res.status == OdeResult::Status::kFailed) {
    out.end = Sl2FlowResult::End::kStepFailure;
    out.t_end = res.t;
    out.detail = res.detail;
  } else {
    out.end = Sl2FlowResult::End::kReachedEnd;
    out.t_end = res.t;
    record(res.t, unpack(res.y));
  }
  return out;
}

DirectionClass classify_direction(const StructureConstants& sc,
                                  const VectorXd& a, double zero_band) {
  MatrixXd ric = symmetrized_ricci(half_ad_connection(sc));
  double v = a.dot(ric * a);
  double scale = std::max(1.0, a.squaredNorm());
  if (v > zero_band * scale) return DirectionClass::kElliptic;
  if (v < -zero_band * scale) return DirectionClass::kHyperbolic;
  return DirectionClass::kParabolic;
}

const char* direction_class_name(DirectionClass c) {
  switch (c) {
    case DirectionClass::kElliptic: return "elliptic";
    case DirectionClass::kParabolic: return "parabolic";
    case DirectionClass::kHyperbolic: return "hyperbolic";
  }
  return "?";
}

}  // namespace projcomp
