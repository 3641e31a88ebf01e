#include "projcomp/zoll.hpp"

#include <cmath>

namespace projcomp {

namespace {
constexpr double kBandValid = 0.95;
constexpr double kBandCore = 0.91;   // band hands over to a cap past this
constexpr double kCapCore = 0.89;    // caps hand back below this
constexpr double kCapTableLo = 0.75; // cap tables cover |z| in [0.75, 1]
constexpr double kCapValidZ = 0.78;
}  // namespace

void ZollProfile::validate(double tol, int grid) const {
  if (!f) throw std::invalid_argument("profile: f missing");
  for (int i = 0; i < grid; ++i) {
    double z = -1.0 + 2.0 * i / (grid - 1.0);
    double v = f(z);
    if (!(std::abs(v) < 1.0))
      throw std::invalid_argument("profile: |f| >= 1 at z=" +
                                  std::to_string(z));
    if (std::abs(v + f(-z)) > tol)
      throw std::invalid_argument("profile: f is not odd at z=" +
                                  std::to_string(z));
  }
  if (std::abs(f(1.0)) > tol || std::abs(f(-1.0)) > tol)
    throw std::invalid_argument("profile: f(±1) != 0");
}

ZollProfile round_profile() {
  ZollProfile p;
  p.f = [](double) { return 0.0; };
  p.df = [](double) { return 0.0; };
  p.name = "round";
  return p;
}

ZollProfile build_paper_profile(double alpha, double beta, double z0) {
  if (alpha <= 0.0 || beta < 0.0 || z0 <= 0.0 || z0 >= 1.0)
    throw std::invalid_argument(
        "paper profile: need alpha > 0, beta >= 0 and 0 < z0 < 1");
  ZollProfile p;
  auto g = [=](double z) {
    return 2.0 * std::atan(beta * (z - z0)) + 2.0 * std::atan(beta * (z + z0));
  };
  p.f = [=](double z) {
    return std::cos(M_PI_2 * z) * std::exp(-alpha * z * z) * std::sin(g(z));
  };
  p.df = [=](double z) {
    double gp = 2.0 * beta / (1.0 + beta * beta * (z - z0) * (z - z0)) +
                2.0 * beta / (1.0 + beta * beta * (z + z0) * (z + z0));
    double env = std::cos(M_PI_2 * z) * std::exp(-alpha * z * z);
    double denv = -M_PI_2 * std::sin(M_PI_2 * z) * std::exp(-alpha * z * z) +
                  std::cos(M_PI_2 * z) * (-2.0 * alpha * z) *
                      std::exp(-alpha * z * z);
    return denv * std::sin(g(z)) + env * std::cos(g(z)) * gp;
  };
  p.name = "paper";
  p.alpha = alpha;
  p.beta = beta;
  p.z0 = z0;
  p.validate();
  return p;
}

ZollProfile user_profile(std::function<double(double)> f,
                         const std::string& name) {
  ZollProfile p;
  p.f = f;
  p.df = [f](double z) {
    const double h = 1e-6;
    double zp = std::min(z + h, 1.0), zm = std::max(z - h, -1.0);
    return (f(zp) - f(zm)) / (zp - zm);
  };
  p.name = name;
  p.validate(1e-8);
  return p;
}

ZollMetric::ZollMetric(ZollProfile profile) : m_profile(std::move(profile)) {
  m_profile.validate(1e-8);
  build_phi_table();
  build_cap_table(+1);
  build_cap_table(-1);
}

double ZollMetric::g_zz(double z) const {
  double f = m_profile.f(z);
  return (1.0 + f) * (1.0 + f) / (1.0 - z * z);
}

double ZollMetric::gauss_curvature(double z) const {
  double f = m_profile.f(z), df = m_profile.df(z);
  double d = 1.0 + f;
  return (d - z * df) / (d * d * d);
}

double ZollMetric::brioschi_curvature_fd(double z, double h) const {
  // K = -(1/(2 sqrt(EG))) d/dz ( G'(z) / sqrt(EG) ) for E(z)dz^2 + G(z)dθ^2.
  auto inner = [&](double zz) {
    double eg = std::sqrt(g_zz(zz) * g_thth(zz));
    return -2.0 * zz / eg;
  };
  double d = (inner(z + h) - inner(z - h)) / (2.0 * h);
  return -d / (2.0 * std::sqrt(g_zz(z) * g_thth(z)));
}

double ZollMetric::phi_deriv(double z) const {
  double az = std::abs(z);
  if (1.0 - az < 1e-7) {
    // f/(1-z^2) -> -sign(z) f'(±1)/(1+|z|) as |z| -> 1
    return -((z >= 0) ? 1.0 : -1.0) * m_profile.df(z) / (1.0 + az);
  }
  return m_profile.f(z) / (1.0 - z * z);
}

void ZollMetric::build_phi_table() {
  // Phi(z) = ∫_0^z f/(1-s^2) ds on [0,1]; Phi is even, integrand odd.
  const int n = 2001;
  m_phi_z.resize(n);
  m_phi_val.resize(n);
  m_phi_der.resize(n);
  OdeOptions opt;
  opt.atol = 1e-13;
  opt.rtol = 1e-13;
  DenseSolution sol;
  OdeRhs rhs = [this](double z, const VectorXd&, VectorXd& dy) {
    dy.resize(1);
    dy[0] = phi_deriv(z);
  };
  VectorXd y0(1);
  y0 << 0.0;
  OdeResult res = integrate_dense(rhs, 0.0, y0, 1.0, opt, sol);
  if (!res.ok()) throw std::runtime_error("zoll: Phi integration failed");
  for (int i = 0; i < n; ++i) {
    double z = i / (n - 1.0);
    m_phi_z[i] = z;
    m_phi_val[i] = (i == n - 1) ? res.y[0] : sol.eval_component(z, 0);
    m_phi_der[i] = phi_deriv(z);
  }
}

double ZollMetric::cap_phi_integral(double z) const {
  double az = std::abs(z);  // Phi is even
  if (az >= 1.0) az = 1.0;
  const int n = static_cast<int>(m_phi_z.size());
  double step = 1.0 / (n - 1.0);
  int i = std::min(static_cast<int>(az / step), n - 2);
  double t = (az - m_phi_z[i]) / step;
  // Cubic Hermite with exact nodal derivatives.
  double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  double h10 = t * (1 - t) * (1 - t);
  double h01 = t * t * (3 - 2 * t);
  double h11 = t * t * (t - 1);
  return h00 * m_phi_val[i] + h10 * step * m_phi_der[i] +
         h01 * m_phi_val[i + 1] + h11 * step * m_phi_der[i + 1];
}

double ZollMetric::cap_s_of_z(int hemisphere, double z) const {
  double phi = cap_phi_integral(z);
  if (hemisphere > 0) return (1.0 - z) / (1.0 + z) * std::exp(-2.0 * phi);
  return (1.0 + z) / (1.0 - z) * std::exp(2.0 * phi);
}

void ZollMetric::build_cap_table(int hemisphere) {
  CapTable& tab = hemisphere > 0 ? m_north : m_south;
  const int n = 801;
  tab.z.resize(n);
  tab.s.resize(n);
  tab.lam2.resize(n);
  tab.dlam2_ds.resize(n);
  tab.dz_ds.resize(n);
  for (int i = 0; i < n; ++i) {
    // From the pole outwards so s is ascending.
    double zz = hemisphere > 0 ? 1.0 - (1.0 - kCapTableLo) * i / (n - 1.0)
                               : -1.0 + (1.0 - kCapTableLo) * i / (n - 1.0);
    double phi = cap_phi_integral(zz);
    double f = m_profile.f(zz);
    double s, lam2, ratio;
    if (hemisphere > 0) {
      s = (1.0 - zz) / (1.0 + zz) * std::exp(-2.0 * phi);
      lam2 = (1.0 + zz) * (1.0 + zz) * std::exp(2.0 * phi);
      // dλ²/ds = -(1+z)^3 e^{4Φ} (1 + f/(1-z)) / (1+f)
      double fr = (1.0 - zz < 1e-7) ? -m_profile.df(zz)
                                    : f / (1.0 - zz);
      ratio = -(1.0 + zz) * (1.0 + zz) * (1.0 + zz) * std::exp(4.0 * phi) *
              (1.0 + fr) / (1.0 + f);
    } else {
      s = (1.0 + zz) / (1.0 - zz) * std::exp(2.0 * phi);
      lam2 = (1.0 - zz) * (1.0 - zz) * std::exp(-2.0 * phi);
      // dλ²/ds = -(1-z)^3 e^{-4Φ} (1 + f/(1+z)) / (1+f)
      double fr = (1.0 + zz < 1e-7) ? m_profile.df(zz)
                                    : f / (1.0 + zz);
      ratio = -(1.0 - zz) * (1.0 - zz) * (1.0 - zz) * std::exp(-4.0 * phi) *
              (1.0 + fr) / (1.0 + f);
    }
    tab.z[i] = zz;
    tab.s[i] = s;
    tab.lam2[i] = lam2;
    tab.dlam2_ds[i] = ratio;
    double ds_dz = hemisphere > 0
                       ? -2.0 * std::exp(-2.0 * phi) * (1.0 + f) /
                             ((1.0 + zz) * (1.0 + zz))
                       : 2.0 * std::exp(2.0 * phi) * (1.0 + f) /
                             ((1.0 - zz) * (1.0 - zz));
    tab.dz_ds[i] = 1.0 / ds_dz;
  }
  tab.s_max = tab.s.back();
}

namespace {

double hermite_lookup(const std::vector<double>& xs,
                      const std::vector<double>& vals,
                      const std::vector<double>& ders, double x,
                      bool derivative) {
  const int n = static_cast<int>(xs.size());
  int lo = 0, hi = n - 1;
  if (x <= xs.front()) x = xs.front();
  if (x >= xs.back()) x = xs.back();
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (xs[mid] <= x)
      lo = mid;
    else
      hi = mid;
  }
  double h = xs[hi] - xs[lo];
  double t = (x - xs[lo]) / h;
  if (!derivative) {
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * vals[lo] + h10 * h * ders[lo] + h01 * vals[hi] +
           h11 * h * ders[hi];
  }
  double d00 = 6 * t * (t - 1);
  double d10 = (1 - t) * (1 - 3 * t);
  double d01 = -6 * t * (t - 1);
  double d11 = t * (3 * t - 2);
  return (d00 * vals[lo] + d01 * vals[hi]) / h + d10 * ders[lo] +
         d11 * ders[hi];
}

}  // namespace

double ZollMetric::cap_lambda2_of_s(int hemisphere, double s) const {
  const CapTable& tab = cap(hemisphere);
  return hermite_lookup(tab.s, tab.lam2, tab.dlam2_ds, s, false);
}

double ZollMetric::cap_dlambda2_ds(int hemisphere, double s) const {
  const CapTable& tab = cap(hemisphere);
  return hermite_lookup(tab.s, tab.lam2, tab.dlam2_ds, s, true);
}

double ZollMetric::cap_z_of_s(int hemisphere, double s) const {
  const CapTable& tab = cap(hemisphere);
  return hermite_lookup(tab.s, tab.z, tab.dz_ds, s, false);
}

ChartConnection ZollMetric::band_chart(bool fd_ricci_only) const {
  ChartConnection c;
  c.dim = 2;
  const ZollMetric* m = this;
  c.christoffel = [m](const VectorXd& x, Tensor3& g) {
    const double z = x[0];
    const double f = m->m_profile.f(z), df = m->m_profile.df(z);
    const double omz2 = 1.0 - z * z;
    g.set_zero();
    g(0, 0, 0) = df / (1.0 + f) + z / omz2;              // Γ^z_zz
    g(0, 1, 1) = z * omz2 / ((1.0 + f) * (1.0 + f));     // Γ^z_θθ
    g(1, 0, 1) = g(1, 1, 0) = -z / omz2;                 // Γ^θ_zθ
  };
  c.inside = [](const VectorXd& x) { return std::abs(x[0]) < kBandValid; };
  c.box_lo = (VectorXd(2) << -0.9, 0.0).finished();
  c.box_hi = (VectorXd(2) << 0.9, 2.0 * M_PI).finished();
  if (!fd_ricci_only) {
    c.analytic_ricci = [m](const VectorXd& x) {
      double k = m->gauss_curvature(x[0]);
      Eigen::Matrix2d ric;
      ric << k * m->g_zz(x[0]), 0.0, 0.0, k * m->g_thth(x[0]);
      return Eigen::MatrixXd(ric);
    };
  }
  c.name = "zoll-band";
  return c;
}

ChartConnection ZollMetric::cap_chart(int hemisphere, bool fd_ricci_only) const {
  ChartConnection c;
  c.dim = 2;
  const ZollMetric* m = this;
  const double s_valid = cap_s_of_z(hemisphere, hemisphere > 0 ? kCapValidZ
                                                               : -kCapValidZ);
  c.christoffel = [m, hemisphere](const VectorXd& x, Tensor3& g) {
    const double u = x[0], v = x[1];
    const double s = u * u + v * v;
    const double lam2 = m->cap_lambda2_of_s(hemisphere, s);
    const double dl = m->cap_dlambda2_ds(hemisphere, s);
    // φ = log λ;  φ_u = (λ²)'(s) u / λ², etc.
    const double pu = dl * u / lam2, pv = dl * v / lam2;
    g.set_zero();
    g(0, 0, 0) = pu;
    g(0, 0, 1) = g(0, 1, 0) = pv;
    g(0, 1, 1) = -pu;
    g(1, 1, 1) = pv;
    g(1, 0, 1) = g(1, 1, 0) = pu;
    g(1, 0, 0) = -pv;
  };
  c.inside = [s_valid](const VectorXd& x) {
    return x[0] * x[0] + x[1] * x[1] < s_valid;
  };
  double rb = std::sqrt(s_valid) / std::sqrt(2.0);
  c.box_lo = (VectorXd(2) << -rb, -rb).finished();
  c.box_hi = (VectorXd(2) << rb, rb).finished();
  if (!fd_ricci_only) {
    c.analytic_ricci = [m, hemisphere](const VectorXd& x) {
      double s = x[0] * x[0] + x[1] * x[1];
      double k = m->gauss_curvature(m->cap_z_of_s(hemisphere, s));
      double lam2 = m->cap_lambda2_of_s(hemisphere, s);
      Eigen::Matrix2d ric;
      ric << k * lam2, 0.0, 0.0, k * lam2;
      return Eigen::MatrixXd(ric);
    };
  }
  c.name = hemisphere > 0 ? "zoll-ncap" : "zoll-scap";
  return c;
}

void ZollMetric::unit_tangent(double z, double psi, double& vz,
                              double& vth) const {
  vz = std::cos(psi) / std::sqrt(g_zz(z));
  vth = std::sin(psi) / std::sqrt(g_thth(z));
}

Atlas ZollMetric::atlas(bool fd_ricci_only) const {
  Atlas a;
  a.charts = {band_chart(fd_ricci_only), cap_chart(+1, fd_ricci_only),
              cap_chart(-1, fd_ricci_only)};
  const ZollMetric* m = this;
  const double s_core_n = cap_s_of_z(+1, kCapCore);
  const double s_core_s = cap_s_of_z(-1, -kCapCore);

  a.prefer = [m, s_core_n, s_core_s](int cur, const VectorXd& x) {
    if (cur == 0) {
      if (x[0] > kBandCore) return 1;
      if (x[0] < -kBandCore) return 2;
      return 0;
    }
    double s = x[0] * x[0] + x[1] * x[1];
    if (cur == 1) return s > s_core_n ? 0 : 1;
    return s > s_core_s ? 0 : 2;
  };

  auto rho_of_z = [m](int hemi, double z) {
    return std::sqrt(m->cap_s_of_z(hemi, z));
  };
  auto drho_dz = [m, rho_of_z](int hemi, double z) {
    // dρ/dz = (ds/dz)/(2ρ)
    double f = m->m_profile.f(z);
    double phi = m->cap_phi_integral(z);
    double ds_dz = hemi > 0
                       ? -2.0 * std::exp(-2.0 * phi) * (1.0 + f) /
                             ((1.0 + z) * (1.0 + z))
                       : 2.0 * std::exp(2.0 * phi) * (1.0 + f) /
                             ((1.0 - z) * (1.0 - z));
    return ds_dz / (2.0 * rho_of_z(hemi, z));
  };

  a.map_point = [m, rho_of_z](int from, int to, const VectorXd& x) {
    VectorXd out(2);
    if (from == 0) {
      int hemi = (to == 1) ? +1 : -1;
      double rho = rho_of_z(hemi, x[0]);
      out << rho * std::cos(x[1]), rho * std::sin(x[1]);
      return out;
    }
    int hemi = (from == 1) ? +1 : -1;
    double s = x[0] * x[0] + x[1] * x[1];
    out << m->cap_z_of_s(hemi, s), std::atan2(x[1], x[0]);
    return out;
  };

  a.map_jacobian = [rho_of_z, drho_dz, m](int from, int to, const VectorXd& x) {
    Eigen::Matrix2d j;
    if (from == 0) {
      int hemi = (to == 1) ? +1 : -1;
      double rho = rho_of_z(hemi, x[0]);
      double rp = drho_dz(hemi, x[0]);
      double ct = std::cos(x[1]), st = std::sin(x[1]);
      j << rp * ct, -rho * st, rp * st, rho * ct;
      return Eigen::MatrixXd(j);
    }
    int hemi = (from == 1) ? +1 : -1;
    double s = x[0] * x[0] + x[1] * x[1];
    double z = m->cap_z_of_s(hemi, s);
    double theta = std::atan2(x[1], x[0]);
    double rho = std::sqrt(s);
    double rp = drho_dz(hemi, z);
    double ct = std::cos(theta), st = std::sin(theta);
    Eigen::Matrix2d fwd;
    fwd << rp * ct, -rho * st, rp * st, rho * ct;
    j = fwd.inverse();
    return Eigen::MatrixXd(j);
  };
  return a;
}

namespace {

double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  return a - M_PI;
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ZollClosure zoll_geodesic_closure(const ZollMetric& metric, double z0,
                                  double theta0, double psi,
                                  const ZollClosureOptions& opt) {
  if (std::abs(z0) > 0.85)
    throw std::invalid_argument(
        "zoll_geodesic_closure: start the geodesic inside the band");
  Atlas atlas = metric.atlas();
  double vz, vth;
  metric.unit_tangent(z0, psi, vz, vth);
  VectorXd x0(2), v0(2);
  x0 << z0, theta0;
  v0 << vz, vth;

  AtlasIntegrateOptions aopt;
  aopt.ode = opt.ode;
  aopt.ode.h_max = 0.04;
  const double t_max = opt.period_search_factor * 2.0 * M_PI;

  AtlasTrajectory traj =
      integrate_atlas_geodesic(atlas, 0, x0, v0, 0.0, t_max, aopt);
  if (traj.end == AtlasTrajectory::End::kStepFailure)
    throw StepFailure("zoll_geodesic_closure: " + traj.detail);

  auto phase_distance = [&](double t) {
    AtlasSample s = traj.sample(t);
    if (s.chart != 0) return 10.0;
    return std::abs(s.x[0] - z0) + std::abs(wrap_angle(s.x[1] - theta0)) +
           std::abs(s.v[0] - vz) + std::abs(s.v[1] - vth);
  };

  ZollClosure out;
  out.phase_distance = 10.0;
  const double dt = 0.01;
  double prev2 = 10.0, prev1 = 10.0, prev_t = 0.0;
  for (double t = opt.t_min; t <= traj.t_end; t += dt) {
    double d = phase_distance(t);
    if (prev1 < prev2 && prev1 <= d && prev1 < opt.coarse_threshold) {
      double t_star = golden_min(phase_distance, prev_t - dt, prev_t + dt,
                                 1e-11);
      double d_star = phase_distance(t_star);
      if (d_star < out.phase_distance) {
        out.phase_distance = d_star;
        out.period = t_star;
      }
      if (d_star < opt.phase_tol) {
        out.closed = true;
        return out;
      }
    }
    prev2 = prev1;
    prev1 = d;
    prev_t = t;
  }
  return out;
}

CompletenessVerdict jacobi_zero_completeness(const ZollMetric& metric,
                                             const ClosedGeodesic& geo,
                                             double a0, double a1_0,
                                             const JacobiZeroOptions& opt) {
  if (a0 == 0.0 && a1_0 == 0.0)
    throw std::invalid_argument(
        "jacobi_zero_completeness: the zero Jacobi field certifies nothing");
  Atlas atlas = metric.atlas();
  double vz, vth;
  metric.unit_tangent(geo.z0, geo.psi, vz, vth);
  VectorXd x0(2), v0(2);
  x0 << geo.z0, geo.theta0;
  v0 << vz, vth;

  AtlasIntegrateOptions aopt;
  aopt.ode = opt.ode;
  aopt.ode.h_max = 0.04;
  aopt.with_frame = true;
  aopt.with_jacobi = true;
  aopt.a0 = (VectorXd(1) << a0).finished();
  aopt.a1_0 = (VectorXd(1) << a1_0).finished();

  AtlasTrajectory traj =
      integrate_atlas_geodesic(atlas, 0, x0, v0, 0.0, geo.period, aopt);
  if (traj.end != AtlasTrajectory::End::kReachedEnd)
    throw StepFailure("jacobi_zero_completeness: trajectory truncated");

  // Scan the normal Jacobi component over the period.
  const double dt = geo.period / 4000.0;
  double amax = 0.0;
  std::vector<double> zeros;
  double prev_a = traj.sample(0.0).a[0];
  if (std::abs(prev_a) < 1e-12) zeros.push_back(0.0);
  for (double t = dt; t <= geo.period + 1e-12; t += dt) {
    double av = traj.sample(std::min(t, geo.period)).a[0];
    amax = std::max(amax, std::abs(av));
    if (prev_a * av < 0.0) {
      double z = bisect_zero(
          [&](double tt) { return traj.sample(tt).a[0]; }, t - dt, t, 1e-10);
      zeros.push_back(z);
    }
    prev_a = av;
  }

  AtlasSample end = traj.sample(geo.period);
  double scale = std::max({amax, std::abs(a1_0), 1e-6});
  bool periodic = std::abs(end.a[0] - a0) < opt.periodicity_tol * scale &&
                  std::abs(end.a1[0] - a1_0) < opt.periodicity_tol * scale;
  bool nonzero = amax > 1e-8 * scale;
  bool has_zero = !zeros.empty();

  CompletenessVerdict verdict;
  verdict.geodesic_id = "zoll";
  verdict.window_lo = 0.0;
  verdict.window_hi = geo.period;
  verdict.zeros_forward = static_cast<int>(zeros.size());
  verdict.zeros_backward = verdict.zeros_forward;  // periodic recurrence
  verdict.jacobi_zero_certificate = periodic && nonzero && has_zero;
  verdict.verdict = verdict.jacobi_zero_certificate
                        ? CompletenessVerdict::Verdict::kComplete
                        : CompletenessVerdict::Verdict::kUndetermined;
  return verdict;
}

}  // namespace projcomp
