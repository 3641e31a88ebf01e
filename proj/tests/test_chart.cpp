#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "projcomp/chart.hpp"
#include "projcomp/registry.hpp"
#include "projcomp/rng.hpp"
#include "projcomp/zoll.hpp"

using namespace projcomp;

namespace {

/// Finite-difference geodesic-variation oracle: normal components of the
/// derivative of a family of geodesics, extracted in the Jacobi run's frame.
double jacobi_variation_oracle(const ChartConnection& conn,
                               const JacobiField& field, const VectorXd& x0,
                               const VectorXd& v0, double a0, double a10,
                               double t, double eps = 1e-4) {
  Eigen::MatrixXd q = jacobi_start_frame(v0);
  VectorXd w = q.col(1) * a0;
  Tensor3 g(conn.dim);
  conn.eval_christoffel(x0, g);
  VectorXd u = q.col(1) * a10 - christoffel_bilinear(g, v0, w);
  OdeOptions opt;
  GeodesicTrajectory plus =
      integrate_geodesic(conn, x0 + eps * w, v0 + eps * u, 0.0, t * 1.001, opt);
  GeodesicTrajectory minus =
      integrate_geodesic(conn, x0 - eps * w, v0 - eps * u, 0.0, t * 1.001, opt);
  VectorXd j = (plus.x(t) - minus.x(t)) / (2.0 * eps);
  VectorXd comps = field.frame(t).partialPivLu().solve(j);
  return comps[1];  // normal component (n = 2)
}

/// Exhaustive least-squares route for the Weyl projection, via SVD on the
/// n^3 x n design matrix.
std::pair<VectorXd, double> weyl_lsq_oracle(const Tensor3& d) {
  const int n = d.n;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n * n * n, n);
  VectorXd b(n * n * n);
  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++row) {
        b[row] = d(i, j, k);
        if (i == k) a(row, j) += 1.0;
        if (i == j) a(row, k) += 1.0;
      }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  VectorXd lambda = svd.solve(b);
  double res = (a * lambda - b).norm();
  return {lambda, res};
}

ChartConnection sphere_band(bool fd_only = false) {
  static ZollMetric metric(round_profile());
  return metric.band_chart(fd_only);
}

}  // namespace

TEST_CASE("flat geodesics are straight lines") {
  ChartConnection flat = flat_connection(2);
  VectorXd x0 = VectorXd::Zero(2), v0(2);
  v0 << 1.0, 0.0;
  GeodesicTrajectory traj = integrate_geodesic(flat, x0, v0, 0.0, 1.0);
  CHECK(traj.end == GeodesicTrajectory::End::kReachedEnd);
  CHECK((traj.x_end - v0).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((traj.v_end - v0).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK(traj.max_step_defect < 1e-9);
}

TEST_CASE("input validation for geodesics") {
  ChartConnection flat = flat_connection(2);
  CHECK_THROWS_AS(integrate_geodesic(flat, VectorXd::Zero(2),
                                     VectorXd::Zero(2), 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_geodesic(flat, VectorXd::Zero(3),
                                     VectorXd::Ones(3), 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("equatorial geodesic on the round band chart closes after 2 pi") {
  ChartConnection band = sphere_band();
  VectorXd x0(2), v0(2);
  x0 << 0.0, 0.0;
  v0 << 0.0, 1.0;  // unit speed along the equator: g_θθ(0) = 1
  GeodesicTrajectory traj =
      integrate_geodesic(band, x0, v0, 0.0, 2.0 * M_PI);
  REQUIRE(traj.end == GeodesicTrajectory::End::kReachedEnd);
  CHECK(std::abs(traj.x_end[0]) < 1e-10);                 // stays on z = 0
  CHECK(std::abs(traj.x_end[1] - 2.0 * M_PI) < 1e-8);     // full turn
  CHECK(std::abs(traj.v_end[1] - 1.0) < 1e-9);
  // dense-output residual stays within the configured tolerance budget
  CHECK(traj.max_step_defect < 10.0 * 1e-10);
}

TEST_CASE("chart exit is a first-class outcome with the exit state") {
  ChartConnection band = sphere_band();
  VectorXd x0(2), v0(2);
  x0 << 0.5, 0.0;
  v0 << std::sqrt(1.0 - 0.25), 0.0;  // due north, unit speed
  GeodesicTrajectory traj = integrate_geodesic(band, x0, v0, 0.0, 10.0);
  CHECK(traj.end == GeodesicTrajectory::End::kChartExit);
  CHECK(std::abs(traj.x_end[0] - 0.95) < 1e-6);  // band boundary
  CHECK(traj.t_end < 10.0);
}

TEST_CASE("one-parameter subgroups solve the exp-chart geodesic equation") {
  StructureConstants sc = so3_algebra();
  ChartConnection chart = exp_chart_connection(half_ad_connection(sc), 2.8);
  SplitMix64 rng(5);
  for (int rep = 0; rep < 3; ++rep) {
    VectorXd a(3);
    for (int i = 0; i < 3; ++i) a[i] = rng.uniform(-0.8, 0.8);
    GeodesicTrajectory traj =
        integrate_geodesic(chart, VectorXd::Zero(3), a, 0.0, 2.0);
    REQUIRE(traj.end == GeodesicTrajectory::End::kReachedEnd);
    for (double t : {0.5, 1.2, 2.0}) {
      CHECK((traj.x(t) - t * a).lpNorm<Eigen::Infinity>() < 1e-8);
      CHECK((traj.v(t) - a).lpNorm<Eigen::Infinity>() < 1e-8);
    }
  }
}

TEST_CASE("ricci along: flat zero, round sphere one, so(3) constant") {
  ChartConnection flat = flat_connection(2);
  VectorXd z0 = VectorXd::Zero(2), e1(2);
  e1 << 1.0, 0.0;
  GeodesicTrajectory tf = integrate_geodesic(flat, z0, e1, 0.0, 5.0);
  RicciAlong qf(flat, tf);
  CHECK(std::abs(qf(2.5)) < 1e-12);

  // Round sphere, finite-difference curvature route, unit-speed geodesic.
  ChartConnection band = sphere_band(true);
  VectorXd x0(2), v0(2);
  x0 << 0.2, 1.0;
  static ZollMetric round_m(round_profile());
  double vz, vth;
  round_m.unit_tangent(0.2, 0.7, vz, vth);
  v0 << vz, vth;
  GeodesicTrajectory ts = integrate_geodesic(band, x0, v0, 0.0, 3.0);
  RicciAlong qs(band, ts);
  for (double t : {0.3, 1.1, 2.7}) CHECK(std::abs(qs(t) - 1.0) < 1e-6);

  // so(3) Killing connection: q constant along any geodesic.
  ChartConnection lie = exp_chart_connection(
      half_ad_connection(so3_algebra()), 2.8);
  VectorXd a(3);
  a << 0.5, -0.3, 0.6;
  GeodesicTrajectory tl = integrate_geodesic(lie, VectorXd::Zero(3), a, 0.0,
                                             2.5);
  RicciAlong ql(lie, tl);
  double q0 = ql(0.1);
  CHECK(q0 > 0.0);
  for (double t : {0.8, 1.6, 2.4}) CHECK(std::abs(ql(t) - q0) < 1e-8);
  CHECK(std::abs(q0 - 0.5 * a.squaredNorm()) < 1e-8);
}

TEST_CASE("finite-difference Ricci agrees with the analytic route") {
  ChartConnection fd = sphere_band(true);
  ChartConnection an = sphere_band(false);
  SplitMix64 rng(17);
  for (int rep = 0; rep < 12; ++rep) {
    VectorXd x(2);
    // away from the band edge, where third Christoffel derivatives blow up
    x << rng.uniform(-0.6, 0.6), rng.uniform(0.0, 6.28);
    Eigen::MatrixXd rf = ricci_tensor(fd, x);
    Eigen::MatrixXd ra = ricci_tensor(an, x);
    CHECK((rf - ra).lpNorm<Eigen::Infinity>() < 1e-6);
  }
  // Same cross-check on a lie exp chart.
  ChartConnection lie_fd = exp_chart_connection(
      half_ad_connection(sl2_algebra()), 2.0, true);
  ChartConnection lie_an = exp_chart_connection(
      half_ad_connection(sl2_algebra()), 2.0, false);
  for (int rep = 0; rep < 6; ++rep) {
    VectorXd x(3);
    for (int i = 0; i < 3; ++i) x[i] = rng.uniform(-0.7, 0.7);
    CHECK((ricci_tensor(lie_fd, x) - ricci_tensor(lie_an, x))
              .lpNorm<Eigen::Infinity>() < 1e-5);
  }
}

TEST_CASE("flat Jacobi field grows linearly with one zero") {
  ChartConnection flat = flat_connection(2);
  VectorXd x0 = VectorXd::Zero(2), v0(2);
  v0 << 1.0, 0.0;
  GeodesicTrajectory traj = integrate_geodesic(flat, x0, v0, 0.0, 4.0);
  JacobiField field = integrate_jacobi(flat, traj, VectorXd::Zero(1),
                                       VectorXd::Ones(1));
  CHECK(std::abs(field.a(3.0)[0] - 3.0) < 1e-10);
  REQUIRE(field.zero_times.size() == 1);
  CHECK(std::abs(field.zero_times[0]) < 1e-8);
}

TEST_CASE("round-sphere Jacobi field is sin t with zeros at multiples of pi") {
  ChartConnection band = sphere_band();
  VectorXd x0(2), v0(2);
  x0 << 0.0, 0.0;
  v0 << 0.0, 1.0;
  GeodesicTrajectory traj =
      integrate_geodesic(band, x0, v0, 0.0, 2.0 * M_PI * 0.999);
  JacobiField field = integrate_jacobi(band, traj, VectorXd::Zero(1),
                                       VectorXd::Ones(1));
  // accuracy floor set by the finite-difference curvature feeding the system
  for (double t : {0.5, 1.5, 3.0, 5.0})
    CHECK(std::abs(field.a(t)[0] - std::sin(t)) < 5e-7);
  REQUIRE(field.zero_times.size() == 2);
  CHECK(std::abs(field.zero_times[0]) < 1e-8);
  CHECK(std::abs(field.zero_times[1] - M_PI) < 1e-6);
}

TEST_CASE("Jacobi solver matches the geodesic-variation oracle") {
  // Flat, sphere and a generic start on the sphere.
  struct Case {
    ChartConnection conn;
    VectorXd x0, v0;
    double a0, a10, t;
  };
  std::vector<Case> cases;
  {
    Case c{flat_connection(2), VectorXd::Zero(2), VectorXd(2), 0.3, 0.8, 2.0};
    c.v0 << 1.0, 0.2;
    cases.push_back(c);
  }
  {
    static ZollMetric m(round_profile());
    Case c{sphere_band(), VectorXd(2), VectorXd(2), 0.0, 1.0, 2.5};
    c.x0 << 0.1, 0.4;
    double vz, vth;
    m.unit_tangent(0.1, 0.9, vz, vth);
    c.v0 << vz, vth;
    cases.push_back(c);
  }
  for (const auto& c : cases) {
    GeodesicTrajectory traj =
        integrate_geodesic(c.conn, c.x0, c.v0, 0.0, c.t * 1.002);
    JacobiField field = integrate_jacobi(
        c.conn, traj, VectorXd::Constant(1, c.a0),
        VectorXd::Constant(1, c.a10));
    double num = field.a(c.t)[0];
    double ora = jacobi_variation_oracle(c.conn, field, c.x0, c.v0, c.a0,
                                         c.a10, c.t);
    CHECK(std::abs(num - ora) < 1e-4 * std::max(1.0, std::abs(ora)));
  }
}

TEST_CASE("Jacobi solver is linear in its initial state") {
  ChartConnection band = sphere_band();
  VectorXd x0(2), v0(2);
  x0 << 0.05, 0.0;
  static ZollMetric m(round_profile());
  double vz, vth;
  m.unit_tangent(0.05, 1.2, vz, vth);
  v0 << vz, vth;
  OdeOptions tight;
  tight.atol = tight.rtol = 1e-12;
  GeodesicTrajectory traj = integrate_geodesic(band, x0, v0, 0.0, 3.0, tight);
  SplitMix64 rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    double a1 = rng.uniform(-1, 1), b1 = rng.uniform(-1, 1);
    double a2 = rng.uniform(-1, 1), b2 = rng.uniform(-1, 1);
    double al = rng.uniform(-2, 2), be = rng.uniform(-2, 2);
    auto f1 = integrate_jacobi(band, traj, VectorXd::Constant(1, a1),
                               VectorXd::Constant(1, b1), tight);
    auto f2 = integrate_jacobi(band, traj, VectorXd::Constant(1, a2),
                               VectorXd::Constant(1, b2), tight);
    auto fs = integrate_jacobi(
        band, traj, VectorXd::Constant(1, al * a1 + be * a2),
        VectorXd::Constant(1, al * b1 + be * b2), tight);
    for (double t : {1.0, 2.0, 3.0}) {
      double lin = al * f1.a(t)[0] + be * f2.a(t)[0];
      CHECK(std::abs(fs.a(t)[0] - lin) < 1e-9);
    }
  }
}

TEST_CASE("geodesic curvature vanishes exactly on geodesics") {
  ChartConnection band = sphere_band();
  VectorXd x0(2), v0(2);
  x0 << 0.1, 0.2;
  static ZollMetric m(round_profile());
  double vz, vth;
  m.unit_tangent(0.1, 0.5, vz, vth);
  v0 << vz, vth;
  GeodesicTrajectory traj = integrate_geodesic(band, x0, v0, 0.0, 3.0);
  auto curve = [&](double t) { return traj.x(t); };
  for (double t : {0.5, 1.5, 2.5})
    CHECK(geodesic_curvature(band, curve, t).lpNorm<Eigen::Infinity>() < 1e-5);

  // Reparameterize the same geodesic by s -> s^3 near s = 1: still zero.
  auto repar = [&](double s) { return traj.x(s * s * s); };
  CHECK(geodesic_curvature(band, repar, 1.0).lpNorm<Eigen::Infinity>() < 1e-4);
}

TEST_CASE("latitude circles have constant nonzero geodesic curvature") {
  ChartConnection band = sphere_band();
  const double z0 = 0.4;
  auto circle = [&](double t) {
    VectorXd x(2);
    x << z0, t;
    return x;
  };
  // Direct covariant evaluation: c'' = 0, u = (0,1), so the normal component
  // is Γ^z_θθ = z0 (1 - z0²) per unit speed squared (|u|_euclid = 1).
  double expect = z0 * (1.0 - z0 * z0);
  for (double t : {0.3, 2.0, 4.4}) {
    VectorXd kappa = geodesic_curvature(band, circle, t);
    CHECK(std::abs(std::abs(kappa[0]) - expect) < 1e-7);
  }
  CHECK_THROWS_AS(
      geodesic_curvature(band, [&](double) { return circle(0.0); }, 1.0),
      std::invalid_argument);
}

TEST_CASE("weyl equivalence: identical and shifted connections") {
  ChartConnection base = sphere_band();
  WeylResult self = weyl_equivalence(base, base);
  CHECK(self.equivalent);
  CHECK(self.max_residual == 0.0);
  for (const auto& s : self.samples)
    CHECK(s.lambda.lpNorm<Eigen::Infinity>() < 1e-14);

  // Shift by λ = dx¹ (constant one-form): recovered exactly.
  ChartConnection shifted = base;
  auto base_chris = base.christoffel;
  shifted.christoffel = [base_chris](const VectorXd& x, Tensor3& g) {
    base_chris(x, g);
    const int n = g.n;
    const double lam[2] = {1.0, 0.0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (i == k) g(i, j, k) += lam[j];
          if (i == j) g(i, j, k) += lam[k];
        }
  };
  shifted.analytic_ricci = nullptr;
  WeylResult res = weyl_equivalence(base, shifted);
  CHECK(res.equivalent);
  for (const auto& s : res.samples) {
    CHECK(std::abs(s.lambda[0] - 1.0) < 1e-10);
    CHECK(std::abs(s.lambda[1]) < 1e-10);
  }
}

TEST_CASE("weyl projection agrees with the exhaustive least-squares oracle") {
  SplitMix64 rng(404);
  for (int rep = 0; rep < 25; ++rep) {
    int n = 2 + static_cast<int>(rng.next() % 3);  // 2..4
    Tensor3 d(n);
    for (auto& v : d.v) v = rng.uniform(-1.0, 1.0);
    // Symmetrize in the lower indices (torsion-free difference).
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          double s = 0.5 * (d(i, j, k) + d(i, k, j));
          d(i, j, k) = d(i, k, j) = s;
        }
    auto [l1, r1] = weyl_project(d);
    auto [l2, r2] = weyl_lsq_oracle(d);
    CHECK((l1 - l2).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK(std::abs(r1 - r2) < 1e-10);
  }
}

TEST_CASE("random non-projective perturbations are flagged inequivalent") {
  ChartConnection base = flat_connection(3);
  SplitMix64 rng(808);
  for (int rep = 0; rep < 10; ++rep) {
    Tensor3 pert(3);
    for (auto& v : pert.v) v = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = j; k < 3; ++k) {
          double s = 0.5 * (pert(i, j, k) + pert(i, k, j));
          pert(i, j, k) = pert(i, k, j) = s;
        }
    // Remove the projective part so the remainder is orthogonal to the
    // λ-subspace, then make sure it is well away from zero.
    auto [lambda, res] = weyl_project(pert);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          if (i == k) pert(i, j, k) -= lambda[j];
          if (i == j) pert(i, j, k) -= lambda[k];
        }
    REQUIRE(res > 1e-3);
    ChartConnection other = base;
    other.christoffel = [pert](const VectorXd&, Tensor3& g) { g = pert; };
    other.analytic_ricci = nullptr;
    WeylResult w = weyl_equivalence(base, other);
    CHECK_FALSE(w.equivalent);
    CHECK(w.max_residual > 1e-3);
  }
}

TEST_CASE("weyl equivalence behaves as an equivalence relation") {
  ChartConnection a = sphere_band();
  auto shift = [](const ChartConnection& src, double l0, double l1) {
    ChartConnection dst = src;
    auto chris = src.christoffel;
    dst.christoffel = [chris, l0, l1](const VectorXd& x, Tensor3& g) {
      chris(x, g);
      const double lam[2] = {l0, l1};
      const int n = g.n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            if (i == k) g(i, j, k) += lam[j];
            if (i == j) g(i, j, k) += lam[k];
          }
    };
    dst.analytic_ricci = nullptr;
    return dst;
  };
  ChartConnection b = shift(a, 0.4, -0.2);
  ChartConnection c = shift(b, -0.1, 0.7);
  CHECK(weyl_equivalence(a, a).equivalent);   // reflexive
  CHECK(weyl_equivalence(a, b).equivalent);
  CHECK(weyl_equivalence(b, a).equivalent);   // symmetric
  CHECK(weyl_equivalence(b, c).equivalent);
  CHECK(weyl_equivalence(a, c).equivalent);   // transitive
  WeylResult ac = weyl_equivalence(a, c);
  for (const auto& s : ac.samples) {
    CHECK(std::abs(s.lambda[0] - 0.3) < 1e-10);
    CHECK(std::abs(s.lambda[1] - 0.5) < 1e-10);
  }
}
