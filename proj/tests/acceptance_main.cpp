// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Tolerances and runtime budgets are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "projcomp/bessel.hpp"
#include "projcomp/chart.hpp"
#include "projcomp/csv.hpp"
#include "projcomp/curve_model.hpp"
#include "projcomp/lie_algebra.hpp"
#include "projcomp/lie_connection.hpp"
#include "projcomp/oscillation.hpp"
#include "projcomp/registry.hpp"
#include "projcomp/rng.hpp"
#include "projcomp/sweep.hpp"
#include "projcomp/zoll.hpp"

using namespace projcomp;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, double seconds,
            double budget, const std::string& detail) {
  bool in_time = seconds < budget;
  bool pass = ok && in_time;
  if (!pass) ++failures;
  std::printf("[%s] criterion %2d: %s (%.2fs/%.0fs) %s\n",
              pass ? "PASS" : "FAIL", number, name.c_str(), seconds, budget,
              detail.c_str());
  std::fflush(stdout);
}

template <class F>
void run(int number, const std::string& name, double budget, F&& body) {
  auto t0 = Clock::now();
  bool ok = false;
  std::string detail;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  report(number, name, ok, secs, budget, detail);
}

// finite-difference geodesic-variation oracle (normal component, n = 2)
double variation_oracle(const ChartConnection& conn, const JacobiField& field,
                        const VectorXd& x0, const VectorXd& v0, double a0,
                        double a10, double t, double eps = 1e-4) {
  Eigen::MatrixXd q = jacobi_start_frame(v0);
  VectorXd w = q.col(1) * a0;
  Tensor3 g(conn.dim);
  conn.eval_christoffel(x0, g);
  VectorXd u = q.col(1) * a10 - christoffel_bilinear(g, v0, w);
  GeodesicTrajectory plus =
      integrate_geodesic(conn, x0 + eps * w, v0 + eps * u, 0.0, t * 1.001, {});
  GeodesicTrajectory minus =
      integrate_geodesic(conn, x0 - eps * w, v0 - eps * u, 0.0, t * 1.001, {});
  VectorXd j = (plus.x(t) - minus.x(t)) / (2.0 * eps);
  return field.frame(t).partialPivLu().solve(j)[1];
}

bool jacobi_oracle_case(const ZollMetric& metric, double z0, double psi,
                        double period, double& worst) {
  ChartConnection band = metric.band_chart();
  double vz, vth;
  metric.unit_tangent(z0, psi, vz, vth);
  VectorXd x0(2), v0(2);
  x0 << z0, 0.2;
  v0 << vz, vth;
  GeodesicTrajectory traj =
      integrate_geodesic(band, x0, v0, 0.0, period * 1.002);
  if (traj.end != GeodesicTrajectory::End::kReachedEnd) return false;
  JacobiField field =
      integrate_jacobi(band, traj, VectorXd::Zero(1), VectorXd::Ones(1));
  double scale = 0.0;
  std::vector<std::pair<double, double>> samples;
  for (int i = 1; i <= 25; ++i) {
    double t = period * i / 25.0;
    double ora = variation_oracle(band, field, x0, v0, 0.0, 1.0, t);
    samples.emplace_back(field.a(t)[0], ora);
    scale = std::max(scale, std::abs(ora));
  }
  for (auto [num, ora] : samples)
    worst = std::max(worst, std::abs(num - ora) / scale);
  return true;
}

}  // namespace

int main() {
  run(1, "round-sphere curvature is 1 on a 101-point grid", 1.0,
      [](std::string& detail) {
        ZollMetric m(round_profile());
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
          double z = -0.99 + 1.98 * i / 100.0;
          worst = std::max(worst, std::abs(m.gauss_curvature(z) - 1.0));
        }
        detail = "max |kappa - 1| = " + format_double(worst, 3);
        return worst < 1e-10;
      });

  run(2, "negative-band reproduction at (alpha,beta,z0) = (1, 1/4, 1/2)", 5.0,
      [](std::string& detail) {
        ZollMetric m(build_paper_profile(1.0, 0.25, 0.5));
        double kmin = 1e300;
        for (int i = 1; i < 200000; ++i)
          kmin = std::min(kmin, m.gauss_curvature(i / 200000.0));
        double k_pos = m.gauss_curvature(0.99), k_neg = m.gauss_curvature(-0.99);
        bool negative_band = kmin < 0.0;
        bool poles_near_round =
            std::abs(k_pos - 1.0) <= 0.2 && std::abs(k_neg - 1.0) <= 0.2;
        detail = "min kappa(0,1) = " + format_double(kmin, 6) +
                 ", kappa(+-0.99) = " + format_double(k_pos, 6) + " / " +
                 format_double(k_neg, 6);
        return negative_band && poles_near_round;
      });

  run(3, "Killing-Ricci identity on the algebra registry", 1.0,
      [](std::string& detail) {
        double worst = 0.0;
        for (const char* name : {"so3", "sl2", "heisenberg", "abelian3"}) {
          StructureConstants sc = algebra_by_name(name);
          MatrixXd r = symmetrized_ricci(half_ad_connection(sc));
          worst = std::max(worst, (r + 0.25 * killing_form(sc))
                                      .lpNorm<Eigen::Infinity>());
        }
        detail = "max residual = " + format_double(worst, 3);
        return worst < 1e-10;
      });

  run(4, "completeness trichotomy over 8-geodesic sweeps", 30.0,
      [](std::string& detail) {
        int bad = 0, undetermined = 0;
        auto sweep = [&](const std::string& conn,
                         CompletenessVerdict::Verdict expect) {
          CompletenessSweepSpec spec;
          spec.conn = conn;
          spec.count = 8;
          spec.seed = 1;
          spec.t_end = conn == "sphere" ? 25.0 : 40.0;
          for (const auto& v : completeness_sweep(spec, true)) {
            if (v.verdict != expect) ++bad;
            if (v.verdict == CompletenessVerdict::Verdict::kUndetermined)
              ++undetermined;
          }
        };
        sweep("sphere", CompletenessVerdict::Verdict::kComplete);
        sweep("lie:so3", CompletenessVerdict::Verdict::kComplete);
        sweep("flat", CompletenessVerdict::Verdict::kIncomplete);
        sweep("flat-torus", CompletenessVerdict::Verdict::kIncomplete);
        detail = std::to_string(32 - bad) + "/32 verdicts as expected, " +
                 std::to_string(undetermined) + " undetermined";
        return bad == 0 && undetermined == 0;
      });

  run(5, "oscillation zeros against the Bessel comparison solution", 10.0,
      [](std::string& detail) {
        // q = 1/t; the window is extended to 1030 so that twenty zeros of
        // sqrt(t) J1(2 sqrt(t)) lie inside it (the twentieth sits at 1011.6).
        OdeOptions opt;
        opt.atol = opt.rtol = 1e-11;
        auto q = [](double t) { return 1.0 / t; };
        ScalarSolution sol = solve_oscillation_single(
            q, 1.0, 1030.0, bessel_j(1.0, 2.0), bessel_j(0.0, 2.0), opt);
        std::vector<double> predicted =
            bessel_comparison_zeros(4.0, 1.0, 1.0, 1030.0);
        if (sol.zeros.size() < 20 || predicted.size() < 20) {
          detail = "found " + std::to_string(sol.zeros.size()) + " zeros, " +
                   std::to_string(predicted.size()) + " predictions";
          return false;
        }
        double worst = 0.0;
        for (int k = 0; k < 20; ++k)
          worst = std::max(worst, std::abs(sol.zeros[k] - predicted[k]));
        detail = "max |dt| over 20 zeros = " + format_double(worst, 3);
        return worst < 1e-4;
      });

  run(6, "Jacobi solver against the geodesic-variation oracle", 30.0,
      [](std::string& detail) {
        double worst = 0.0;
        ZollMetric round_m(round_profile());
        ZollMetric paper_m(build_paper_profile(1.0, 0.25, 0.5));
        bool ok = jacobi_oracle_case(round_m, 0.0, 0.8, 2.0 * M_PI, worst) &&
                  jacobi_oracle_case(paper_m, 0.1, 0.8, 2.0 * M_PI, worst);
        detail = "max relative error = " + format_double(worst, 3);
        return ok && worst < 1e-4;
      });

  run(7, "Zoll closure and Jacobi-zero completeness for 20 random geodesics",
      120.0, [](std::string& detail) {
        ZollMetric metric(build_paper_profile(1.0, 0.25, 0.5));
        ZollSweepSpec spec;
        spec.count = 20;
        spec.seed = 7;
        auto cases = zoll_closure_sweep(metric, spec, true);
        int closed = 0, complete = 0;
        double worst_phase = 0.0;
        for (const auto& c : cases) {
          if (c.closure.closed) ++closed;
          worst_phase = std::max(worst_phase, c.closure.phase_distance);
          if (c.verdict.verdict == CompletenessVerdict::Verdict::kComplete)
            ++complete;
        }
        detail = std::to_string(closed) + "/20 closed (worst phase " +
                 format_double(worst_phase, 3) + "), " +
                 std::to_string(complete) + "/20 complete";
        return closed == 20 && complete == 20 && worst_phase < 1e-5;
      });

  run(8, "symmetry invariant conservation and zero orders, 100 states", 10.0,
      [](std::string& detail) {
        SplitMix64 rng(2026);
        double worst_drift = 0.0;
        int audited = 0;
        for (int rep = 0; rep < 100; ++rep) {
          SymmetryState init{rng.uniform(-1, 1), rng.uniform(-1, 1),
                             rng.uniform(-1, 1)};
          if (rep % 3 == 0) {
            if (std::abs(init.x1) < 0.3) init.x1 = init.x1 < 0 ? -0.3 : 0.3;
            if (std::abs(init.x11) < 0.1)
              init.x11 = init.x11 < 0 ? -0.1 : 0.1;
            init.xl = -init.x11 * init.x11 / (4.0 * init.x1);
          }
          auto traj =
              integrate_symmetry(CurveGauge::affine(), init, -50.0, 50.0);
          worst_drift = std::max(worst_drift, traj.invariant_drift);
          SymmetryClass cls = classify_symmetry(init, 1e-9);
          auto zeros = zero_order_audit(traj, 1e-7);
          for (const auto& z : zeros) {
            ++audited;
            if (cls == SymmetryClass::kHyperbolic && z.order != 1)
              return false;
            if (cls == SymmetryClass::kParabolic && z.order != 2) return false;
          }
          if (cls == SymmetryClass::kElliptic && !zeros.empty()) return false;
        }
        detail = "max drift = " + format_double(worst_drift, 3) + ", " +
                 std::to_string(audited) + " zeros audited";
        return worst_drift < 1e-8;
      });

  run(9, "sl(2,R) direction classes from the constant Ricci term", 1.0,
      [](std::string& detail) {
        StructureConstants sc = sl2_algebra();
        VectorXd so2(3), diag(3), nilp(3);
        so2 << 0, 1, -1;   // E - F, the rotation generator
        diag << 1, 0, 0;   // H = diag(1, -1)
        nilp << 0, 1, 0;   // E, nilpotent
        bool ok = classify_direction(sc, so2) == DirectionClass::kElliptic &&
                  classify_direction(sc, diag) == DirectionClass::kHyperbolic &&
                  classify_direction(sc, nilp) == DirectionClass::kParabolic;
        detail = std::string("so2 -> ") +
                 direction_class_name(classify_direction(sc, so2)) +
                 ", diag -> " +
                 direction_class_name(classify_direction(sc, diag)) +
                 ", nilpotent -> " +
                 direction_class_name(classify_direction(sc, nilp));
        return ok;
      });

  run(10, "Weyl recovery of 50 shifts and 50 non-projective rejections", 10.0,
      [](std::string& detail) {
        SplitMix64 rng(1234);
        double worst_recovery = 0.0;
        int rejected = 0;
        for (int rep = 0; rep < 50; ++rep) {
          const int n = 2 + static_cast<int>(rng.next() % 2);
          // random torsion-free connection, affine in x
          Tensor3 base0(n), base1(n);
          for (auto& v : base0.v) v = rng.uniform(-0.5, 0.5);
          for (auto& v : base1.v) v = rng.uniform(-0.2, 0.2);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = j; k < n; ++k) {
                base0(i, j, k) = base0(i, k, j);
                base1(i, j, k) = base1(i, k, j);
              }
          ChartConnection a;
          a.dim = n;
          a.box_lo = VectorXd::Constant(n, -1.0);
          a.box_hi = VectorXd::Constant(n, 1.0);
          a.christoffel = [base0, base1](const VectorXd& x, Tensor3& g) {
            g = base0;
            for (std::size_t q = 0; q < g.v.size(); ++q)
              g.v[q] += base1.v[q] * x[0];
          };
          // affine one-form lambda(x)
          VectorXd lam0(n), lam1(n);
          for (int i = 0; i < n; ++i) {
            lam0[i] = rng.uniform(-1.0, 1.0);
            lam1[i] = rng.uniform(-0.5, 0.5);
          }
          ChartConnection b = a;
          auto base_chris = a.christoffel;
          b.christoffel = [base_chris, lam0, lam1](const VectorXd& x,
                                                   Tensor3& g) {
            base_chris(x, g);
            const int nn = g.n;
            VectorXd lam = lam0 + lam1 * x[1 % nn];
            for (int i = 0; i < nn; ++i)
              for (int j = 0; j < nn; ++j)
                for (int k = 0; k < nn; ++k) {
                  if (i == k) g(i, j, k) += lam[j];
                  if (i == j) g(i, j, k) += lam[k];
                }
          };
          WeylOptions wopt;
          wopt.seed = rng.next();
          WeylResult res = weyl_equivalence(a, b, wopt);
          if (!res.equivalent) return false;
          for (const auto& s : res.samples) {
            VectorXd expect = lam0 + lam1 * s.x[1 % n];
            worst_recovery = std::max(
                worst_recovery, (s.lambda - expect).lpNorm<Eigen::Infinity>());
          }

          // non-projective perturbation: symmetric, orthogonal to the
          // lambda-subspace, unit scale
          Tensor3 pert(n);
          for (auto& v : pert.v) v = rng.uniform(-1.0, 1.0);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = j; k < n; ++k) {
                double s = 0.5 * (pert(i, j, k) + pert(i, k, j));
                pert(i, j, k) = pert(i, k, j) = s;
              }
          auto [pl, pres] = weyl_project(pert);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) {
                if (i == k) pert(i, j, k) -= pl[j];
                if (i == j) pert(i, j, k) -= pl[k];
              }
          ChartConnection c = a;
          c.christoffel = [base_chris, pert](const VectorXd& x, Tensor3& g) {
            base_chris(x, g);
            for (std::size_t q = 0; q < g.v.size(); ++q) g.v[q] += pert.v[q];
          };
          WeylResult bad = weyl_equivalence(a, c, wopt);
          if (!bad.equivalent && bad.max_residual > 1e-6) ++rejected;
        }
        detail = "max lambda error = " + format_double(worst_recovery, 3) +
                 ", " + std::to_string(rejected) + "/50 rejected";
        return worst_recovery < 1e-8 && rejected == 50;
      });

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
