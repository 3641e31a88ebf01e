#ifndef PROJCOMP_ZOLL_HPP
#define PROJCOMP_ZOLL_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "projcomp/atlas.hpp"
#include "projcomp/chart.hpp"
#include "projcomp/oscillation.hpp"

namespace projcomp {

/// Odd profile f : [-1,1] -> (-1,1) with f(±1) = 0, plus its derivative.
struct ZollProfile {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::string name = "custom";
  double alpha = 0.0, beta = 0.0, z0 = 0.0;

  /// Checks |f| < 1, oddness and the endpoint values on a grid; throws
  /// std::invalid_argument on violation.
  void validate(double tol = 1e-10, int grid = 2001) const;
};

ZollProfile round_profile();  // f ≡ 0

/// f(z) = cos(pi z/2) e^{-alpha z^2} sin(2 atan(beta(z-z0)) + 2 atan(beta(z+z0)))
/// with the analytic derivative. Rejects parameters that break the profile
/// invariants.
ZollProfile build_paper_profile(double alpha, double beta, double z0);

/// Wraps a user-supplied f with a finite-difference derivative (h = 1e-6).
ZollProfile user_profile(std::function<double(double)> f,
                         const std::string& name = "custom");

/// Surface-of-revolution metric on the 2-sphere:
///   ds^2 = (1+f)^2/(1-z^2) dz^2 + (1-z^2) dθ^2
/// in the band chart x = (z, θ), completed by two conformal polar caps.
/// The two caps carry separate radial tables: the metric has no z -> -z
/// symmetry for f != 0. Charts and atlases returned below hold a pointer to
/// this object and must not outlive it.
class ZollMetric {
 public:
  explicit ZollMetric(ZollProfile profile);

  const ZollProfile& profile() const { return m_profile; }

  double g_zz(double z) const;
  double g_thth(double z) const { return 1.0 - z * z; }

  /// κ(z) = (f + 1 - z f')/(f + 1)^3
  double gauss_curvature(double z) const;
  /// Independent route: curvature of the metric components by central
  /// finite differences (surface-of-revolution reduction of Brioschi).
  double brioschi_curvature_fd(double z, double h = 1e-5) const;

  /// Band chart on |z| < 0.95. With analytic Ricci (K g) unless
  /// `fd_ricci_only`, which forces the finite-difference route.
  ChartConnection band_chart(bool fd_ricci_only = false) const;
  /// Conformal polar cap, hemisphere +1 (north) or -1 (south).
  ChartConnection cap_chart(int hemisphere, bool fd_ricci_only = false) const;

  /// Charts: 0 band, 1 north cap, 2 south cap; hysteresis 0.89/0.91 in |z|.
  Atlas atlas(bool fd_ricci_only = false) const;

  /// Unit-metric tangent at (z, θ) with direction angle ψ measured from the
  /// z-leg: v = cosψ e_z/|e_z| + sinψ e_θ/|e_θ|.
  void unit_tangent(double z, double psi, double& vz, double& vth) const;

  // Radial cap data (exposed for tests).
  double cap_phi_integral(double z) const;          // ∫_0^z f/(1-s^2) ds
  double cap_s_of_z(int hemisphere, double z) const;
  double cap_lambda2_of_s(int hemisphere, double s) const;
  double cap_z_of_s(int hemisphere, double s) const;

 private:
  struct CapTable {
    std::vector<double> s, z, lam2, dlam2_ds, dz_ds;
    double s_max = 0.0;
  };

  void build_phi_table();
  void build_cap_table(int hemisphere);
  double phi_deriv(double z) const;  // f/(1-z^2), regular branch at |z|=1
  const CapTable& cap(int hemisphere) const {
    return hemisphere > 0 ? m_north : m_south;
  }
  double cap_dlambda2_ds(int hemisphere, double s) const;

  ZollProfile m_profile;
  // Hermite table for Phi on [0,1] (Phi is even).
  std::vector<double> m_phi_z, m_phi_val, m_phi_der;
  CapTable m_north, m_south;
};

struct ZollClosureOptions {
  double phase_tol = 1e-5;
  double t_min = 1.0;
  double period_search_factor = 4.0;  // times the round-sphere period 2π
  double coarse_threshold = 5e-2;
  OdeOptions ode;
};

struct ZollClosure {
  bool closed = false;
  double period = 0.0;
  double phase_distance = 0.0;  // at the detected (or best) candidate
};

/// Integrates the geodesic from (z0, θ0, direction ψ) at unit speed and looks
/// for a return to the initial phase point (z, θ mod 2π, velocity).
ZollClosure zoll_geodesic_closure(const ZollMetric& metric, double z0,
                                  double theta0, double psi,
                                  const ZollClosureOptions& opt = {});

struct ClosedGeodesic {
  double z0 = 0.0, theta0 = 0.0, psi = 0.0;
  double period = 0.0;
};

struct JacobiZeroOptions {
  double periodicity_tol = 1e-3;  // relative closure of (a, a1) over a period
  OdeOptions ode;
};

/// Closed-geodesic completeness certificate: integrates the Jacobi field with
/// (a, a1)(0) = (a0, a1_0) over one period; the verdict is complete when the
/// field is nonzero, vanishes at a point and closes up over the period (its
/// zeros then recur along the whole geodesic). The zero field is rejected.
CompletenessVerdict jacobi_zero_completeness(const ZollMetric& metric,
                                             const ClosedGeodesic& geo,
                                             double a0 = 0.0, double a1_0 = 1.0,
                                             const JacobiZeroOptions& opt = {});

}  // namespace projcomp

#endif
