#ifndef PROJCOMP_OSCILLATION_HPP
#define PROJCOMP_OSCILLATION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "projcomp/ode.hpp"

namespace projcomp {

/// Fundamental pair of y'' + q(t) y = 0 with y0:(1,0), y1:(0,1) at t0,
/// dense output, zero lists and the Wronskian drift.
struct OscillationSolution {
  DenseSolution sol;  // state (y0, y0', y1, y1')
  double t0 = 0.0, t1 = 0.0;
  std::vector<double> zeros_y0, zeros_y1;
  double wronskian_drift = 0.0;  // max |W - 1|

  double y0(double t) const { return sol.eval_component(t, 0); }
  double dy0(double t) const { return sol.eval_component(t, 1); }
  double y1(double t) const { return sol.eval_component(t, 2); }
  double dy1(double t) const { return sol.eval_component(t, 3); }
};

/// Integrates the fundamental pair and locates zeros by sign change plus
/// bisection. Asserts strict Sturm separation of the two zero lists.
OscillationSolution solve_oscillation(const std::function<double(double)>& q,
                                      double t0, double t1,
                                      const OdeOptions& opt = {});

/// Single solution with caller-chosen initial data; zeros located the same way.
struct ScalarSolution {
  DenseSolution sol;
  std::vector<double> zeros;
  double y(double t) const { return sol.eval_component(t, 0); }
};
ScalarSolution solve_oscillation_single(const std::function<double(double)>& q,
                                        double t0, double t1, double y_init,
                                        double dy_init,
                                        const OdeOptions& opt = {});

class DegenerateMoebius : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Projective parameter u = (a y1 + b y0)/(c y1 + d y0), ad - bc != 0.
/// Poles are the zeros of the denominator solution; the winding count at t is
/// the number of poles crossed since t0.
class ProjectiveParameter {
 public:
  ProjectiveParameter(const OscillationSolution& sol, double a, double b,
                      double c, double d);
  double operator()(double t) const;
  const std::vector<double>& poles() const { return m_poles; }
  int winding(double t) const;

 private:
  const OscillationSolution* m_sol;
  double m_a, m_b, m_c, m_d;
  std::vector<double> m_poles;
};

inline ProjectiveParameter projective_parameter(const OscillationSolution& sol,
                                                double a, double b, double c,
                                                double d) {
  return ProjectiveParameter(sol, a, b, c, d);
}

/// Zeros in [t_lo, t_hi] of sqrt(t) J_{1/eps}( (sqrt(c)/eps) t^{eps/2} ),
/// the solutions of the comparison equation y'' + (c / (4 t^{2-eps})) y = 0.
std::vector<double> bessel_comparison_zeros(double c, double eps, double t_lo,
                                            double t_hi);

struct ComparisonCertificate {
  double c = 0.0, eps = 0.0;
  double tail_lo = 0.0, tail_hi = 0.0;
};

struct CompletenessVerdict {
  enum class Verdict { kComplete, kIncomplete, kUndetermined };
  std::string geodesic_id;
  double window_lo = 0.0, window_hi = 0.0;
  int zeros_forward = 0, zeros_backward = 0;
  std::optional<ComparisonCertificate> certificate;
  bool jacobi_zero_certificate = false;
  Verdict verdict = Verdict::kUndetermined;

  /// CSV row: id,window,zeros_fwd,zeros_bwd,cert_c,cert_eps,verdict
  std::string csv_row() const;
  static std::string csv_header();
};

const char* verdict_name(CompletenessVerdict::Verdict v);

struct VerdictOptions {
  double tail_fraction = 0.5;           // examined tail of the window
  std::vector<double> eps_grid{2.0, 1.5, 1.0, 0.5};
  double c_min = 1e-6;                  // smallest admissible certificate c
  double q_nonpos_tol = 1e-9;           // "q <= 0" band for incompleteness
  int tail_samples = 200;
  OdeOptions ode;
};

/// Verdict from the Ricci oscillation function along both geodesic rays.
///   (i)  q >= c/(4 t^{2-eps}) on the examined tails -> complete
///   (ii) q <= 0 on a tail and at most one oscillation zero -> incomplete
///   (iii) otherwise undetermined.
CompletenessVerdict completeness_verdict(
    const std::function<double(double)>& q_forward,
    const std::function<double(double)>& q_backward, double window_lo,
    double window_hi, const VerdictOptions& opt = {},
    const std::string& geodesic_id = "geodesic");

}  // namespace projcomp

#endif
