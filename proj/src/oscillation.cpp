#include "projcomp/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "projcomp/bessel.hpp"
#include "projcomp/csv.hpp"

namespace projcomp {

namespace {

void check_sturm_separation(const std::vector<double>& z0,
                            const std::vector<double>& z1) {
  // Between consecutive zeros of y0 lies exactly one zero of y1.
  for (std::size_t i = 0; i + 1 < z0.size(); ++i) {
    int count = 0;
    for (double z : z1)
      if (z > z0[i] && z < z0[i + 1]) ++count;
    if (count != 1)
      throw std::logic_error(
          "Sturm separation violated: " + std::to_string(count) +
          " zeros of y1 between consecutive zeros of y0");
  }
}

}  // namespace

OscillationSolution solve_oscillation(const std::function<double(double)>& q,
                                      double t0, double t1,
                                      const OdeOptions& opt) {
  OscillationSolution out;
  out.t0 = t0;
  out.t1 = t1;
  OdeRhs rhs = [&q](double t, const VectorXd& y, VectorXd& dy) {
    dy.resize(4);
    const double qt = q(t);
    dy[0] = y[1];
    dy[1] = -qt * y[0];
    dy[2] = y[3];
    dy[3] = -qt * y[2];
  };
  VectorXd y0(4);
  y0 << 1.0, 0.0, 0.0, 1.0;
  OdeResult res = integrate_dense(
      rhs, t0, y0, t1, opt, out.sol, [&](const DenseSegment& seg) {
        VectorXd ye = seg.eval(seg.t1());
        double w = ye[0] * ye[3] - ye[2] * ye[1];
        out.wronskian_drift = std::max(out.wronskian_drift, std::abs(w - 1.0));
        return ObserverSignal::kContinue;
      });
  if (!res.ok()) throw StepFailure("solve_oscillation: " + res.detail);
  out.zeros_y0 = component_zeros(out.sol, 0);
  out.zeros_y1 = component_zeros(out.sol, 2);
  check_sturm_separation(out.zeros_y0, out.zeros_y1);
  check_sturm_separation(out.zeros_y1, out.zeros_y0);
  return out;
}

ScalarSolution solve_oscillation_single(const std::function<double(double)>& q,
                                        double t0, double t1, double y_init,
                                        double dy_init, const OdeOptions& opt) {
  ScalarSolution out;
  OdeRhs rhs = [&q](double t, const VectorXd& y, VectorXd& dy) {
    dy.resize(2);
    dy[0] = y[1];
    dy[1] = -q(t) * y[0];
  };
  VectorXd y0(2);
  y0 << y_init, dy_init;
  OdeResult res = integrate_dense(rhs, t0, y0, t1, opt, out.sol);
  if (!res.ok()) throw StepFailure("solve_oscillation_single: " + res.detail);
  out.zeros = component_zeros(out.sol, 0);
  return out;
}

ProjectiveParameter::ProjectiveParameter(const OscillationSolution& sol,
                                         double a, double b, double c,
                                         double d)
    : m_sol(&sol), m_a(a), m_b(b), m_c(c), m_d(d) {
  if (a * d - b * c == 0.0)
    throw DegenerateMoebius("projective_parameter: ad - bc = 0");
  // The denominator c y1 + d y0 is itself a solution; find its zeros on the
  // stored dense output.
  for (const auto& seg : sol.sol.segments()) {
    auto den = [&](double t) {
      return m_c * seg.eval_component(t, 2) + m_d * seg.eval_component(t, 0);
    };
    const int kSamples = 8;
    double prev_t = seg.t0(), prev_v = den(prev_t);
    for (int s = 1; s <= kSamples; ++s) {
      double t = seg.t0() + (seg.t1() - seg.t0()) * s / kSamples;
      double v = den(t);
      if (prev_v * v < 0.0) {
        double z = bisect_zero(den, std::min(prev_t, t), std::max(prev_t, t),
                               1e-12);
        if (m_poles.empty() || std::abs(z - m_poles.back()) > 1e-10)
          m_poles.push_back(z);
      }
      prev_t = t;
      prev_v = v;
    }
  }
}

double ProjectiveParameter::operator()(double t) const {
  double y0 = m_sol->y0(t), y1 = m_sol->y1(t);
  return (m_a * y1 + m_b * y0) / (m_c * y1 + m_d * y0);
}

int ProjectiveParameter::winding(double t) const {
  int count = 0;
  const bool fwd = m_sol->t1 >= m_sol->t0;
  for (double p : m_poles)
    if (fwd ? (p <= t) : (p >= t)) ++count;
  return count;
}

std::vector<double> bessel_comparison_zeros(double c, double eps, double t_lo,
                                            double t_hi) {
  if (c <= 0.0 || eps <= 0.0)
    throw std::invalid_argument("bessel_comparison_zeros: c, eps > 0 required");
  if (t_lo <= 0.0)
    throw std::invalid_argument("bessel_comparison_zeros: t > 0 required");
  const double nu = 1.0 / eps;
  std::vector<double> zeros;
  for (int k = 1;; ++k) {
    double j = bessel_j_zero(nu, k);
    // (sqrt(c)/eps) t^{eps/2} = j  =>  t = (eps j / sqrt(c))^{2/eps}
    double t = std::pow(eps * j / std::sqrt(c), 2.0 / eps);
    if (t > t_hi) break;
    if (t >= t_lo) zeros.push_back(t);
    if (k > 100000)
      throw std::runtime_error("bessel_comparison_zeros: runaway zero count");
  }
  return zeros;
}

const char* verdict_name(CompletenessVerdict::Verdict v) {
  switch (v) {
    case CompletenessVerdict::Verdict::kComplete: return "complete";
    case CompletenessVerdict::Verdict::kIncomplete: return "incomplete";
    case CompletenessVerdict::Verdict::kUndetermined: return "undetermined";
  }
  return "?";
}

std::string CompletenessVerdict::csv_header() {
  return "id,window,zeros_fwd,zeros_bwd,cert_c,cert_eps,verdict";
}

std::string CompletenessVerdict::csv_row() const {
  std::string cert_c = certificate ? format_double(certificate->c, 12) : "";
  std::string cert_e = certificate ? format_double(certificate->eps, 12) : "";
  return geodesic_id + "," + format_double(window_lo, 12) + ":" +
         format_double(window_hi, 12) + "," + std::to_string(zeros_forward) +
         "," + std::to_string(zeros_backward) + "," + cert_c + "," + cert_e +
         "," + verdict_name(verdict);
}

namespace {

struct RayAnalysis {
  int zero_count = 0;
  bool q_nonpositive_tail = false;
  std::optional<ComparisonCertificate> certificate;
};

RayAnalysis analyze_ray(const std::function<double(double)>& q,
                        double window_lo, double window_hi,
                        const VerdictOptions& opt) {
  RayAnalysis ray;
  OscillationSolution osc = solve_oscillation(q, window_lo, window_hi, opt.ode);
  ray.zero_count = static_cast<int>(
      std::max(osc.zeros_y0.size(), osc.zeros_y1.size()));

  const double tail_lo =
      window_lo + (1.0 - opt.tail_fraction) * (window_hi - window_lo);
  const double tail_hi = window_hi;

  std::vector<double> qv(opt.tail_samples);
  bool nonpos = true;
  for (int i = 0; i < opt.tail_samples; ++i) {
    double t = tail_lo + (tail_hi - tail_lo) * i / (opt.tail_samples - 1.0);
    qv[i] = q(t);
    nonpos = nonpos && qv[i] <= opt.q_nonpos_tol;
  }
  ray.q_nonpositive_tail = nonpos;

  if (tail_lo > 0.0) {
    for (double eps : opt.eps_grid) {
      double c_best = std::numeric_limits<double>::max();
      double c_worst = 0.0;
      int argmin = 0;
      for (int i = 0; i < opt.tail_samples; ++i) {
        double t =
            tail_lo + (tail_hi - tail_lo) * i / (opt.tail_samples - 1.0);
        double m = 4.0 * qv[i] * std::pow(t, 2.0 - eps);
        if (m < c_best) {
          c_best = m;
          argmin = i;
        }
        c_worst = std::max(c_worst, m);
      }
      // Tail-monotonicity: a bound whose scaled margin is still decaying at
      // the window end does not extrapolate; try a smaller eps instead. A
      // near-constant margin always qualifies.
      bool tail_ok = argmin < static_cast<int>(0.9 * opt.tail_samples) ||
                     c_worst - c_best < 1e-6 * std::abs(c_best);
      if (c_best > opt.c_min && tail_ok) {
        ray.certificate = ComparisonCertificate{c_best, eps, tail_lo, tail_hi};
        break;
      }
    }
  }
  return ray;
}

}  // namespace

CompletenessVerdict completeness_verdict(
    const std::function<double(double)>& q_forward,
    const std::function<double(double)>& q_backward, double window_lo,
    double window_hi, const VerdictOptions& opt,
    const std::string& geodesic_id) {
  CompletenessVerdict out;
  out.geodesic_id = geodesic_id;
  out.window_lo = window_lo;
  out.window_hi = window_hi;

  RayAnalysis fwd = analyze_ray(q_forward, window_lo, window_hi, opt);
  RayAnalysis bwd = analyze_ray(q_backward, window_lo, window_hi, opt);
  out.zeros_forward = fwd.zero_count;
  out.zeros_backward = bwd.zero_count;

  if (fwd.certificate && bwd.certificate) {
    // Report the weaker of the two bounds.
    out.certificate = (fwd.certificate->c < bwd.certificate->c)
                          ? fwd.certificate
                          : bwd.certificate;
    out.verdict = CompletenessVerdict::Verdict::kComplete;
    return out;
  }
  if ((fwd.q_nonpositive_tail && fwd.zero_count <= 1) ||
      (bwd.q_nonpositive_tail && bwd.zero_count <= 1)) {
    // Affine-type development: the image stays in a proper subinterval.
    out.verdict = CompletenessVerdict::Verdict::kIncomplete;
    return out;
  }
  out.verdict = CompletenessVerdict::Verdict::kUndetermined;
  return out;
}

}  // namespace projcomp
