#ifndef PROJCOMP_ODE_HPP
#define PROJCOMP_ODE_HPP

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace projcomp {

using Eigen::VectorXd;

struct OdeOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  double h_init = 0.0;  // 0 = choose automatically
  double h_max = 0.0;   // 0 = unlimited
  std::size_t max_steps = 4000000;
};

/// Continuous extension of one accepted Dormand-Prince 5(4) step.
/// Valid on [t0,t1] (t1 < t0 for backward integration).
class DenseSegment {
 public:
  DenseSegment() = default;
  DenseSegment(double t0, double t1, VectorXd r1, VectorXd r2, VectorXd r3,
               VectorXd r4, VectorXd r5)
      : m_t0(t0), m_t1(t1), m_r1(std::move(r1)), m_r2(std::move(r2)),
        m_r3(std::move(r3)), m_r4(std::move(r4)), m_r5(std::move(r5)) {}

  double t0() const { return m_t0; }
  double t1() const { return m_t1; }
  double h() const { return m_t1 - m_t0; }

  VectorXd eval(double t) const;
  double eval_component(double t, int i) const;
  /// dy/dt of the interpolant.
  VectorXd eval_derivative(double t) const;

 private:
  double m_t0 = 0.0, m_t1 = 0.0;
  VectorXd m_r1, m_r2, m_r3, m_r4, m_r5;
};

using OdeRhs = std::function<void(double, const VectorXd&, VectorXd&)>;

enum class ObserverSignal { kContinue, kStop };
using StepObserver = std::function<ObserverSignal(const DenseSegment&)>;

struct OdeResult {
  enum class Status { kReachedEnd, kStopped, kFailed };
  Status status = Status::kReachedEnd;
  double t = 0.0;
  VectorXd y;
  std::size_t steps = 0;
  std::string detail;

  bool ok() const { return status != Status::kFailed; }
};

class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive Dormand-Prince 5(4) with dense output. Integrates from t0 to t1
/// (either direction). The observer sees every accepted step and may stop the
/// run. A Status::kFailed result means the step size collapsed; callers that
/// treat this as exceptional should raise StepFailure themselves.
OdeResult integrate(const OdeRhs& rhs, double t0, VectorXd y0, double t1,
                    const OdeOptions& opt = {},
                    const StepObserver& observer = {});

/// Stored dense trajectory, evaluable anywhere on the integration range.
class DenseSolution {
 public:
  void append(const DenseSegment& seg) { m_segments.push_back(seg); }
  bool empty() const { return m_segments.empty(); }
  std::size_t size() const { return m_segments.size(); }
  double t0() const { return m_segments.front().t0(); }
  double t1() const { return m_segments.back().t1(); }

  const DenseSegment& segment_at(double t) const;
  const std::vector<DenseSegment>& segments() const { return m_segments; }

  VectorXd eval(double t) const { return segment_at(t).eval(t); }
  double eval_component(double t, int i) const {
    return segment_at(t).eval_component(t, i);
  }
  VectorXd eval_derivative(double t) const {
    return segment_at(t).eval_derivative(t);
  }

 private:
  std::vector<DenseSegment> m_segments;
};

OdeResult integrate_dense(const OdeRhs& rhs, double t0, VectorXd y0, double t1,
                          const OdeOptions& opt, DenseSolution& out,
                          const StepObserver& observer = {});

/// Bisection for a bracketed root of a continuous scalar function.
double bisect_zero(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-12);

/// Zeros of component `comp` of a dense solution, located by sign change on a
/// per-segment grid plus bisection.
std::vector<double> component_zeros(const DenseSolution& sol, int comp,
                                    double t_tol = 1e-10,
                                    int samples_per_segment = 8);

}  // namespace projcomp

#endif
