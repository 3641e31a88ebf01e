#include "projcomp/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace projcomp {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double initial_step(const OdeRhs& rhs, double t0, const VectorXd& y0,
                    double dir, double span, const OdeOptions& opt) {
  VectorXd f0(y0.size());
  rhs(t0, y0, f0);
  double dy = 0.0, y = 0.0;
  for (int i = 0; i < y0.size(); ++i) {
    double sc = opt.atol + opt.rtol * std::abs(y0[i]);
    dy = std::max(dy, std::abs(f0[i]) / sc);
    y = std::max(y, std::abs(y0[i]) / sc + 1.0);
  }
  double h = (dy > 0) ? 0.01 * y / dy : 1e-4 * span;
  h = std::min(h, 0.1 * span);
  return dir * std::max(h, 1e-10 * span);
}

}  // namespace

VectorXd DenseSegment::eval(double t) const {
  const double hh = m_t1 - m_t0;
  const double th = (t - m_t0) / hh;
  const double th1 = 1.0 - th;
  return m_r1 + th * (m_r2 + th1 * (m_r3 + th * (m_r4 + th1 * m_r5)));
}

double DenseSegment::eval_component(double t, int i) const {
  const double hh = m_t1 - m_t0;
  const double th = (t - m_t0) / hh;
  const double th1 = 1.0 - th;
  return m_r1[i] + th * (m_r2[i] + th1 * (m_r3[i] + th * (m_r4[i] + th1 * m_r5[i])));
}

VectorXd DenseSegment::eval_derivative(double t) const {
  const double hh = m_t1 - m_t0;
  const double th = (t - m_t0) / hh;
  // P(th) = r1 + th r2 + th(1-th) r3 + th^2(1-th) r4 + th^2(1-th)^2 r5
  VectorXd d = m_r2 + (1.0 - 2.0 * th) * m_r3 + th * (2.0 - 3.0 * th) * m_r4 +
               2.0 * th * (1.0 - th) * (1.0 - 2.0 * th) * m_r5;
  return d / hh;
}

const DenseSegment& DenseSolution::segment_at(double t) const {
  const bool fwd = t1() >= t0();
  std::size_t lo = 0, hi = m_segments.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    const auto& s = m_segments[mid];
    bool after = fwd ? (t > s.t1()) : (t < s.t1());
    if (after)
      lo = mid + 1;
    else
      hi = mid;
  }
  return m_segments[lo];
}

OdeResult integrate(const OdeRhs& rhs, double t0, VectorXd y0, double t1,
                    const OdeOptions& opt, const StepObserver& observer) {
  OdeResult res;
  const int n = static_cast<int>(y0.size());
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  if (span == 0.0) {
    res.t = t0;
    res.y = std::move(y0);
    return res;
  }

  VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n),
      err(n);
  double t = t0;
  VectorXd y = std::move(y0);
  double h = (opt.h_init != 0.0) ? dir * std::abs(opt.h_init)
                                 : initial_step(rhs, t0, y, dir, span, opt);
  const double hmax = (opt.h_max > 0.0) ? opt.h_max : span;
  h = dir * std::min(std::abs(h), hmax);

  rhs(t, y, k1);

  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    const double hmin = 16.0 * std::numeric_limits<double>::epsilon() *
                        std::max(std::abs(t), 1.0);
    if (std::abs(t1 - t) < hmin) {
      // remaining span below time resolution: done
      res.status = OdeResult::Status::kReachedEnd;
      res.t = t;
      res.y = y;
      res.steps = step;
      return res;
    }
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    if (std::abs(h) < hmin) {
      res.status = OdeResult::Status::kFailed;
      res.detail = "step size underflow at t=" + std::to_string(t);
      res.t = t;
      res.y = y;
      res.steps = step;
      return res;
    }
    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, y1, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err_norm = 0.0;
    for (int i = 0; i < n; ++i) {
      double sc =
          opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      double e = err[i] / sc;
      err_norm += e * e;
    }
    err_norm = std::sqrt(err_norm / n);
    if (!std::isfinite(err_norm)) err_norm = 1e10;

    if (err_norm <= 1.0) {
      if (observer) {
        VectorXd ydiff = y1 - y;
        VectorXd bspl = h * k1 - ydiff;
        VectorXd r4v = ydiff - h * k7 - bspl;
        VectorXd r5v = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 +
                            d7 * k7);
        DenseSegment seg(t, t + h, y, std::move(ydiff), std::move(bspl),
                         std::move(r4v), std::move(r5v));
        if (observer(seg) == ObserverSignal::kStop) {
          res.status = OdeResult::Status::kStopped;
          res.t = t + h;
          res.y = y1;
          res.steps = step + 1;
          return res;
        }
      }
      t += h;
      y.swap(y1);
      k1.swap(k7);  // FSAL
      res.steps = step + 1;
      if (dir * (t - t1) >= 0.0) {
        res.status = OdeResult::Status::kReachedEnd;
        res.t = t;
        res.y = y;
        return res;
      }
      double fac = 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2);
      h *= std::clamp(fac, 0.2, 5.0);
      if (std::abs(h) > hmax) h = dir * hmax;
    } else {
      double fac = 0.9 * std::pow(err_norm, -0.2);
      h *= std::clamp(fac, 0.1, 0.9);
      // k1 still holds f(t, y) after a rejected step
    }
  }
  res.status = OdeResult::Status::kFailed;
  res.detail = "max step count exceeded";
  res.t = t;
  res.y = y;
  return res;
}

OdeResult integrate_dense(const OdeRhs& rhs, double t0, VectorXd y0, double t1,
                          const OdeOptions& opt, DenseSolution& out,
                          const StepObserver& observer) {
  return integrate(
      rhs, t0, std::move(y0), t1, opt,
      [&](const DenseSegment& seg) {
        out.append(seg);
        return observer ? observer(seg) : ObserverSignal::kContinue;
      });
}

double bisect_zero(const std::function<double(double)>& f, double a, double b,
                   double tol) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0)
    throw std::invalid_argument("bisect_zero: endpoints do not bracket a root");
  for (int it = 0; it < 200 && std::abs(b - a) > tol; ++it) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  (void)fb;
  return 0.5 * (a + b);
}

std::vector<double> component_zeros(const DenseSolution& sol, int comp,
                                    double t_tol, int samples_per_segment) {
  std::vector<double> zeros;
  for (const auto& seg : sol.segments()) {
    double ta = seg.t0(), tb = seg.t1();
    double prev_t = ta;
    double prev_v = seg.eval_component(ta, comp);
    for (int s = 1; s <= samples_per_segment; ++s) {
      double t = ta + (tb - ta) * s / samples_per_segment;
      double v = seg.eval_component(t, comp);
      if (prev_v == 0.0) {
        if (zeros.empty() || std::abs(prev_t - zeros.back()) > t_tol)
          zeros.push_back(prev_t);
      } else if (prev_v * v < 0.0) {
        double z = bisect_zero(
            [&](double tt) { return seg.eval_component(tt, comp); },
            std::min(prev_t, t), std::max(prev_t, t), t_tol);
        if (zeros.empty() || std::abs(z - zeros.back()) > t_tol)
          zeros.push_back(z);
      }
      prev_t = t;
      prev_v = v;
    }
  }
  return zeros;
}

}  // namespace projcomp
