#include "projcomp/bessel.hpp"

#include <cmath>
#include <stdexcept>

#include "projcomp/ode.hpp"

namespace projcomp {

namespace {

constexpr double kSeriesAsymptoticSplit = 20.0;

double bessel_j_series(double nu, double x) {
  // J_nu(x) = sum_k (-1)^k (x/2)^{nu+2k} / (k! Gamma(nu+k+1)).
  // Terms by recurrence with compensated summation; the alternating series
  // cancels heavily near the asymptotic split.
  const double hx = 0.5 * x;
  const double hx2 = hx * hx;
  double term = std::exp(nu * std::log(hx) - std::lgamma(nu + 1.0));
  double sum = 0.0, comp = 0.0;
  for (int k = 0; k < 400; ++k) {
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    double next = -term * hx2 / ((k + 1.0) * (nu + k + 1.0));
    if (std::abs(next) < 1e-20 * (std::abs(sum) + 1e-300) && k > hx) break;
    term = next;
  }
  return sum;
}

double bessel_j_asymptotic(double nu, double x) {
  // Hankel expansion: J_nu(x) ~ sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
  // chi = x - nu pi/2 - pi/4. Terms summed until they stop decreasing.
  const double mu = 4.0 * nu * nu;
  const double ix8 = 1.0 / (8.0 * x);
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = std::abs(term);
  for (int k = 1; k < 60; ++k) {
    double f = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
    term *= f * ix8 / k;
    double at = std::abs(term);
    if (at > prev) break;  // divergence point of the asymptotic series
    prev = at;
    if (k % 4 == 1) q += term;
    else if (k % 4 == 2) p -= term;
    else if (k % 4 == 3) q -= term;
    else p += term;
    if (at < 1e-18) break;
  }
  const double chi = x - nu * M_PI_2 - M_PI_4;
  return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(double nu, double x) {
  if (nu < 0.0 || x < 0.0)
    throw std::invalid_argument("bessel_j: requires nu >= 0 and x >= 0");
  if (x == 0.0) return (nu == 0.0) ? 1.0 : 0.0;
  if (x < kSeriesAsymptoticSplit) return bessel_j_series(nu, x);
  return bessel_j_asymptotic(nu, x);
}

double bessel_j_zero(double nu, int k) {
  if (k < 1) throw std::invalid_argument("bessel_j_zero: k >= 1 required");
  // McMahon's expansion for the k-th zero.
  const double mu = 4.0 * nu * nu;
  const double beta = (k + 0.5 * nu - 0.25) * M_PI;
  double guess = beta - (mu - 1.0) / (8.0 * beta) -
                 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) /
                     (3.0 * std::pow(8.0 * beta, 3));
  // Small k with larger nu: McMahon can be loose; widen bracket until the
  // sign changes.
  double lo = std::max(guess - 0.5, 1e-8), hi = guess + 0.5;
  auto f = [&](double x) { return bessel_j(nu, x); };
  double flo = f(lo), fhi = f(hi);
  for (int widen = 0; widen < 40 && flo * fhi > 0.0; ++widen) {
    lo = std::max(lo - 0.25, 1e-8);
    hi += 0.25;
    flo = f(lo);
    fhi = f(hi);
  }
  if (flo * fhi > 0.0)
    throw std::runtime_error("bessel_j_zero: failed to bracket zero");
  double z = bisect_zero(f, lo, hi, 1e-13);
  return z;
}

}  // namespace projcomp
