#ifndef PROJCOMP_BESSEL_HPP
#define PROJCOMP_BESSEL_HPP

#include <vector>

namespace projcomp {

/// Bessel function of the first kind J_nu(x), nu >= 0, x >= 0.
/// Power series below x = 20, Hankel asymptotic expansion above.
double bessel_j(double nu, double x);

/// k-th positive zero of J_nu (k >= 1). McMahon expansion seeds a bracketed
/// bisection on bessel_j.
double bessel_j_zero(double nu, int k);

}  // namespace projcomp

#endif
