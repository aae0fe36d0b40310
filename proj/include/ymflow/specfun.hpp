#pragma once

#include <stdexcept>

namespace ymflow::specfun {

// Real order nu >= 0 for the Bessel evaluations below.  The radial heat
// kernel in dimension n uses nu = (n-2)/2.
struct BesselOrder {
    double nu;
    explicit BesselOrder(double v) : nu(v) {
        if (!(v >= 0.0)) throw std::domain_error("BesselOrder: nu must be >= 0");
    }
};

// Modified Bessel function of the first kind, I_nu(x), x >= 0.
double bessel_i(BesselOrder nu, double x);

// e^{-x} I_nu(x); finite for arbitrarily large x.
double bessel_i_scaled(BesselOrder nu, double x);

// I_nu(x) / x^nu, analytic through x = 0 (value 2^{-nu}/Gamma(nu+1) there).
// Well conditioned for small x; callers must keep x modest (series only).
double bessel_i_over_xnu(BesselOrder nu, double x);

// Bessel function of the first kind, J_nu(x), x >= 0.
double bessel_j(BesselOrder nu, double x);

}  // namespace ymflow::specfun
