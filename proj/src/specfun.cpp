#include "ymflow/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ymflow::specfun {

namespace {

constexpr int kMaxIter = 20000;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

void check_domain(double nu, double x) {
    if (!(nu >= 0.0)) throw std::domain_error("bessel: nu must be >= 0");
    if (!(x >= 0.0)) throw std::domain_error("bessel: x must be >= 0");
}

// Ascending series for I_nu(x)/x^nu.  All terms positive, no cancellation.
double series_i_over_xnu(double nu, double x) {
    const double q = 0.25 * x * x;
    long double term = std::exp((long double)(-nu * std::log(2.0) - std::lgamma(nu + 1.0)));
    long double sum = term;
    for (int k = 1; k < kMaxIter; ++k) {
        term *= q / (k * (nu + k));
        sum += term;
        if (term < sum * kEps) break;
    }
    return static_cast<double>(sum);
}

// Large-argument expansion of e^{-x} I_nu(x); valid once x well exceeds nu^2.
double asymptotic_i_scaled(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    long double term = 1.0L, sum = 1.0L;
    long double prev = std::numeric_limits<long double>::max();
    for (int k = 1; k < 60; ++k) {
        term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        const long double mag = std::fabs((double)term);
        if (mag > prev) break;  // past optimal truncation
        sum += term;
        prev = mag;
        if (mag < kEps) break;
    }
    return static_cast<double>(sum) / std::sqrt(2.0 * M_PI * x);
}

double series_switch(double nu) { return std::max(30.0, nu * nu); }

// Ascending series for J_nu(x); alternating, adequate for x <= 12 in
// long double.
double series_j(double nu, double x) {
    const double q = 0.25 * x * x;
    long double term = std::exp((long double)(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0)));
    long double sum = term;
    for (int k = 1; k < kMaxIter; ++k) {
        term *= -q / (k * (nu + k));
        sum += term;
        if (std::fabs((double)term) < std::fabs((double)sum) * kEps + kTiny) break;
    }
    return static_cast<double>(sum);
}

// Steed's method (CF1 + CF2) for J_nu(x), x >= 2 or so.  Follows the
// classical QUADPACK/Numerical-Recipes organization: CF1 gives J'/J at
// order nu, downward recurrence reaches mu in [nu - nl], CF2 at order mu
// fixes the normalization through the Wronskian with Y_mu.
double steed_j(double nu, double x) {
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
    const double mu = nu - nl;

    // CF1 for f = J'_nu / J_nu and the sign of J_nu.
    double h = nu * xi;
    if (h < kTiny) h = kTiny;
    double b = xi2 * nu;
    double c = h, d = 0.0;
    int isign = 1;
    for (int i = 1; i <= kMaxIter; ++i) {
        b += xi2;
        d = b - d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b - 1.0 / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::fabs(del - 1.0) < kEps) break;
    }

    double rjl = isign * kTiny;
    double rjpl = h * rjl;
    const double rjl1 = rjl;
    double fact = nu * xi;
    for (int l = nl; l >= 1; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if (rjl == 0.0) rjl = kEps;
    const double f = rjpl / rjl;  // J'_mu / J_mu

    // CF2 (complex Lentz) for p + i q = (J' + i Y') / (J + i Y) at order mu.
    double a = 0.25 - mu * mu;
    double p = -0.5 * xi, q = 1.0;
    double br = 2.0 * x, bi = 2.0;
    fact = a * xi / (p * p + q * q);
    double cr = br + q * fact, ci = bi + p * fact;
    double den = br * br + bi * bi;
    double dr = br / den, di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for (int i = 2; i <= kMaxIter; ++i) {
        a += 2 * (i - 1);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if (std::fabs(dr) + std::fabs(di) < kTiny) dr = kTiny;
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if (std::fabs(cr) + std::fabs(ci) < kTiny) cr = kTiny;
        den = dr * dr + di * di;
        dr /= den;
        di = -di / den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (std::fabs(dlr - 1.0) + std::fabs(dli) < kEps) break;
    }
    const double gam = (p - f) / q;
    double rjmu = std::sqrt(xi2 / (M_PI * ((p - f) * gam + q)));
    rjmu = std::copysign(rjmu, rjl);
    return rjl1 * (rjmu / rjl);
}

}  // namespace

double bessel_i(BesselOrder order, double x) {
    const double nu = order.nu;
    check_domain(nu, x);
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (x <= series_switch(nu))
        return series_i_over_xnu(nu, x) * std::pow(x, nu);
    return asymptotic_i_scaled(nu, x) * std::exp(x);  // may overflow to inf for huge x
}

double bessel_i_scaled(BesselOrder order, double x) {
    const double nu = order.nu;
    check_domain(nu, x);
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (x <= series_switch(nu))
        return series_i_over_xnu(nu, x) * std::exp(nu * std::log(x) - x);
    return asymptotic_i_scaled(nu, x);
}

double bessel_i_over_xnu(BesselOrder order, double x) {
    const double nu = order.nu;
    check_domain(nu, x);
    if (x > series_switch(nu))
        throw std::domain_error("bessel_i_over_xnu: argument too large for series branch");
    return series_i_over_xnu(nu, x);
}

double bessel_j(BesselOrder order, double x) {
    const double nu = order.nu;
    check_domain(nu, x);
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (x < 12.0) return series_j(nu, x);
    return steed_j(nu, x);
}

}  // namespace ymflow::specfun
