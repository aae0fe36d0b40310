#include "ymflow/radialheat.hpp"

#include <cmath>

#include "ymflow/quadrature.hpp"
#include "ymflow/specfun.hpp"

namespace ymflow::radialheat {

namespace {

// Gaussian half-width beyond which e^{-d^2/4t} < 2e-20 of the peak.
constexpr double kGaussCut = 13.5;

double kernel_order(int n) { return 0.5 * (n - 2); }

}  // namespace

double kernel_gamma(int n, double r, double s, double t) {
    if (n < 3) throw std::domain_error("kernel_gamma: n must be >= 3");
    if (!(t > 0.0)) throw std::domain_error("kernel_gamma: t must be > 0");
    if (!(s > 0.0)) throw std::domain_error("kernel_gamma: s must be > 0");
    if (!(r >= 0.0)) throw std::domain_error("kernel_gamma: r must be >= 0");
    const double nu = kernel_order(n);
    const double xi = r * s / (2.0 * t);
    if (xi <= 30.0) {
        // I_nu(xi) = xi^nu * g(xi); the r^{-nu} prefactor cancels xi^nu's
        // r-power exactly, so r = 0 needs no special case.
        const double g = specfun::bessel_i_over_xnu(specfun::BesselOrder(nu), xi);
        const double logpre = (n - 1) * std::log(s) - (nu + 1.0) * std::log(2.0 * t)
                              - (r * r + s * s) / (4.0 * t);
        return std::exp(logpre) * g;
    }
    const double iscaled = specfun::bessel_i_scaled(specfun::BesselOrder(nu), xi);
    const double logval = -nu * std::log(r) + 0.5 * n * std::log(s)
                          - std::log(2.0 * t) - (r - s) * (r - s) / (4.0 * t)
                          + std::log(iscaled);
    return std::exp(logval);
}

double heat_evolve_point(int n, const Datum& datum, double t0, double t, double r,
                         double abs_tol) {
    if (!(t > t0)) throw std::domain_error("heat_evolve: need t > t0");
    const double dt = t - t0;
    const double half = kGaussCut * std::sqrt(dt);
    const double lo = std::max(0.0, r - half);
    const double hi = r + half;
    QuadOptions opt;
    opt.abs_tol = abs_tol;
    opt.rel_tol = 1e-9;
    auto integrand = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double u0 = datum(s);
        return u0 == 0.0 ? 0.0 : kernel_gamma(n, r, s, dt) * u0;
    };
    return integrate_adaptive(integrand, lo, hi, opt, {r}).value;
}

RadialProfile heat_evolve(const Datum& datum, double t0, double t,
                          const RadialGrid& out_grid, double abs_tol) {
    out_grid.validate();
    RadialProfile p(out_grid, t);
    for (int i = 0; i < out_grid.size(); ++i)
        p.values[i] = heat_evolve_point(out_grid.dimension, datum, t0, t,
                                        out_grid.nodes[i], abs_tol);
    return p;
}

double duhamel_out_point(int n, const Forcing& f, double t0, double t, double r,
                         double abs_tol) {
    if (!(t > t0)) throw std::domain_error("duhamel_out: need t > t0");
    const double W = std::sqrt(t - t0);
    QuadOptions outer;
    outer.abs_tol = 0.5 * abs_tol;
    outer.rel_tol = 1e-8;
    auto outer_integrand = [&](double w) {
        if (w <= 0.0) return 0.0;
        const double sigma = t - w * w;
        const double inner_tol = abs_tol / (4.0 * W * w);
        auto datum = [&](double s) { return f(s, sigma); };
        const double inner = heat_evolve_point(n, datum, 0.0, w * w, r, inner_tol);
        return 2.0 * w * inner;
    };
    return integrate_adaptive(outer_integrand, 0.0, W, outer).value;
}

RadialProfile duhamel_out(const Forcing& f, double t0, double t,
                          const RadialGrid& out_grid, double abs_tol) {
    out_grid.validate();
    RadialProfile p(out_grid, t);
    for (int i = 0; i < out_grid.size(); ++i)
        p.values[i] = duhamel_out_point(out_grid.dimension, f, t0, t,
                                        out_grid.nodes[i], abs_tol);
    return p;
}

}  // namespace ymflow::radialheat
