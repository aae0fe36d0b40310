#pragma once

#include <functional>

#include "ymflow/grid.hpp"

namespace ymflow::radialheat {

using Datum = std::function<double(double)>;          // r -> value
using Forcing = std::function<double(double, double)>;  // (r, t) -> value

// Heat kernel for the radial Laplacian in n dimensions:
//   Gamma_n(r,s;t) = r^{(2-n)/2} (s^{n/2}/2t) e^{-(r^2+s^2)/4t} I_{(n-2)/2}(rs/2t),
// evaluated in log space so that rs/2t up to ~1e12 stays finite.  The r = 0
// limit is taken analytically (for n = 6 it is s^5/(64 t^3) e^{-s^2/4t}).
double kernel_gamma(int n, double r, double s, double t);

// Free evolution: (e^{(t-t0) Delta_n} datum)(r) by adaptive quadrature of
// the kernel against the datum, split at the Gaussian ridge s = r.
double heat_evolve_point(int n, const Datum& datum, double t0, double t, double r,
                         double abs_tol = 1e-9);
RadialProfile heat_evolve(const Datum& datum, double t0, double t,
                          const RadialGrid& out_grid, double abs_tol = 1e-9);

// Duhamel operator for the inhomogeneous problem with zero data at t0:
//   T_n^out[f](r,t) = int_t0^t int_0^inf Gamma_n(r,s;t-sigma) f(s,sigma) ds dsigma.
// The time integral uses the substitution sigma = t - w^2 to absorb the
// kernel concentration at sigma -> t.
double duhamel_out_point(int n, const Forcing& f, double t0, double t, double r,
                         double abs_tol = 1e-7);
RadialProfile duhamel_out(const Forcing& f, double t0, double t,
                          const RadialGrid& out_grid, double abs_tol = 1e-7);

}  // namespace ymflow::radialheat
