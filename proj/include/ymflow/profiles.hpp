#pragma once

#include <string>
#include <vector>

#include "ymflow/grid.hpp"

namespace ymflow::profiles {

// Scale parameter of the instanton family U_lambda(r) = 2/(r^2 + lambda^2).
struct SolitonParams {
    double lambda;
    explicit SolitonParams(double l) : lambda(l) {
        if (!(l > 0.0)) throw std::domain_error("SolitonParams: lambda must be > 0");
    }
};

double soliton(const SolitonParams& p, double r);

// Dilation zero mode Z(rho) = (1+rho^2)^{-2} and the linearization
// potential V(rho) = 24 (1+rho^2)^{-2} = 12 U - 6 rho^2 U^2.
double zmode(double rho);
double potential(double rho);
double lin_potential(double rho);

// Cutoff eta_R: 1 on [0,R], 0 on [2R,inf), quintic smoothstep between.
struct CutoffSpec {
    double R;
    explicit CutoffSpec(double r) : R(r) {
        if (!(r > 1.0)) throw std::domain_error("CutoffSpec: R must be > 1");
    }
    static CutoffSpec at_time(double t);  // run-time policy R(t) = (log t)^{1/100}... clamped above 1
};

double cutoff(const CutoffSpec& spec, double rho);

// Run-time inner radius policy R(t) = (log t)^{1/100}.
double cutoff_radius(double t);

// Parametric initial perturbations Theta_0.
enum class Theta0Family { PowerLog, OscillatoryExplicit, CustomTable };

struct Theta0Spec {
    Theta0Family family = Theta0Family::PowerLog;
    double a = 0.5;            // envelope exponent, in (0,1)
    int sign = +1;             // PowerLog only
    double amplitude = 1.0;
    std::string table_path;    // CustomTable only

    void validate() const;
};

double theta0(const Theta0Spec& spec, double r);

// Loads and validates a CustomTable spec's r,value table (CSV, header row).
// Enforces the r^{-2}(log r)^{-a} envelope on the tail at load time.
struct Theta0Table {
    std::vector<double> r, v;
    double a = 0.5;
    static Theta0Table load(const std::string& path, double a, double amplitude);
    double eval(double r) const;  // piecewise cubic inside, envelope decay beyond
};

// Full nonlinearity N[w] at radius r around U_lambda, with
// w = theta + phi_contrib + psi (phi_contrib = eta_R lambda^{-2} phi).
double nonlinearity_N(double lambda, double theta, double phi_contrib, double psi,
                      double r);

// Linearized inner operator L[phi] = phi'' + (5/rho) phi' + lin_potential*phi
// by second-order finite differences with the rho = 0 regularity stencil.
RadialProfile inner_linear_apply(const RadialProfile& phi);

}  // namespace ymflow::profiles
