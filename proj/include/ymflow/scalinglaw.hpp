#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ymflow/profiles.hpp"

namespace ymflow::scalinglaw {

// Time axis convention for a trace: Linear stores t itself; LogOfTime
// stores L = log(2+t), which keeps doubly-exponential horizons finite.
enum class TimeScale { Linear, LogOfTime };

// Time series of the modulation state (t, log lambda, lambda_dot/lambda, tau).
struct ModulationTrace {
    TimeScale scale = TimeScale::Linear;
    std::vector<double> times;      // t, or L = log(2+t) when scale == LogOfTime
    std::vector<double> loglambda;
    std::vector<double> rate;       // d(log lambda)/dt at times (0 if unknown)
    std::vector<double> tau;        // empty until tau_of_t fills it

    void validate() const;
    void write_csv(std::ostream& os) const;  // header t,loglambda,rate,tau
    void write_csv_file(const std::string& path) const;
    double log_time(int k) const;   // log t (or log L) for envelope fits
};

enum class Regime { BlowUp, BlowDown, Oscillatory, Bounded, Inconclusive };

std::string regime_name(Regime r);

struct RegimeLabel {
    Regime regime = Regime::Inconclusive;
    double fitted_exponent = 0.0;  // measured envelope exponent (target 1-a)
    double fit_r2 = 0.0;
};

// Decay gauge Theta_*(t) = t^{-1} (log t)^{-a}.
struct ThetaStarGauge {
    double a;
    double operator()(double t) const;
};

// Left-hand side of the orthogonality condition,
//   int_0^{4R} [ (12U - 6 rho^2 U^2) Theta(lambda rho, t)
//                + 4 (lambda_dot/lambda) (1+rho^2)^{-2} ] Z rho^5 drho.
double orthogonality_lhs(double lambda, double lambda_dot,
                         const std::function<double(double, double)>& theta_at,
                         double R, double t);

// Root of the orthogonality condition in lambda_dot/lambda.  The lhs is
// affine in the rate with positive slope, so a single linear solve suffices.
double solve_orthogonality_rate(double lambda,
                                const std::function<double(double, double)>& theta_at,
                                double R, double t);

// The I_1..I_5 splitting of the Theta-part of the orthogonality integral.
// The pieces partition the exact double integral (region splits at the
// Bessel-argument scale xi = lambda rho s / 2t = 1), so their sum equals
// direct double quadrature up to tolerance.
struct IDecomposition {
    double I1, I2, I3, I4, I5;
    double sum() const { return I1 + I2 + I3 + I4 + I5; }
};
IDecomposition decompose_I(double lambda, double R, double t,
                           const profiles::Theta0Spec& theta0);

// Leading modulation rate lambda_dot/lambda at time t:
//   -(3/32) tk^{-3} int_0^inf s^5 e^{-s^2/4 tk} Theta_0(s) ds,  tk = t - t_ref.
// The Gaussian supplies the effective sqrt(t) cutoff; t_ref shifts the
// kernel-time origin (0 reproduces the global-law normalization).
double modulation_rhs(double t, const profiles::Theta0Spec& theta0, double t_ref = 0.0);

struct ModulationOptions {
    int samples_per_decade = 32;
    double loglambda_init = 0.0;
    double tau_anchor_C = 10.0;
    double t_ref = 0.0;
};

// Integrates d(log lambda)/dt = modulation_rhs over [t0, T] on a
// log-spaced time ladder (panel-wise adaptive quadrature of the smooth,
// state-independent rate) and records tau along the way.
ModulationTrace integrate_modulation(const profiles::Theta0Spec& theta0, double t0,
                                     double T, const ModulationOptions& opt = {});

// Closed-form oscillatory leading scale, in log space:
//   log lambda0 - log C_{t0} = -(3/4) L^{1-a} cos(log L),  L = log(2+t).
double lambda0_log_from_L(double L, double a);
double lambda0_log(double t, double a, double t0);  // anchored at t0

// Trace of the closed form sampled uniformly in theta = log L; stored with
// TimeScale::LogOfTime so horizons far beyond double-precision t fit.
ModulationTrace lambda0_closed_form_trace(double a, double L_lo, double L_hi,
                                          int samples);

// |quadrature - closed form| for the two eta-integral identities used by
// the global law; first entry needs t >= s^2.
std::pair<double, double> integral_identities_check(double s, double t, double t0);

// Relative residual between the iterated double integral of the law and
// its order-swapped (closed-form-inner) rearrangement.  Known jumps of the
// datum must be listed in s_breaks or the quadrature may settle on a wrong
// value without noticing.
double fubini_check(const profiles::Theta0Spec& theta0, double t0, double t);
double fubini_check(const std::function<double(double)>& theta0_fn, double t0,
                    double t, const std::vector<double>& s_breaks = {});

// tau(t) = int_t0^t lambda^{-2} ds + C t0 lambda^{-2}(t0), cumulative trapezoid.
std::vector<double> tau_of_t(const ModulationTrace& trace, double C);

RegimeLabel classify_regime(const ModulationTrace& trace, double burn_in = 0.2);

}  // namespace ymflow::scalinglaw
