#include "ymflow/scalinglaw.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "ymflow/quadrature.hpp"
#include "ymflow/radialheat.hpp"
#include "ymflow/specfun.hpp"

namespace ymflow::scalinglaw {

namespace {

constexpr double kGaussCutX = 60.0;  // e^{-x^2/4} dead beyond this many sqrt(t)

QuadOptions tight() {
    QuadOptions o;
    o.abs_tol = 1e-16;
    o.rel_tol = 1e-10;
    o.max_panels = 8000;
    return o;
}

// I_2(xi) - xi^2/8, the post-leading part of the small-argument series.
double i2_remainder(double xi) {
    // I_2(xi) = sum_k q^{k+1} / (k! (k+2)!);  k=0 gives q/2 = xi^2/8.
    const double q = 0.25 * xi * xi;
    double term = q * q / 6.0;  // k = 1
    double sum = term;
    for (int k = 2; k < 60; ++k) {
        term *= q / (k * (k + 2));
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

struct LinearFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit f;
    const size_t n = x.size();
    if (n < 2) return f;
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

}  // namespace

void ModulationTrace::validate() const {
    if (times.size() != loglambda.size() || times.size() != rate.size())
        throw std::invalid_argument("ModulationTrace: ragged columns");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("ModulationTrace: times must be strictly increasing");
    if (!tau.empty()) {
        if (tau.size() != times.size())
            throw std::invalid_argument("ModulationTrace: tau length mismatch");
        for (size_t i = 1; i < tau.size(); ++i)
            if (!(tau[i] > tau[i - 1]))
                throw std::invalid_argument("ModulationTrace: tau must be strictly increasing");
    }
}

double ModulationTrace::log_time(int k) const { return std::log(times[k]); }

void ModulationTrace::write_csv(std::ostream& os) const {
    os << "t,loglambda,rate,tau\n";
    for (size_t i = 0; i < times.size(); ++i) {
        const double tv = tau.empty() ? 0.0 : tau[i];
        os << format_full(times[i]) << ',' << format_full(loglambda[i]) << ','
           << format_full(rate[i]) << ',' << format_full(tv) << '\n';
    }
}

void ModulationTrace::write_csv_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_csv(os);
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::BlowUp: return "BlowUp";
        case Regime::BlowDown: return "BlowDown";
        case Regime::Oscillatory: return "Oscillatory";
        case Regime::Bounded: return "Bounded";
        case Regime::Inconclusive: return "Inconclusive";
    }
    return "?";
}

double ThetaStarGauge::operator()(double t) const {
    if (!(t >= 3.0)) throw std::domain_error("ThetaStarGauge: t must be >= 3");
    return std::pow(std::log(t), -a) / t;
}

double orthogonality_lhs(double lambda, double lambda_dot,
                         const std::function<double(double, double)>& theta_at,
                         double R, double t) {
    if (!(lambda > 0.0)) throw std::domain_error("orthogonality_lhs: lambda must be > 0");
    if (!(R > 1.0)) throw std::domain_error("orthogonality_lhs: R must be > 1");
    const double rate = lambda_dot / lambda;
    auto integrand = [&](double rho) {
        const double Z = profiles::zmode(rho);
        const double term = profiles::lin_potential(rho) * theta_at(lambda * rho, t)
                            + 4.0 * rate * Z;
        return term * Z * std::pow(rho, 5);
    };
    // Scale-aware tolerance: for late-time backgrounds the integral can be
    // arbitrarily small in absolute terms and must still be resolved, while
    // near the solved rate the two terms cancel and only an absolute target
    // tied to the integrand's magnitude is certifiable.
    QuadOptions rough;
    rough.abs_tol = 1e-300;
    rough.rel_tol = 1e-4;
    rough.max_panels = 8000;
    rough.throw_on_failure = false;
    const double scale = integrate_adaptive(
        [&](double rho) { return std::fabs(integrand(rho)); }, 0.0, 4.0 * R,
        rough).value;
    QuadOptions opt;
    opt.abs_tol = std::max(1e-300, 1e-12 * scale);
    opt.rel_tol = 1e-10;
    opt.max_panels = 8000;
    return integrate_adaptive(integrand, 0.0, 4.0 * R, opt).value;
}

double solve_orthogonality_rate(double lambda,
                                const std::function<double(double, double)>& theta_at,
                                double R, double t) {
    const double at_zero = orthogonality_lhs(lambda, 0.0, theta_at, R, t);
    auto slope_integrand = [](double rho) {
        const double Z = profiles::zmode(rho);
        return 4.0 * Z * Z * std::pow(rho, 5);
    };
    const double slope = integrate_adaptive(slope_integrand, 0.0, 4.0 * R, tight()).value;
    return -at_zero / slope;
}

IDecomposition decompose_I(double lambda, double R, double t,
                           const profiles::Theta0Spec& spec) {
    spec.validate();
    if (!(lambda > 0.0) || !(R > 1.0) || !(t > 0.0))
        throw std::invalid_argument("decompose_I: bad parameters");
    if (!(lambda * R <= std::sqrt(t) / 100.0))
        throw std::invalid_argument("decompose_I: requires lambda R <= sqrt(t)/100");

    const double sqt = std::sqrt(t);
    const double s_cut = kGaussCutX * sqt;
    const double s_split = t / (2.0 * lambda * R);
    auto th0 = [&](double s) { return profiles::theta0(spec, s); };
    auto S = [&](double s) {
        return std::pow(s, 5) / (64.0 * t * t * t) * std::exp(-s * s / (4.0 * t)) * th0(s);
    };
    auto VZr5 = [&](double rho) {
        return profiles::potential(rho) * profiles::zmode(rho) * std::pow(rho, 5)
               * std::exp(-lambda * lambda * rho * rho / (4.0 * t));
    };
    QuadOptions opt = tight();
    opt.rel_tol = 1e-9;

    const double P = integrate_adaptive(VZr5, 0.0, 4.0 * R, opt).value;

    IDecomposition out{};
    out.I1 = P * integrate_adaptive(S, 0.0, sqt, opt, {2.0 * sqt}).value;

    const double i2_hi = std::min(s_split, s_cut);
    out.I2 = (i2_hi > sqt)
                 ? P * integrate_adaptive(S, sqt, i2_hi, opt, {2.0 * sqt}).value
                 : 0.0;

    if (s_split < s_cut) {
        auto inner_P = [&](double s) {
            const double hi = std::min(4.0 * R, 2.0 * t / (lambda * s));
            return integrate_adaptive(VZr5, 0.0, hi, opt).value;
        };
        out.I3 = integrate_adaptive([&](double s) { return S(s) * inner_P(s); },
                                    s_split, s_cut, opt).value;
    } else {
        out.I3 = 0.0;
    }

    {
        // xi > 1 region, exact kernel (large-argument Bessel branch inside).
        const double s_hi = 4.0 * R * lambda + kGaussCutX * sqt;
        if (s_split < s_hi) {
            auto inner = [&](double s) {
                const double rho_lo = 2.0 * t / (lambda * s);
                if (rho_lo >= 4.0 * R) return 0.0;
                auto f = [&](double rho) {
                    return profiles::potential(rho) * profiles::zmode(rho)
                           * std::pow(rho, 5)
                           * radialheat::kernel_gamma(6, lambda * rho, s, t);
                };
                QuadOptions io = opt;
                io.throw_on_failure = false;
                return integrate_adaptive(f, rho_lo, 4.0 * R, io).value;
            };
            out.I4 = integrate_adaptive([&](double s) { return th0(s) * inner(s); },
                                        s_split, s_hi, opt).value;
        } else {
            out.I4 = 0.0;
        }
    }

    {
        // Post-leading Bessel series over the xi <= 1 region.
        auto Q = [&](double rho) {
            if (rho <= 0.0) return 0.0;
            const double s_hi = std::min(2.0 * t / (lambda * rho), s_cut);
            auto f = [&](double s) {
                const double xi = lambda * rho * s / (2.0 * t);
                const double pre = std::pow(s, 3) / (2.0 * t * lambda * lambda * rho * rho)
                                   * std::exp(-s * s / (4.0 * t));
                return pre * i2_remainder(xi) * th0(s);
            };
            QuadOptions io = opt;
            io.abs_tol = 1e-18;
            return integrate_adaptive(f, 0.0, s_hi, io, {2.0 * sqt}).value;
        };
        out.I5 = integrate_adaptive([&](double rho) { return VZr5(rho) * Q(rho); },
                                    0.0, 4.0 * R, opt).value;
    }
    return out;
}

double modulation_rhs(double t, const profiles::Theta0Spec& spec, double t_ref) {
    spec.validate();
    const double tk = t - t_ref;
    if (!(tk > 0.0)) throw std::domain_error("modulation_rhs: need t > t_ref");
    const double sq = std::sqrt(tk);
    auto integrand = [&](double x) {
        return std::pow(x, 5) * std::exp(-0.25 * x * x) * profiles::theta0(spec, sq * x);
    };
    QuadOptions opt;
    opt.abs_tol = 1e-18;
    opt.rel_tol = 1e-10;
    opt.max_panels = 8000;
    const double integral = integrate_adaptive(integrand, 0.0, kGaussCutX, opt, {2.0}).value;
    return -(3.0 / 32.0) * integral;
}

ModulationTrace integrate_modulation(const profiles::Theta0Spec& spec, double t0,
                                     double T, const ModulationOptions& mopt) {
    if (!(T > t0) || !(t0 > 0.0))
        throw std::invalid_argument("integrate_modulation: need T > t0 > 0");
    const double decades = std::log10(T / t0);
    const int steps = std::max(2, static_cast<int>(std::ceil(decades * mopt.samples_per_decade)));
    ModulationTrace tr;
    tr.times.reserve(steps + 1);
    tr.loglambda.reserve(steps + 1);
    tr.rate.reserve(steps + 1);
    double y = mopt.loglambda_init;
    tr.times.push_back(t0);
    tr.loglambda.push_back(y);
    tr.rate.push_back(modulation_rhs(t0, spec, mopt.t_ref));
    QuadOptions opt;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-9;
    const double lg0 = std::log(t0), lg1 = std::log(T);
    for (int k = 1; k <= steps; ++k) {
        const double ya = lg0 + (lg1 - lg0) * (k - 1) / steps;
        const double yb = lg0 + (lg1 - lg0) * k / steps;
        auto g = [&](double u) {
            const double eta = std::exp(u);
            return modulation_rhs(eta, spec, mopt.t_ref) * eta;
        };
        y += integrate_adaptive(g, ya, yb, opt).value;
        const double tk = std::exp(yb);
        tr.times.push_back(tk);
        tr.loglambda.push_back(y);
        tr.rate.push_back(modulation_rhs(tk, spec, mopt.t_ref));
    }
    tr.tau = tau_of_t(tr, mopt.tau_anchor_C);
    return tr;
}

double lambda0_log_from_L(double L, double a) {
    if (!(L > 0.0)) throw std::domain_error("lambda0_log_from_L: need L > 0");
    return -0.75 * std::pow(L, 1.0 - a) * std::cos(std::log(L));
}

double lambda0_log(double t, double a, double t0) {
    return lambda0_log_from_L(std::log(2.0 + t), a)
           - lambda0_log_from_L(std::log(2.0 + t0), a);
}

ModulationTrace lambda0_closed_form_trace(double a, double L_lo, double L_hi,
                                          int samples) {
    if (!(L_hi > L_lo) || !(L_lo > 1.0) || samples < 2)
        throw std::invalid_argument("lambda0_closed_form_trace: bad window");
    ModulationTrace tr;
    tr.scale = TimeScale::LogOfTime;
    const double th0 = std::log(L_lo), th1 = std::log(L_hi);
    for (int i = 0; i < samples; ++i) {
        const double th = th0 + (th1 - th0) * i / (samples - 1);
        const double L = std::exp(th);
        tr.times.push_back(L);
        tr.loglambda.push_back(lambda0_log_from_L(L, a));
        tr.rate.push_back(0.0);
    }
    return tr;
}

namespace {

double eta_integral_quad(double s, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    auto g = [&](double u) {
        const double eta = std::exp(u);
        return std::exp(-s * s / (4.0 * eta)) / (eta * eta);  // eta^{-3} * deta jacobian eta
    };
    QuadOptions opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = 1e-13;
    opt.max_panels = 8000;
    return integrate_adaptive(g, std::log(lo), std::log(hi), opt).value;
}

double eta_identity_from_s2(double s, double t) {
    return 4.0 * (std::exp(-s * s / (4.0 * t)) * (s * s / t + 4.0) - 5.0 * std::exp(-0.25))
           / std::pow(s, 4);
}

double eta_identity_from_t0(double s, double t0, double t) {
    return 4.0 * (std::exp(-s * s / (4.0 * t)) * (s * s / t + 4.0)
                  - std::exp(-s * s / (4.0 * t0)) * (s * s / t0 + 4.0))
           / std::pow(s, 4);
}

}  // namespace

std::pair<double, double> integral_identities_check(double s, double t, double t0) {
    if (!(s > 0.0) || !(t0 > 0.0) || !(t >= t0))
        throw std::invalid_argument("integral_identities_check: bad arguments");
    if (!(t >= s * s))
        throw std::invalid_argument("integral_identities_check: need t >= s^2");
    const double q1 = eta_integral_quad(s, s * s, t);
    const double q2 = eta_integral_quad(s, t0, t);
    return {std::fabs(q1 - eta_identity_from_s2(s, t)),
            std::fabs(q2 - eta_identity_from_t0(s, t0, t))};
}

double fubini_check(const std::function<double(double)>& th0, double t0, double t,
                    const std::vector<double>& s_breaks) {
    if (!(t > t0) || !(t0 > 0.0))
        throw std::invalid_argument("fubini_check: need t > t0 > 0");
    QuadOptions inner;
    inner.abs_tol = 1e-300;
    inner.rel_tol = 1e-12;
    inner.max_panels = 8000;
    auto bulk = [&](double eta) {
        auto f = [&](double s) {
            return std::pow(s, 5) * std::exp(-s * s / (4.0 * eta)) * th0(s);
        };
        return integrate_adaptive(f, 0.0, std::sqrt(eta), inner, s_breaks).value
               / (eta * eta * eta);
    };
    QuadOptions outer;
    outer.abs_tol = 1e-300;
    // the inner quadrature leaves ~1e-12 relative noise on bulk(), so the
    // outer pass cannot certify much below 1e-10
    outer.rel_tol = 1e-10;
    outer.max_panels = 8000;
    const double lhs = integrate_adaptive(
        [&](double u) { return bulk(std::exp(u)) * std::exp(u); },
        std::log(t0), std::log(t), outer).value;

    const double sq0 = std::sqrt(t0), sq1 = std::sqrt(t);
    const double rhs =
        integrate_adaptive(
            [&](double s) {
                return std::pow(s, 5) * th0(s) * eta_identity_from_t0(s, t0, t);
            },
            0.0, sq0, inner, s_breaks).value
        + integrate_adaptive(
              [&](double s) {
                  return std::pow(s, 5) * th0(s) * eta_identity_from_s2(s, t);
              },
              sq0, sq1, inner, s_breaks).value;
    const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
    return std::fabs(lhs - rhs) / scale;
}

double fubini_check(const profiles::Theta0Spec& spec, double t0, double t) {
    spec.validate();
    return fubini_check([&](double s) { return profiles::theta0(spec, s); }, t0, t);
}

std::vector<double> tau_of_t(const ModulationTrace& trace, double C) {
    trace.validate();
    if (trace.scale != TimeScale::Linear)
        throw std::invalid_argument("tau_of_t: needs a linear-time trace");
    if (!(C >= 1.0)) throw std::invalid_argument("tau_of_t: need C >= 1");
    std::vector<double> tau(trace.times.size());
    const double t0 = trace.times.front();
    double acc = C * t0 * std::exp(-2.0 * trace.loglambda.front());
    tau[0] = acc;
    for (size_t i = 1; i < trace.times.size(); ++i) {
        const double f0 = std::exp(-2.0 * trace.loglambda[i - 1]);
        const double f1 = std::exp(-2.0 * trace.loglambda[i]);
        acc += 0.5 * (f0 + f1) * (trace.times[i] - trace.times[i - 1]);
        tau[i] = acc;
    }
    return tau;
}

RegimeLabel classify_regime(const ModulationTrace& trace, double burn_in) {
    trace.validate();
    const int n = static_cast<int>(trace.times.size());
    const int start = static_cast<int>(std::floor(burn_in * n));
    if (n - start < 100)
        throw std::invalid_argument("classify_regime: need >= 100 samples after burn-in");

    const auto& y = trace.loglambda;
    // Running records relative to everything seen before (burn-in included).
    double run_max = y[0], run_min = y[0];
    for (int i = 1; i < start; ++i) {
        run_max = std::max(run_max, y[i]);
        run_min = std::min(run_min, y[i]);
    }
    bool new_max = false, new_min = false;
    double post_max = y[start], post_min = y[start];
    for (int i = start; i < n; ++i) {
        if (y[i] > run_max) { new_max = true; run_max = y[i]; }
        if (y[i] < run_min) { new_min = true; run_min = y[i]; }
        post_max = std::max(post_max, y[i]);
        post_min = std::min(post_min, y[i]);
    }
    const double range = post_max - post_min;

    RegimeLabel label;
    if (new_max && new_min && range > 0.5) {
        label.regime = Regime::Oscillatory;
        label.fitted_exponent = 0.0;
        return label;
    }

    // Envelope fit over the last half: |d(log lambda)/d(log t)| against the
    // log-bracket abscissa; slope -> -a, exponent -> 1 - a.
    std::vector<double> fx, fy;
    const int half = start + (n - start) / 2;
    const bool linear = trace.scale == TimeScale::Linear;
    for (int i = std::max(half, 1); i < n; ++i) {
        double trate;
        if (linear && trace.rate[i] != 0.0) {
            trate = trace.times[i] * trace.rate[i];
        } else {
            const double dlt = trace.log_time(i) - trace.log_time(i - 1);
            if (dlt == 0.0) continue;
            trate = (y[i] - y[i - 1]) / dlt;
        }
        if (trate == 0.0 || !std::isfinite(trate)) continue;
        const double logt = linear ? std::log(trace.times[i]) : trace.times[i];
        fx.push_back(std::log(1.0 + 0.5 * logt));
        fy.push_back(std::log(std::fabs(trate)));
    }
    const LinearFit fit = fit_line(fx, fy);
    label.fitted_exponent = 1.0 + fit.slope;
    label.fit_r2 = fit.r2;

    const double net = y[n - 1] - y[start];
    if (net <= -0.5)
        label.regime = fit.r2 >= 0.9 ? Regime::BlowUp : Regime::Inconclusive;
    else if (net >= 0.5)
        label.regime = fit.r2 >= 0.9 ? Regime::BlowDown : Regime::Inconclusive;
    else if (range < 0.5)
        label.regime = Regime::Bounded;
    else
        label.regime = Regime::Inconclusive;
    return label;
}

}  // namespace ymflow::scalinglaw
