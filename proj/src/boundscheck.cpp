#include "ymflow/boundscheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "ymflow/quadrature.hpp"
#include "ymflow/radialheat.hpp"

namespace ymflow::boundscheck {

namespace {

constexpr double kCStar = 10.0;  // l2 <= C* sqrt(t)
constexpr double kEq = 1e-12;    // b-branch equality tolerance

bool beq(double x, double y) { return std::fabs(x - y) < kEq; }

double sup_on_half_interval(const std::function<double(double)>& v, double t,
                            double t0) {
    double m = 0.0;
    for (int k = 0; k <= 64; ++k) {
        const double s = 0.5 * t + 0.5 * t * k / 64.0;
        if (s >= t0) m = std::max(m, v(s));
    }
    return m;
}

double history_integral(const std::function<double(double)>& v, double t,
                        double t0,
                        const std::function<double(double)>& branch) {
    const double lo = t0, hi = 0.5 * t;
    if (!(hi > lo)) return 0.0;
    QuadOptions opt;
    opt.abs_tol = 1e-300;
    opt.rel_tol = 1e-9;
    return integrate_adaptive([&](double s) { return v(s) * branch(s); }, lo, hi,
                              opt).value;
}

}  // namespace

double ScaleFn::operator()(double t) const {
    return c_sqrt * std::sqrt(t) + c_const;
}

std::string display_name(Display d) {
    switch (d) {
        case Display::WithUpperBound: return "WithUpperBound";
        case Display::NoUpperBound: return "NoUpperBound";
        case Display::ThetaEnvelope: return "ThetaEnvelope";
        case Display::ThetaGradient: return "ThetaGradient";
    }
    return "?";
}

std::string region_name(Region r) {
    switch (r) {
        case Region::Inner: return "Inner";
        case Region::Middle: return "Middle";
        case Region::Outer: return "Outer";
        case Region::BelowSqrtT: return "BelowSqrtT";
        case Region::AboveSqrtT: return "AboveSqrtT";
    }
    return "?";
}

double jbracket(double x) { return std::sqrt(1.0 + x * x); }

double jlog(double z) {
    if (!(z > 0.0)) throw std::domain_error("jlog: need z > 0");
    return 1.0 + std::fabs(std::log(z));
}

void BoundCase::validate(double t) const {
    if (n < 3) throw std::invalid_argument("BoundCase: n must be >= 3");
    if (!(b <= double(n))) throw std::invalid_argument("BoundCase: b must be <= n");
    if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("BoundCase: a in [0,1)");
    if (!v) throw std::invalid_argument("BoundCase: v is empty");
    const bool scaled_region = region == Region::BelowSqrtT
                               || region == Region::AboveSqrtT;
    if (display == Display::WithUpperBound && scaled_region)
        throw std::invalid_argument("BoundCase: region does not select a branch of "
                                    "the upper-bound display");
    if (display != Display::WithUpperBound && !scaled_region)
        throw std::invalid_argument("BoundCase: region must split at sqrt(t) for "
                                    "this display");
    if (display == Display::WithUpperBound) {
        const double a1 = l1(t), a2 = l2(t);
        if (!(a1 >= 0.0 && a1 <= a2))
            throw std::invalid_argument("BoundCase: need 0 <= l1 <= l2");
        if (!(a2 <= kCStar * std::sqrt(t)))
            throw std::invalid_argument("BoundCase: l2 must stay below C* sqrt(t)");
        if (region == Region::Inner && !(a1 > 0.0))
            throw std::invalid_argument("BoundCase: inner region needs l1 > 0");
        if (beq(b, n) && !(a1 > 0.0))
            throw std::invalid_argument("BoundCase: b = n forcing needs l1 > 0");
    }
}

double eval_bound_rhs(const BoundCase& c, double x, double t, double t0) {
    c.validate(t);
    const double aa = c.a + c.rhs_a_shift;
    auto veff = [&](double s) { return s >= t0 ? c.v(s) : 0.0; };

    if (c.display == Display::ThetaEnvelope || c.display == Display::ThetaGradient) {
        const double env = x <= std::sqrt(t)
            ? std::pow(jbracket(t), -0.5 * c.b) * std::pow(std::log(t + 2.0), -aa)
            : std::pow(jbracket(x), -c.b) * std::pow(std::log(x + 2.0), -aa);
        if (c.display == Display::ThetaEnvelope) return env;
        return env * (x <= std::sqrt(t) ? 1.0 / std::sqrt(t) : x / t);
    }

    const double supv = sup_on_half_interval(c.v, t, t0);

    if (c.display == Display::NoUpperBound) {
        if (c.region == Region::BelowSqrtT) {
            auto branch = [&](double s) {
                (void)s;
                return beq(c.b, c.n) ? std::pow(jlog(t), 1.0 - aa)
                                     : std::pow(t, 0.5 * (c.n - c.b))
                                           * std::pow(jlog(t), -aa);
            };
            return std::pow(t, -0.5 * c.n) * history_integral(veff, t, t0, branch)
                   + std::pow(t, 1.0 - 0.5 * c.b) * std::pow(jlog(t), -aa) * supv;
        }
        const double hist = history_integral(veff, t, t0, [](double) { return 1.0; });
        double out = std::pow(x, -c.b) * std::pow(jlog(t), -aa) * (t * supv + hist);
        if (beq(c.b, c.n))
            out += std::pow(t, -0.5 * c.n) * std::exp(-x * x / (16.0 * t))
                   * std::pow(jlog(x), 1.0 - aa)
                   * history_integral(veff, t, t0, [](double) { return 1.0; });
        return out;
    }

    // WithUpperBound
    auto hist_branch = [&](double s) {
        const double L2 = c.l2(s);
        return beq(c.b, c.n) ? std::pow(jlog(L2), 1.0 - aa)
                             : std::pow(L2, c.n - c.b) * std::pow(jlog(L2), -aa);
    };
    const double hist = std::pow(t, -0.5 * c.n) * std::exp(-x * x / (16.0 * t))
                        * history_integral(veff, t, t0, hist_branch);

    const double L1 = c.l1(t), L2 = c.l2(t);
    double sup_branch;
    switch (c.region) {
        case Region::Inner:
            if (c.b < 2.0)
                sup_branch = std::pow(L2, 2.0 - c.b) * std::pow(jlog(L2), -aa);
            else if (beq(c.b, 2.0))
                sup_branch = jlog(L2 / L1) * std::pow(jlog(L1), -aa);
            else
                sup_branch = std::pow(L1, 2.0 - c.b) * std::pow(jlog(L1), -aa);
            break;
        case Region::Middle:
            if (c.b < 2.0)
                sup_branch = std::pow(L2, 2.0 - c.b) * std::pow(jlog(L2), -aa);
            else if (beq(c.b, 2.0))
                sup_branch = jlog(L2 / x) * std::pow(jlog(x), -aa);
            else if (beq(c.b, c.n))
                sup_branch = std::pow(x, 2.0 - c.n) * jlog(x / L1)
                             * std::pow(jlog(L1), -aa);
            else
                sup_branch = std::pow(x, 2.0 - c.b) * std::pow(jlog(x), -aa);
            break;
        case Region::Outer: {
            const double tail = beq(c.b, c.n)
                ? std::pow(jlog(L2), 1.0 - aa)
                : std::pow(L2, c.n - c.b) * std::pow(jlog(L2), -aa);
            sup_branch = std::pow(x, 2.0 - c.n) * std::exp(-x * x / (16.0 * t))
                         * tail;
            break;
        }
        default:
            throw std::logic_error("eval_bound_rhs: unreachable region");
    }
    return hist + supv * sup_branch;
}

double eval_lhs_numeric(const BoundCase& c, double x, double t, double t0) {
    c.validate(t);
    auto veff = [&](double s) { return s >= t0 ? c.v(s) : 0.0; };
    const double rhs = eval_bound_rhs(c, x, t, t0);

    if (c.display == Display::ThetaEnvelope || c.display == Display::ThetaGradient) {
        auto datum = [&](double r) {
            return std::pow(jbracket(r), -c.b) * std::pow(jlog(jbracket(r)), -c.a);
        };
        // Datum posed at t0/2 so the sweep can sample t = t0 itself; the
        // envelope constant is t0-independent either way.
        const double start = 0.5 * t0;
        if (c.display == Display::ThetaEnvelope) {
            const double tol = std::max(1e-16, 1e-4 * rhs);
            return std::fabs(
                radialheat::heat_evolve_point(c.n, datum, start, t, x, tol));
        }
        const double h = 5e-3 * std::sqrt(t);
        const double tol = std::max(1e-16, 1e-4 * rhs * h);
        const double xm = std::max(0.0, x - h);
        const double up =
            radialheat::heat_evolve_point(c.n, datum, start, t, x + h, tol);
        const double dn =
            radialheat::heat_evolve_point(c.n, datum, start, t, xm, tol);
        return std::fabs((up - dn) / (x + h - xm));
    }

    radialheat::Forcing f;
    if (c.display == Display::WithUpperBound) {
        f = [&, c](double y, double s) {
            const double w = veff(s);
            if (w == 0.0 || y < c.l1(s) || y > c.l2(s)) return 0.0;
            return w * std::pow(y, -c.b) * std::pow(jlog(y), -c.a);
        };
    } else {
        f = [&, c](double y, double s) {
            const double w = veff(s);
            if (w == 0.0 || y < std::sqrt(s)) return 0.0;
            return w * std::pow(y, -c.b) * std::pow(jlog(y), -c.a);
        };
    }
    if (!(t > t0)) return 0.0;
    const double tol = std::max(1e-15, 1e-3 * rhs);
    return radialheat::duhamel_out_point(c.n, f, t0, t, x, tol);
}

namespace {

std::vector<double> region_points(const BoundCase& c, double t, int count,
                                  std::mt19937_64* rng) {
    double lo, hi;
    const double st = std::sqrt(t);
    switch (c.region) {
        case Region::Inner:
            lo = c.l1(t) / 20.0;
            hi = 0.9 * c.l1(t);
            break;
        case Region::Middle:
            lo = c.l1(t) > 0.0 ? 1.1 * c.l1(t) : c.l2(t) / 100.0;
            hi = 0.9 * c.l2(t);
            break;
        case Region::Outer:
            lo = 1.1 * c.l2(t);
            hi = 8.0 * c.l2(t);
            break;
        case Region::BelowSqrtT:
            lo = st / 20.0;
            hi = 0.9 * st;
            break;
        case Region::AboveSqrtT:
            lo = 1.1 * st;
            hi = 6.0 * st;
            break;
    }
    if (!(lo > 0.0 && hi > lo))
        throw std::invalid_argument("ratio_sweep: empty sample window in region");
    std::vector<double> xs(count);
    std::uniform_real_distribution<double> jitter(-0.08, 0.08);
    for (int k = 0; k < count; ++k) {
        double u = count == 1 ? 0.5 : double(k) / (count - 1);
        if (rng) u = std::clamp(u + jitter(*rng), 0.0, 1.0);
        xs[k] = lo * std::pow(hi / lo, u);
    }
    return xs;
}

}  // namespace

SweepStats ratio_sweep(const BoundCase& c, const SweepOptions& opt) {
    if (opt.t_samples < 20)
        throw std::invalid_argument("ratio_sweep: need >= 20 time samples");
    if (!(opt.t_max >= 8.0 * opt.t_min))
        throw std::invalid_argument("ratio_sweep: need >= 3 dyadic decades of t");
    std::mt19937_64 rng(opt.seed);
    SweepStats out;
    out.case_id = c.id;
    std::vector<double> lt, lr;  // per-t log max ratio
    for (int i = 0; i < opt.t_samples; ++i) {
        const double t = opt.t_min
                         * std::pow(opt.t_max / opt.t_min,
                                    double(i) / (opt.t_samples - 1));
        double tmax = 0.0;
        for (double x : region_points(c, t, opt.x_per_region,
                                      opt.seed ? &rng : nullptr)) {
            const double rhs = eval_bound_rhs(c, x, t, opt.t0);
            const double lhs = eval_lhs_numeric(c, x, t, opt.t0);
            const double ratio = lhs == 0.0 ? 0.0 : lhs / rhs;
            out.samples.push_back({t, x, lhs, rhs, ratio});
            out.max_ratio = std::max(out.max_ratio, ratio);
            tmax = std::max(tmax, ratio);
        }
        if (tmax > 0.0) {
            lt.push_back(std::log(t));
            lr.push_back(std::log(tmax));
        }
    }
    if (lt.size() >= 2) {
        double st = 0, sr = 0, stt = 0, str = 0;
        const double m = double(lt.size());
        for (size_t k = 0; k < lt.size(); ++k) {
            st += lt[k];
            sr += lr[k];
            stt += lt[k] * lt[k];
            str += lt[k] * lr[k];
        }
        out.slope = (m * str - st * sr) / (m * stt - st * st);
    }
    out.pass = std::isfinite(out.max_ratio) && out.slope <= 0.05;
    return out;
}

double t0_stability_factor(const BoundCase& c, const SweepOptions& opt,
                           const std::vector<double>& t0s) {
    double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
    for (double t0 : t0s) {
        SweepOptions o = opt;
        o.t0 = t0;
        o.t_min = 2.0 * t0;
        o.t_max = 2000.0 * t0;
        const double r = ratio_sweep(c, o).max_ratio;
        mn = std::min(mn, r);
        mx = std::max(mx, r);
    }
    if (mx == 0.0) return 1.0;
    return mx / mn;
}

void write_sweep_csv(const SweepStats& stats, std::ostream& os) {
    os << "case_id,t,x,lhs,rhs,ratio\n";
    char buf[160];
    for (const auto& s : stats.samples) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      stats.case_id.c_str(), s.t, s.x, s.lhs, s.rhs, s.ratio);
        os << buf;
    }
}

std::vector<BoundCase> standard_cases() {
    auto one = [](double) { return 1.0; };
    auto inv = [](double s) { return 1.0 / s; };
    std::vector<BoundCase> deck;

    BoundCase c;
    c.id = "middle_b4";
    c.n = 6;
    c.b = 4.0;
    c.a = 0.5;
    c.l1 = {0.0, 0.5};
    c.l2 = {0.5, 0.0};
    c.v = one;
    c.region = Region::Middle;
    deck.push_back(c);

    c.id = "inner_b3";
    c.b = 3.0;
    c.l1 = {0.05, 0.0};
    c.region = Region::Inner;
    deck.push_back(c);

    c.id = "inner_b2";
    c.b = 2.0;
    deck.push_back(c);

    c.id = "outer_b4";
    c.b = 4.0;
    c.l1 = {0.0, 0.5};
    c.l2 = {0.2, 0.0};
    c.region = Region::Outer;
    deck.push_back(c);

    c.id = "edge_b6";
    c.b = 6.0;
    c.l1 = {0.0, 2.0};
    c.l2 = {0.5, 0.0};
    c.region = Region::Middle;
    deck.push_back(c);

    c.id = "middle_b4_decaying_v";
    c.b = 4.0;
    c.l1 = {0.0, 0.5};
    c.v = inv;
    deck.push_back(c);

    c.id = "n3_middle";
    c.n = 3;
    c.b = 2.5;
    c.v = one;
    c.sweep_t_min = 1e5;
    c.sweep_t_max = 1e8;
    deck.push_back(c);

    BoundCase d;
    d.id = "farfield_b4_below";
    d.n = 6;
    d.b = 4.0;
    d.a = 0.5;
    d.v = one;
    d.display = Display::NoUpperBound;
    d.region = Region::BelowSqrtT;
    deck.push_back(d);

    d.id = "farfield_b4_above";
    d.region = Region::AboveSqrtT;
    d.sweep_t_min = 1e5;
    d.sweep_t_max = 1e8;
    deck.push_back(d);
    d.sweep_t_min = 0.0;
    d.sweep_t_max = 0.0;

    d.id = "farfield_b6_above";
    d.b = 6.0;
    deck.push_back(d);

    BoundCase e;
    e.id = "theta_env_a05";
    e.n = 6;
    e.b = 2.0;
    e.a = 0.5;
    e.v = one;
    e.display = Display::ThetaEnvelope;
    e.region = Region::BelowSqrtT;
    deck.push_back(e);

    e.id = "theta_env_a05_far";
    e.region = Region::AboveSqrtT;
    deck.push_back(e);

    e.id = "theta_grad_a05";
    e.display = Display::ThetaGradient;
    e.region = Region::BelowSqrtT;
    deck.push_back(e);

    return deck;
}

}  // namespace ymflow::boundscheck
