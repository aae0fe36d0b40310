#include "ymflow/profiles.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ymflow::profiles {

double soliton(const SolitonParams& p, double r) {
    return 2.0 / (r * r + p.lambda * p.lambda);
}

double zmode(double rho) {
    const double q = 1.0 + rho * rho;
    return 1.0 / (q * q);
}

double potential(double rho) { return 24.0 * zmode(rho); }

double lin_potential(double rho) {
    const double U = 2.0 / (1.0 + rho * rho);
    return 12.0 * U - 6.0 * rho * rho * U * U;
}

CutoffSpec CutoffSpec::at_time(double t) { return CutoffSpec(cutoff_radius(t)); }

double cutoff_radius(double t) {
    if (!(t > M_E)) throw std::domain_error("cutoff_radius: need log t > 1");
    return std::pow(std::log(t), 0.01);
}

double cutoff(const CutoffSpec& spec, double rho) {
    const double x = rho / spec.R;
    if (x <= 1.0) return 1.0;
    if (x >= 2.0) return 0.0;
    const double s = x - 1.0;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

void Theta0Spec::validate() const {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("Theta0Spec: a must be in (0,1)");
    if (!(amplitude > 0.0)) throw std::invalid_argument("Theta0Spec: amplitude must be > 0");
    if (sign != 1 && sign != -1) throw std::invalid_argument("Theta0Spec: sign must be +-1");
    if (family == Theta0Family::CustomTable && table_path.empty())
        throw std::invalid_argument("Theta0Spec: CustomTable needs table_path");
}

namespace {

// <r> = sqrt(1+r^2), <log z> = 1 + |log z|.
double power_log(double r, double a) {
    const double br2 = 1.0 + r * r;
    const double lg = 1.0 + std::fabs(0.5 * std::log(br2));
    return 1.0 / (br2 * std::pow(lg, a));
}

double oscillatory_explicit(double r, double a) {
    const double q = 2.0 + r * r;
    const double L = std::log(q);
    const double ll = std::log(L);
    return ((1.0 - a) * std::cos(ll) - std::sin(ll)) / (q * std::pow(L, a));
}

}  // namespace

double theta0(const Theta0Spec& spec, double r) {
    switch (spec.family) {
        case Theta0Family::PowerLog:
            return spec.sign * spec.amplitude * power_log(r, spec.a);
        case Theta0Family::OscillatoryExplicit:
            return spec.amplitude * oscillatory_explicit(r, spec.a);
        case Theta0Family::CustomTable: {
            static thread_local std::string cached_path;
            static thread_local Theta0Table table;
            if (cached_path != spec.table_path) {
                table = Theta0Table::load(spec.table_path, spec.a, spec.amplitude);
                cached_path = spec.table_path;
            }
            return table.eval(r);
        }
    }
    throw std::logic_error("theta0: unknown family");
}

Theta0Table Theta0Table::load(const std::string& path, double a, double amplitude) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("Theta0Table: cannot open " + path);
    Theta0Table t;
    t.a = a;
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double r, v;
        char comma;
        if (!(ss >> r >> comma >> v)) throw std::runtime_error("Theta0Table: parse error: " + line);
        if (!t.r.empty() && r <= t.r.back())
            throw std::runtime_error("Theta0Table: radii must be strictly increasing");
        if (!std::isfinite(v)) throw std::runtime_error("Theta0Table: non-finite value");
        t.r.push_back(r);
        t.v.push_back(v);
    }
    if (t.r.size() < 4) throw std::runtime_error("Theta0Table: need at least 4 rows");
    // Envelope check on the tail: |v| r^2 <log r>^a must stay bounded.
    for (size_t i = 0; i < t.r.size(); ++i) {
        if (t.r[i] < 10.0) continue;
        const double q = std::fabs(t.v[i]) * t.r[i] * t.r[i]
                         * std::pow(1.0 + std::log(t.r[i]), a);
        if (q > 100.0 * amplitude)
            throw std::runtime_error("Theta0Table: tail violates the decay envelope");
    }
    return t;
}

double Theta0Table::eval(double x) const {
    const size_t n = r.size();
    if (x <= r.front()) return v.front();
    if (x >= r.back()) {
        // extend with the envelope's own decay
        const double rb = r.back();
        const double scale = (rb * rb / (x * x))
                             * std::pow((1.0 + std::log(rb)) / (1.0 + std::log(x)), a);
        return v.back() * scale;
    }
    size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        (r[mid] <= x ? lo : hi) = mid;
    }
    const double h = r[lo + 1] - r[lo];
    const double u = (x - r[lo]) / h;
    // Hermite cubic with centered-difference slopes
    auto slope = [&](size_t i) {
        if (i == 0) return (v[1] - v[0]) / (r[1] - r[0]);
        if (i == n - 1) return (v[n - 1] - v[n - 2]) / (r[n - 1] - r[n - 2]);
        return (v[i + 1] - v[i - 1]) / (r[i + 1] - r[i - 1]);
    };
    const double m0 = slope(lo) * h, m1 = slope(lo + 1) * h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * v[lo] + (u3 - 2 * u2 + u) * m0
           + (-2 * u3 + 3 * u2) * v[lo + 1] + (u3 - u2) * m1;
}

double nonlinearity_N(double lambda, double theta, double phi_contrib, double psi,
                      double r) {
    if (!(lambda > 0.0)) throw std::domain_error("nonlinearity_N: lambda must be > 0");
    const double U = soliton(SolitonParams(lambda), r);
    const double w = theta + phi_contrib + psi;
    const double Uw = U + w;
    return 6.0 * Uw * Uw - 2.0 * r * r * Uw * Uw * Uw - 6.0 * U * U
           + 2.0 * r * r * U * U * U - (12.0 * U - 6.0 * r * r * U * U) * w;
}

RadialProfile inner_linear_apply(const RadialProfile& phi) {
    phi.grid.validate();
    const auto& x = phi.grid.nodes;
    const auto& f = phi.values;
    const int n = phi.grid.size();
    if (n < 5) throw std::invalid_argument("inner_linear_apply: grid too coarse");
    RadialProfile out(phi.grid, phi.time);
    // rho = 0: even symmetry turns phi'' + (5/rho) phi' into 6 phi''(0).
    const double h0 = x[1] - x[0];
    out.values[0] = 6.0 * 2.0 * (f[1] - f[0]) / (h0 * h0) + lin_potential(0.0) * f[0];
    for (int i = 1; i < n - 1; ++i) {
        const double hm = x[i] - x[i - 1];
        const double hp = x[i + 1] - x[i];
        const double d2 = 2.0 * ((f[i + 1] - f[i]) / hp - (f[i] - f[i - 1]) / hm)
                          / (hm + hp);
        const double d1 = (hm * hm * f[i + 1] - hp * hp * f[i - 1]
                           - (hm * hm - hp * hp) * f[i])
                          / (hm * hp * (hm + hp));
        out.values[i] = d2 + 5.0 / x[i] * d1 + lin_potential(x[i]) * f[i];
    }
    {
        // one-sided quadratic at the outer edge
        const int i = n - 1;
        const double h1 = x[i - 1] - x[i - 2];
        const double h2 = x[i] - x[i - 1];
        const double d2 = 2.0 * ((f[i] - f[i - 1]) / h2 - (f[i - 1] - f[i - 2]) / h1)
                          / (h1 + h2);
        const double d1 = (f[i] - f[i - 1]) / h2 + 0.5 * d2 * h2;
        out.values[i] = d2 + 5.0 / x[i] * d1 + lin_potential(x[i]) * f[i];
    }
    return out;
}

}  // namespace ymflow::profiles
