#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace ymflow {

// Thrown when adaptive refinement exhausts its subdivision budget without
// reaching the requested tolerance.
class ToleranceNotMet : public std::runtime_error {
public:
    ToleranceNotMet(double value, double err)
        : std::runtime_error("adaptive quadrature tolerance not met (err="
                             + std::to_string(err) + ", value=" + std::to_string(value)),
          value_(value), error_(err) {}
    double value() const { return value_; }
    double error() const { return error_; }
private:
    double value_, error_;
};

namespace detail {

// 15-point Kronrod nodes (positive half) and weights, with the embedded
// 7-point Gauss weights.  Same constants as QUADPACK's QK15.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    double resk = 0.0, resg = 0.0, resabs = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = h * kGK15Nodes[i];
        const double f1 = f(c - dx);
        const double f2 = (i == 7) ? f1 : f(c + dx);
        fv[i] = f1;
        fv[14 - i] = f2;
        const double s = (i == 7) ? f1 : (f1 + f2);
        resk += kGK15WeightsK[i] * s;
        resabs += kGK15WeightsK[i] * ((i == 7) ? std::fabs(f1)
                                               : (std::fabs(f1) + std::fabs(f2)));
        if (i % 2 == 1) resg += kGK15WeightsG[i / 2] * s;
    }
    const double mean = resk * 0.5;
    double resasc = kGK15WeightsK[7] * std::fabs(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kGK15WeightsK[i]
                  * (std::fabs(fv[i] - mean) + std::fabs(fv[14 - i] - mean));
    resk *= h;
    resg *= h;
    resabs *= std::fabs(h);
    resasc *= std::fabs(h);
    double err = std::fabs(resk - resg);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);
    return {a, b, resk, err};
}

}  // namespace detail

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_panels = 4000;
    bool throw_on_failure = true;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod integration of f over [a, b].
// Optional interior break points force panel boundaries (e.g. at kernel
// ridges or indicator-function edges).
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b,
                              const QuadOptions& opt = {},
                              const std::vector<double>& breaks = {}) {
    if (!(b > a)) return {0.0, 0.0, true};
    std::priority_queue<detail::Panel> heap;
    double value = 0.0, error = 0.0;
    std::vector<double> pts;
    pts.push_back(a);
    for (double p : breaks)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        auto p = detail::gk15(f, pts[i], pts[i + 1]);
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());
    auto tol = [&](double v) { return std::max(opt.abs_tol, opt.rel_tol * std::fabs(v)); };
    while (error > tol(value) && panels < opt.max_panels) {
        detail::Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;  // interval at machine resolution
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    QuadResult res{value, error, error <= tol(value)};
    if (!res.converged && opt.throw_on_failure) throw ToleranceNotMet(value, error);
    return res;
}

// Integration over [a, inf) via the map x = a + u/(1-u), u in [0,1).
// The integrand must decay fast enough for the transformed integrand to be
// integrable; adaptivity handles the compression near u = 1.
template <class F>
QuadResult integrate_to_infinity(const F& f, double a, const QuadOptions& opt = {},
                                 double scale = 1.0) {
    auto g = [&](double u) {
        const double om = 1.0 - u;
        const double x = a + scale * u / om;
        const double jac = scale / (om * om);
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx * jac;
    };
    return integrate_adaptive(g, 0.0, 1.0, opt);
}

}  // namespace ymflow
