#include "ymflow/pdesolver.hpp"

#include <cmath>

#include "ymflow/radialheat.hpp"

namespace ymflow::pdesolver {

namespace {

// ARS(2,2,2) IMEX coefficients: diffusion implicit, reaction explicit.
const double kGamma = 1.0 - std::sqrt(2.0) / 2.0;
const double kDelta = 1.0 - 1.0 / (2.0 * kGamma);

struct Operator {
    // Tridiagonal A = d^2/dr^2 + (5/r) d/dr on the grid interior plus the
    // origin regularity row; the last row is the far-field closure
    // u_N = bc_gamma * u_{N-1}.
    Eigen::ArrayXd lower, diag, upper;  // size n; lower[0], upper[n-1] unused
    double bc_gamma = 0.0;
    int n = 0;

    static Operator build(const RadialGrid& grid, double decay_log_power) {
        const auto& x = grid.nodes;
        const int n = grid.size();
        Operator op;
        op.n = n;
        op.lower = Eigen::ArrayXd::Zero(n);
        op.diag = Eigen::ArrayXd::Zero(n);
        op.upper = Eigen::ArrayXd::Zero(n);
        const double h0 = x[1] - x[0];
        op.diag[0] = -12.0 / (h0 * h0);
        op.upper[0] = 12.0 / (h0 * h0);
        // Conservative flux form r^{-5} d/dr (r^5 du/dr) with midpoint
        // coefficients: every off-diagonal weight is positive, so the
        // implicit matrix I - c A keeps the M-matrix sign structure at r > 0
        // (a centered advection stencil for (5/r) u_r would lose it at the
        // first nodes, where 5 h > 2 r).
        // The exact cell volume (r_p^6 - r_m^6)/6 (rather than r_i^5 times the
        // cell width) makes the stencil exact on r^2, so it stays pointwise
        // second order down to the axis.
        for (int i = 1; i < n - 1; ++i) {
            const double hm = x[i] - x[i - 1];
            const double hp = x[i + 1] - x[i];
            const double rm = 0.5 * (x[i - 1] + x[i]);
            const double rp = 0.5 * (x[i] + x[i + 1]);
            const double vol = (std::pow(rp, 6) - std::pow(rm, 6)) / 6.0;
            op.lower[i] = std::pow(rm, 5) / (hm * vol);
            op.upper[i] = std::pow(rp, 5) / (hp * vol);
            op.diag[i] = -(op.lower[i] + op.upper[i]);
        }
        // u ~ r^{-2} (log r)^{-p} closure at the outer edge
        const double rm = x[n - 2], rb = x[n - 1];
        op.bc_gamma = (rm * rm) / (rb * rb)
                      * std::pow((1.0 + std::log(rm)) / (1.0 + std::log(rb)),
                                 decay_log_power);
        return op;
    }

    Eigen::ArrayXd apply(const Eigen::ArrayXd& u) const {
        Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
        out[0] = diag[0] * u[0] + upper[0] * u[1];
        for (int i = 1; i < n - 1; ++i)
            out[i] = lower[i] * u[i - 1] + diag[i] * u[i] + upper[i] * u[i + 1];
        out[n - 1] = 0.0;  // closure row carries no dynamics
        return out;
    }

    // Solve (I - c A) x = b with the closure row x_N = bc_gamma x_{N-1}.
    Eigen::ArrayXd solve(double c, const Eigen::ArrayXd& b) const {
        Eigen::ArrayXd dl(n), dd(n), du(n), rhs = b;
        for (int i = 0; i < n - 1; ++i) {
            dl[i] = -c * lower[i];
            dd[i] = 1.0 - c * diag[i];
            du[i] = -c * upper[i];
        }
        dl[n - 1] = -bc_gamma;
        dd[n - 1] = 1.0;
        du[n - 1] = 0.0;
        rhs[n - 1] = 0.0;
        // Thomas sweep
        for (int i = 1; i < n; ++i) {
            const double w = dl[i] / dd[i - 1];
            dd[i] -= w * du[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        Eigen::ArrayXd x(n);
        x[n - 1] = rhs[n - 1] / dd[n - 1];
        for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - du[i] * x[i + 1]) / dd[i];
        return x;
    }
};

Eigen::ArrayXd reaction(const RadialGrid& grid, const Eigen::ArrayXd& u) {
    const auto& r = grid.nodes;
    Eigen::ArrayXd f = 6.0 * u * u - 2.0 * r * r * u * u * u;
    f[grid.size() - 1] = 0.0;
    return f;
}

Eigen::ArrayXd imex_step(const Operator& op, const RadialGrid& grid,
                         const Eigen::ArrayXd& u, double dt) {
    const Eigen::ArrayXd fu = reaction(grid, u);
    const Eigen::ArrayXd k1 = op.solve(dt * kGamma, (u + dt * kGamma * fu).eval());
    const Eigen::ArrayXd fk1 = reaction(grid, k1);
    const Eigen::ArrayXd rhs =
        u + dt * (1.0 - kGamma) * op.apply(k1)
        + dt * (kDelta * fu + (1.0 - kDelta) * fk1);
    return op.solve(dt * kGamma, rhs);
}

}  // namespace

void SimConfig::validate() const {
    if (!(t0 >= 10.0)) throw std::invalid_argument("SimConfig: t0 must be >= 10");
    if (!(horizon > t0)) throw std::invalid_argument("SimConfig: horizon must exceed t0");
    if (epsilon < 0.0) throw std::invalid_argument("SimConfig: epsilon must be >= 0");
    if (with_soliton && !(lambda_init > 0.0))
        throw std::invalid_argument("SimConfig: lambda_init must be > 0");
    if (epsilon > 0.0) theta0.validate();
    if (snapshot_count < 2) throw std::invalid_argument("SimConfig: need >= 2 snapshots");
    if (!(theta_time_origin <= t0))
        throw std::invalid_argument("SimConfig: theta_time_origin must not exceed t0");
}

RadialGrid SimConfig::make_grid() const {
    const double rmax = grid.r_max > 0.0 ? grid.r_max : 10.0 * std::sqrt(horizon);
    return RadialGrid::graded(6, grid.r_core, grid.h0, grid.stretch, rmax);
}

double SimConfig::theta_background(double r, double t) const {
    if (epsilon == 0.0) return 0.0;
    auto datum = [this](double s) { return profiles::theta0(theta0, s); };
    if (t <= theta_time_origin) return epsilon * datum(r);
    return epsilon
           * radialheat::heat_evolve_point(6, datum, theta_time_origin, t, r, 1e-12);
}

Eigen::ArrayXd radial_laplacian_fd(const RadialGrid& grid, const Eigen::ArrayXd& u) {
    return Operator::build(grid, 0.0).apply(u);
}

bool implicit_matrix_is_m_matrix(const RadialGrid& grid, double dt_gamma) {
    const Operator op = Operator::build(grid, 0.0);
    for (int i = 0; i < op.n - 1; ++i) {
        if (!(1.0 - dt_gamma * op.diag[i] > 0.0)) return false;
        if (i > 0 && -dt_gamma * op.lower[i] > 0.0) return false;
        if (-dt_gamma * op.upper[i] > 0.0) return false;
    }
    return true;
}

double extract_lambda(const RadialProfile& snapshot, LambdaPolicy policy,
                      const std::function<double(double)>& background,
                      double lambda_guess) {
    auto bg = [&](double r) { return background ? background(r) : 0.0; };
    const double origin = snapshot.values[0] - bg(0.0);
    if (policy == LambdaPolicy::OriginValue) {
        if (!(origin > 0.0))
            throw std::runtime_error("extract_lambda: non-positive origin value");
        return std::sqrt(2.0 / origin);
    }
    double guess = lambda_guess;
    if (guess <= 0.0) {
        if (!(origin > 0.0))
            throw std::runtime_error("extract_lambda: non-positive origin value");
        guess = std::sqrt(2.0 / origin);
    }
    // Golden-section minimization of the core misfit in mu = lambda^2.
    std::vector<int> idx;
    for (int i = 0; i < snapshot.grid.size(); ++i)
        if (snapshot.grid.nodes[i] <= 3.0 * guess) idx.push_back(i);
    if (idx.size() < 5) throw std::runtime_error("extract_lambda: too few core nodes");
    auto misfit = [&](double mu) {
        double e = 0.0;
        for (int i : idx) {
            const double r = snapshot.grid.nodes[i];
            const double d = snapshot.values[i] - bg(r) - 2.0 / (r * r + mu);
            e += d * d;
        }
        return e;
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = guess * guess / 4.0, hi = guess * guess * 4.0;
    double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    double f1 = misfit(m1), f2 = misfit(m2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        if (f1 < f2) {
            hi = m2; m2 = m1; f2 = f1;
            m1 = hi - phi * (hi - lo); f1 = misfit(m1);
        } else {
            lo = m1; m1 = m2; f1 = f2;
            m2 = lo + phi * (hi - lo); f2 = misfit(m2);
        }
    }
    const double mu = 0.5 * (lo + hi);
    if (mu <= 1.0001 * guess * guess / 4.0 || mu >= 0.9999 * guess * guess * 4.0)
        throw std::runtime_error("extract_lambda: fit did not converge inside bracket");
    return std::sqrt(mu);
}

SimResult simulate(const SimConfig& cfg) {
    cfg.validate();
    const RadialGrid grid = cfg.make_grid();
    const double log_power = cfg.epsilon > 0.0 ? cfg.theta0.a : 0.0;
    const Operator op = Operator::build(grid, log_power);

    Eigen::ArrayXd u = Eigen::ArrayXd::Zero(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double r = grid.nodes[i];
        double v = 0.0;
        if (cfg.with_soliton)
            v += profiles::soliton(profiles::SolitonParams(cfg.lambda_init), r);
        if (cfg.epsilon > 0.0) v += cfg.theta_background(r, cfg.t0);
        u[i] = v;
    }

    // log-spaced snapshot schedule
    std::vector<double> snap_times(cfg.snapshot_count);
    for (int k = 0; k < cfg.snapshot_count; ++k)
        snap_times[k] = cfg.t0 * std::pow(cfg.horizon / cfg.t0,
                                          double(k) / (cfg.snapshot_count - 1));

    SimResult res;
    res.config = cfg;
    res.diagnostics.last_valid_time = cfg.t0;

    double t = cfg.t0;
    double dt = cfg.stepper.initial_dt;
    size_t next_snap = 0;
    auto take_snapshot = [&](double at) {
        RadialProfile p(grid, at);
        p.values = u;
        res.snapshots.push_back(std::move(p));
    };
    take_snapshot(t);
    next_snap = 1;

    while (t < cfg.horizon && !res.diagnostics.blowup_detected) {
        double step = std::min(dt, cfg.stepper.max_dt);
        const double target = snap_times[next_snap];
        bool hit = false;
        if (t + step >= target - 1e-12 * target) {
            step = target - t;
            hit = true;
        }
        const Eigen::ArrayXd full = imex_step(op, grid, u, step);
        const Eigen::ArrayXd half = imex_step(op, grid,
                                              imex_step(op, grid, u, 0.5 * step),
                                              0.5 * step);
        double err = 0.0;
        for (int i = 0; i < grid.size(); ++i) {
            const double sc = cfg.stepper.atol
                              + cfg.stepper.rtol * std::max(std::fabs(u[i]), std::fabs(half[i]));
            err = std::max(err, std::fabs(full[i] - half[i]) / sc);
        }
        if (err <= 1.0) {
            u = half;
            t += step;
            ++res.diagnostics.steps_accepted;
            res.diagnostics.last_valid_time = t;
            const double umax = u.abs().maxCoeff();
            res.diagnostics.max_abs_u = std::max(res.diagnostics.max_abs_u, umax);
            if (umax > cfg.blowup_guard) {
                res.diagnostics.blowup_detected = true;
                break;
            }
            if (cfg.with_soliton && !(u[0] > 0.0))
                throw std::runtime_error("simulate: u lost positivity at the origin");
            if (hit) {
                take_snapshot(t);
                if (++next_snap >= snap_times.size()) break;
            }
        } else {
            ++res.diagnostics.steps_rejected;
        }
        const double fac = 0.85 * std::pow(1.0 / std::max(err, 1e-10), 1.0 / 3.0);
        dt = step * std::min(3.0, std::max(0.25, fac));
    }

    if (cfg.with_soliton) {
        auto& tr = res.trace;
        for (const auto& snap : res.snapshots) {
            auto bg = [&](double r) { return cfg.theta_background(r, snap.time); };
            double lam;
            try {
                lam = extract_lambda(snap, cfg.lambda_extraction, bg, cfg.lambda_init);
            } catch (const std::runtime_error&) {
                continue;
            }
            tr.times.push_back(snap.time);
            tr.loglambda.push_back(std::log(lam));
        }
        tr.rate.assign(tr.times.size(), 0.0);
        for (size_t k = 1; k + 1 < tr.times.size(); ++k)
            tr.rate[k] = (tr.loglambda[k + 1] - tr.loglambda[k - 1])
                         / (tr.times[k + 1] - tr.times[k - 1]);
    }
    return res;
}

std::vector<ResidualReport> pde_residual(const std::vector<RadialProfile>& snaps) {
    if (snaps.size() < 3)
        throw std::invalid_argument("pde_residual: need >= 3 snapshots");
    std::vector<ResidualReport> out;
    const RadialGrid& grid = snaps.front().grid;
    const int n = grid.size();
    for (size_t k = 1; k + 1 < snaps.size(); ++k) {
        const auto& um = snaps[k - 1].values;
        const auto& uc = snaps[k].values;
        const auto& up = snaps[k + 1].values;
        const double dt2 = snaps[k + 1].time - snaps[k - 1].time;
        const Eigen::ArrayXd ut = (up - um) / dt2;
        const Eigen::ArrayXd rhs = radial_laplacian_fd(grid, uc) + reaction(grid, uc);
        double mx = 0.0, l2 = 0.0, wsum = 0.0;
        for (int i = 0; i < n - 2; ++i) {  // closure rows are not PDE rows
            const double res = ut[i] - rhs[i];
            mx = std::max(mx, std::fabs(res));
            const double w = std::pow(grid.nodes[i], 5)
                             * (i + 1 < n ? grid.nodes[i + 1] - grid.nodes[i] : 0.0);
            l2 += w * res * res;
            wsum += w;
        }
        out.push_back({snaps[k].time, mx, wsum > 0 ? std::sqrt(l2 / wsum) : 0.0});
    }
    return out;
}

std::vector<ResidualReport> pde_residual(const SimResult& result) {
    return pde_residual(result.snapshots);
}

}  // namespace ymflow::pdesolver
