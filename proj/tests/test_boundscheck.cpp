#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ymflow/boundscheck.hpp"

using namespace ymflow::boundscheck;

namespace {

BoundCase middle_b4() {
    BoundCase c;
    c.id = "middle_b4";
    c.n = 6;
    c.b = 4.0;
    c.a = 0.0;
    c.l1 = {0.0, 0.5};
    c.l2 = {0.5, 0.0};
    c.v = [](double) { return 1.0; };
    c.region = Region::Middle;
    return c;
}

}  // namespace

TEST_CASE("brackets") {
    CHECK(jbracket(0.0) == 1.0);
    CHECK(jbracket(3.0) == doctest::Approx(std::sqrt(10.0)));
    CHECK(jlog(1.0) == 1.0);
    CHECK(jlog(std::exp(2.0)) == doctest::Approx(3.0));
    CHECK(jlog(std::exp(-2.0)) == doctest::Approx(3.0));
    CHECK_THROWS_AS(jlog(0.0), std::domain_error);
}

TEST_CASE("case validation") {
    BoundCase c = middle_b4();
    CHECK_NOTHROW(c.validate(100.0));
    c.b = 7.0;  // b > n
    CHECK_THROWS_AS(c.validate(100.0), std::invalid_argument);
    c = middle_b4();
    c.region = Region::Inner;  // inner needs l1 > 0
    c.l1 = {0.0, 0.0};
    CHECK_THROWS_AS(c.validate(100.0), std::invalid_argument);
    c = middle_b4();
    c.region = Region::BelowSqrtT;  // wrong display for sqrt(t) split
    CHECK_THROWS_AS(c.validate(100.0), std::invalid_argument);
    c = middle_b4();
    c.l2 = {20.0, 0.0};  // exceeds C* sqrt(t)
    CHECK_THROWS_AS(c.validate(100.0), std::invalid_argument);
}

TEST_CASE("rhs branch values") {
    // 2 < b < n middle branch with a = 0 is |x|^{2-b} = |x|^{-2} times sup v
    BoundCase c = middle_b4();
    const double t = 1e4, t0 = 1e2, x = 3.0;
    const double rhs = eval_bound_rhs(c, x, t, t0);
    const double sup_term = std::pow(x, -2.0);  // jlog^0 = 1
    CHECK(rhs >= sup_term);
    // the history term carries the Gaussian factor and decays; at this x
    // it is a small correction
    CHECK(rhs < 1.5 * sup_term);

    // v = 0 everywhere gives 0
    BoundCase z = middle_b4();
    z.v = [](double) { return 0.0; };
    CHECK(eval_bound_rhs(z, x, t, t0) == 0.0);
}

TEST_CASE("rhs b=n below sqrt(t) branch of the far-field display") {
    // t^{-3} int v (log t)^{1-a} ds + t^{1-b/2} (log t)^{-a} sup v
    BoundCase c;
    c.n = 6;
    c.b = 6.0;
    c.a = 0.0;
    c.v = [](double) { return 1.0; };
    c.display = Display::NoUpperBound;
    c.region = Region::BelowSqrtT;
    const double t = 1e4, t0 = 1e2;
    const double rhs = eval_bound_rhs(c, 10.0, t, t0);
    const double hist = std::pow(t, -3.0) * (0.5 * t - t0) * std::pow(jlog(t), 1.0);
    const double sup = std::pow(t, 1.0 - 3.0);
    CHECK(rhs == doctest::Approx(hist + sup).epsilon(1e-6));
}

TEST_CASE("lhs is monotone in v") {
    BoundCase c = middle_b4();
    BoundCase c2 = middle_b4();
    c2.v = [](double) { return 2.0; };
    const double t = 400.0, t0 = 1e2, x = 2.0;
    const double l1 = eval_lhs_numeric(c, x, t, t0);
    const double l2 = eval_lhs_numeric(c2, x, t, t0);
    CHECK(l1 > 0.0);
    CHECK(l2 > 1.5 * l1);
    CHECK(l2 < 2.5 * l1);
}

TEST_CASE("branch continuity near b = 2") {
    // the b<2 and b>2 branch expressions bracket the b=2 branch up to logs
    BoundCase lo = middle_b4(), eq = middle_b4(), hi = middle_b4();
    lo.b = 1.9;
    eq.b = 2.0;
    hi.b = 2.1;
    const double t = 1e4, t0 = 1e2, x = 5.0;
    const double rl = eval_bound_rhs(lo, x, t, t0);
    const double re = eval_bound_rhs(eq, x, t, t0);
    const double rh = eval_bound_rhs(hi, x, t, t0);
    const double fudge = jlog(eq.l2(t) / x) * jlog(x);
    CHECK(re <= fudge * std::max(rl, rh) * 2.0);
    CHECK(re >= std::min(rl, rh) / (2.0 * fudge));
}

TEST_CASE("fast sweep passes and the mutation fails") {
    BoundCase c = middle_b4();
    c.a = 0.5;
    SweepOptions opt;
    opt.t_samples = 20;
    opt.x_per_region = 3;
    const auto stats = ratio_sweep(c, opt);
    CHECK(stats.pass);
    CHECK(stats.max_ratio > 0.0);
    CHECK(std::isfinite(stats.max_ratio));

    BoundCase mut = c;
    mut.rhs_a_shift = 0.5;
    SweepOptions mopt = opt;
    mopt.t_max = 1e6;
    const auto mstats = ratio_sweep(mut, mopt);
    CHECK(!mstats.pass);
    CHECK(mstats.slope > 0.05);
}

TEST_CASE("vacuous sweep with zero weight") {
    BoundCase c = middle_b4();
    c.v = [](double) { return 0.0; };
    SweepOptions opt;
    opt.t_samples = 20;
    opt.x_per_region = 2;
    const auto stats = ratio_sweep(c, opt);
    CHECK(stats.pass);
    CHECK(stats.max_ratio == 0.0);
}

TEST_CASE("sweep input validation") {
    BoundCase c = middle_b4();
    SweepOptions opt;
    opt.t_samples = 10;
    CHECK_THROWS_AS(ratio_sweep(c, opt), std::invalid_argument);
    opt.t_samples = 24;
    opt.t_max = 4.0 * opt.t_min;
    CHECK_THROWS_AS(ratio_sweep(c, opt), std::invalid_argument);
}

TEST_CASE("theta envelope case is bounded with stable constant") {
    BoundCase c;
    c.n = 6;
    c.b = 2.0;
    c.a = 0.5;
    c.v = [](double) { return 1.0; };
    c.display = Display::ThetaEnvelope;
    c.region = Region::BelowSqrtT;
    const double t0 = 1e2;
    double prev = 0.0;
    for (double t : {2e2, 4e2, 8e2, 1.6e3}) {
        const double ratio = eval_lhs_numeric(c, 0.0, t, t0)
                             / eval_bound_rhs(c, 0.0, t, t0);
        CHECK(ratio < 2.0);
        if (prev > 0.0) CHECK(ratio < 2.0 * prev);
        prev = ratio;
    }
}

TEST_CASE("standard deck is well formed") {
    const auto deck = standard_cases();
    CHECK(deck.size() >= 10);
    for (const auto& c : deck) {
        CHECK(!c.id.empty());
        CHECK_NOTHROW(c.validate(1e4));
        CHECK(c.rhs_a_shift == 0.0);
    }
}
