#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cmcshoot/dynamics.hpp"
#include "cmcshoot/ode.hpp"
#include "cmcshoot/shooting.hpp"
#include "helpers.hpp"

using namespace cmcshoot;
using test::kPi;

namespace {

// Closed-form qualification system: rotation in (y0, y1), decay in y2.
ode::Vec<3> rotation_decay(double, const ode::Vec<3>& y) {
    return {-y[1], y[0], -y[2]};
}

ode::Vec<3> rotation_decay_exact(double s) {
    return {std::cos(s), std::sin(s), std::exp(-s)};
}

double max_err(const ode::Vec<3>& a, const ode::Vec<3>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < 3; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

ode::Config fixed_step_config(double h) {
    ode::Config cfg;
    cfg.h_min = cfg.h_init = cfg.h_max = h;
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    ode::Config bad;
    bad.h_min = 0.1;
    bad.h_init = 0.01;
    CHECK_THROWS_AS(bad.validate(), InvalidParameter);
    bad = ode::Config{};
    bad.rtol = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidParameter);
    CHECK_NOTHROW(ode::Config{}.validate());
}

TEST_CASE("convergence order of at least four under step refinement") {
    const ode::Vec<3> y0{1.0, 0.0, 1.0};
    std::vector<double> errs;
    for (double h : {0.4, 0.2, 0.1, 0.05}) {
        const auto res = ode::integrate_to<3>(rotation_decay, y0, 2.0, fixed_step_config(h));
        REQUIRE(res.outcome == ode::Outcome::ReachedEnd);
        errs.push_back(max_err(res.trajectory.y_end(), rotation_decay_exact(2.0)));
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double order = std::log2(errs[i - 1] / errs[i]);
        CHECK(order >= 4.0);
    }
}

TEST_CASE("dense output tracks the exact solution between steps") {
    const ode::Vec<3> y0{1.0, 0.0, 1.0};
    const auto res = ode::integrate_to<3>(rotation_decay, y0, 2.0, ode::Config{});
    REQUIRE(res.outcome == ode::Outcome::ReachedEnd);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const double s = test::uniform(rng, 0.0, 2.0);
        CHECK(max_err(res.trajectory.eval(s), rotation_decay_exact(s)) <= 1e-8);
    }
    // Sample list: strictly increasing from zero.
    REQUIRE(res.trajectory.size() >= 2);
    CHECK(res.trajectory.sample_s(0) == 0.0);
    for (std::size_t i = 1; i < res.trajectory.size(); ++i) {
        CHECK(res.trajectory.sample_s(i) > res.trajectory.sample_s(i - 1));
    }
}

TEST_CASE("event localization on a linear crossing") {
    const auto f = [](double, const ode::Vec<3>& y) {
        (void)y;
        return ode::Vec<3>{1.0, 0.0, 0.0};
    };
    std::vector<ode::Event<3>> events{{7, [](const ode::Vec<3>& y) { return y[0] - 0.5; }}};
    const auto res = ode::integrate<3>(f, {0.0, 0.0, 0.0}, 10.0, events, ode::Config{});
    REQUIRE(res.outcome == ode::Outcome::EventHit);
    CHECK(res.hit.id == 7);
    CHECK(std::abs(res.hit.s - 0.5) <= 1e-10);
    CHECK(std::abs(res.hit.state[0] - 0.5) <= 1e-10);
    CHECK(res.trajectory.s_end() == res.hit.s);
}

TEST_CASE("event ordering inside a single step") {
    const auto f = [](double, const ode::Vec<3>&) { return ode::Vec<3>{1.0, 1.0, 0.0}; };
    std::vector<ode::Event<3>> events{{1, [](const ode::Vec<3>& y) { return y[0] - 0.5; }},
                                      {2, [](const ode::Vec<3>& y) { return y[1] - 0.25; }}};
    // One giant fixed step so both events cross inside it.
    const auto res = ode::integrate<3>(f, {0.0, 0.0, 0.0}, 1.0, events, fixed_step_config(1.0));
    REQUIRE(res.outcome == ode::Outcome::EventHit);
    CHECK(res.hit.id == 2);
    CHECK(std::abs(res.hit.s - 0.25) <= 1e-10);
}

TEST_CASE("events crossing together within event_tol are all reported") {
    const auto f = [](double, const ode::Vec<3>&) { return ode::Vec<3>{1.0, 1.0, 0.0}; };
    std::vector<ode::Event<3>> events{{4, [](const ode::Vec<3>& y) { return y[0] - 0.5; }},
                                      {9, [](const ode::Vec<3>& y) { return y[1] - 0.5; }}};
    const auto res = ode::integrate<3>(f, {0.0, 0.0, 0.0}, 1.0, events, ode::Config{});
    REQUIRE(res.outcome == ode::Outcome::EventHit);
    CHECK(res.hit.simultaneous.size() == 2);
    CHECK(std::abs(res.hit.s - 0.5) <= 1e-10);
}

TEST_CASE("dense interpolant converges at fourth order or better") {
    const ode::Vec<3> y0{1.0, 0.0, 1.0};
    std::vector<double> errs;
    for (double h : {0.4, 0.2, 0.1}) {
        const auto res = ode::integrate_to<3>(rotation_decay, y0, 2.0, fixed_step_config(h));
        double worst = 0.0;
        // Probe strictly between mesh points.
        for (int i = 0; i < 200; ++i) {
            const double s = 2.0 * (i + 0.37) / 200.0;
            worst = std::max(worst, max_err(res.trajectory.eval(s), rotation_decay_exact(s)));
        }
        errs.push_back(worst);
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        CHECK(std::log2(errs[i - 1] / errs[i]) >= 4.0);
    }
}

TEST_CASE("tolerance monotonicity against the closed form") {
    const ode::Vec<3> y0{1.0, 0.0, 1.0};
    double prev = std::numeric_limits<double>::infinity();
    double rtol = 1e-5;
    for (int k = 0; k < 12; ++k) {
        ode::Config cfg;
        cfg.rtol = rtol;
        cfg.atol = 1e-14;
        const auto res = ode::integrate_to<3>(rotation_decay, y0, 2.0, cfg);
        REQUIRE(res.outcome == ode::Outcome::ReachedEnd);
        const double err = max_err(res.trajectory.y_end(), rotation_decay_exact(2.0));
        CHECK(err <= prev);
        prev = err;
        rtol *= 0.5;
    }
}

TEST_CASE("determinism: identical inputs give bit-identical trajectories") {
    const Params params{Family::s2n(2), 1.0};
    const auto f = [&](double, const ode::Vec<3>& v) {
        const StateDeriv d = rhs(params, state_of(v));
        return ode::Vec<3>{d.dr, d.dtheta, d.dalpha};
    };
    const ode::Vec<3> y0{0.8, kPi / 4.0, -kPi / 2.0};
    const auto a = ode::integrate_to<3>(f, y0, 0.4, ode::Config{});
    const auto b = ode::integrate_to<3>(f, y0, 0.4, ode::Config{});
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
        CHECK(a.trajectory.sample_s(i) == b.trajectory.sample_s(i));
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(a.trajectory.sample_y(i)[c] == b.trajectory.sample_y(i)[c]);
        }
    }
}

TEST_CASE("distinct failure reports") {
    SUBCASE("step underflow") {
        const auto stiff = [](double, const ode::Vec<3>& y) {
            return ode::Vec<3>{-1e9 * y[0], 0.0, 0.0};
        };
        ode::Config cfg;
        cfg.h_min = 1e-2;
        cfg.h_init = 1e-2;
        const auto res = ode::integrate_to<3>(stiff, {1.0, 0.0, 0.0}, 1.0, cfg);
        CHECK(res.outcome == ode::Outcome::StepUnderflow);
        CHECK_FALSE(res.error.empty());
    }
    SUBCASE("step budget") {
        ode::Config cfg;
        cfg.max_steps = 5;
        const auto res = ode::integrate_to<3>(rotation_decay, {1.0, 0.0, 1.0}, 100.0, cfg);
        CHECK(res.outcome == ode::Outcome::MaxSteps);
    }
    SUBCASE("singular right-hand side") {
        const auto f = [](double, const ode::Vec<3>& y) -> ode::Vec<3> {
            if (y[0] > 0.3) throw SingularCoordinate("test singularity");
            return {1.0, 0.0, 0.0};
        };
        const auto res = ode::integrate_to<3>(f, {0.0, 0.0, 0.0}, 1.0, ode::Config{});
        CHECK(res.outcome == ode::Outcome::SingularRhs);
        CHECK(res.error == "test singularity");
    }
}

TEST_CASE("constant special solution stays constant at tight tolerance") {
    for (int n : {2, 3}) {
        for (double lambda : {1.0, 3.0}) {
            const Params p{Family::s2n(n), lambda};
            const double r_const = std::atan((2.0 * n - 1.0) / lambda);
            const auto f = [&](double, const ode::Vec<3>& v) {
                const StateDeriv d = rhs(p, state_of(v));
                return ode::Vec<3>{d.dr, d.dtheta, d.dalpha};
            };
            const auto res =
                ode::integrate_to<3>(f, {r_const, kPi / 4.0, kPi / 2.0}, 1.0, ode::Config{});
            REQUIRE(res.outcome == ode::Outcome::ReachedEnd);
            CHECK(std::abs(res.trajectory.y_end()[0] - r_const) <= 1e-9);
            CHECK(std::abs(res.trajectory.y_end()[2] - kPi / 2.0) <= 1e-9);
        }
    }
}

TEST_CASE("wall event on a real trajectory against the frozen reference") {
    // Fixed-step reference: s* and the exit angle of the r0 = 1.55 shot.
    const ShotResult s = shoot({Family::s2n(2), 1.0}, 1.55);
    CHECK(s.exit == ExitClass::RWall);
    CHECK(std::abs(s.state_exit.r - kPi / 2.0) <= 1e-10);
    CHECK(std::abs(s.s_star - 0.196610168766) <= 1e-7);
    CHECK(std::abs(s.state_exit.alpha - (-1.35479011001)) <= 1e-7);
    CHECK(s.state_exit.alpha < 0.0);
}
