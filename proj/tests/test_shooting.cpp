#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cmcshoot/geometry.hpp"
#include "cmcshoot/shooting.hpp"
#include "cmcshoot/verify.hpp"
#include "helpers.hpp"

using namespace cmcshoot;
using test::kPi;

namespace {

// Initial radii located by class/residual bisection on the fixed-step
// reference integrator (step 2e-6, tolerance 1e-9), frozen before the
// adaptive path was built.
constexpr double kRefR0StarS2nN2L1 = 1.21609007528;
constexpr double kRefR0StarS2nN3L1 = 1.29178681093;
constexpr double kRefR0StarS2nN2L5 = 1.39465343677;
constexpr double kRefR0StarS3nN2L1 = 0.653876616602;
constexpr double kRefR0StarS3nN2L3 = 0.734771578135;
constexpr double kRefClassBoundaryS3nN2L1 = 0.593323556345;

}  // namespace

TEST_CASE("shoot: small-radius exit with the exit-radius factor bound") {
    const Params p{Family::s2n(2), 1.0};
    const ShotResult s = shoot(p, 0.005);
    CHECK(s.exit == ExitClass::AlphaZero);
    const double c2 = exit_radius_factor(2);
    CHECK(c2 == doctest::Approx(213.11286606688222).epsilon(1e-12));
    CHECK(s.state_exit.r <= c2 * 0.005);
    // Fixed-step reference values for the same shot (step 1e-6).
    CHECK(std::abs(s.s_star - 0.00347282512273) <= 1e-9);
    CHECK(std::abs(s.state_exit.r - 0.00745277803243) <= 1e-7);
    CHECK(std::abs(s.state_exit.theta - 0.434144656063) <= 1e-7);
    CHECK(s.monitors.exit_radius.applicable);
    CHECK(s.monitors.exit_radius.pass);
    CHECK(s.monitors.monotonicity.pass);
    CHECK(s.monitors.arc_length.pass);
}

TEST_CASE("shoot: large radius reaches the r wall") {
    const Params p{Family::s2n(2), 1.0};
    const ShotResult s = shoot(p, 1.55);
    CHECK(s.exit == ExitClass::RWall);
    CHECK(s.state_exit.alpha < 0.0);
    CHECK(s.monitors.monotonicity.pass);
}

TEST_CASE("shoot: three-block family reaches the gamma wall steeply") {
    const Params p{Family::s3n_minus_1(2), 3.0};
    const ShotResult s = shoot(p, 0.95);
    CHECK(s.exit == ExitClass::GammaWall);
    CHECK(s.state_exit.alpha < -kPi / 4.0);
    CHECK(std::abs(s.s_star - 0.00899694730279) <= 1e-8);
    CHECK(std::abs(s.state_exit.alpha - (-1.53708436765)) <= 1e-7);
    CHECK(wall_residual(p, s.state_exit) <= 1e-10);
}

TEST_CASE("shoot: precondition violations") {
    CHECK_THROWS_AS(shoot({Family::s2n(2), 1.0}, 0.0), InvalidParameter);
    CHECK_THROWS_AS(shoot({Family::s2n(2), 1.0}, kPi / 2.0), InvalidParameter);
    CHECK_THROWS_AS(shoot({Family::s3n_minus_1(2), 1.0}, 1.0), InvalidParameter);
    CHECK_THROWS_AS(shoot({Family::s2n(2), 0.0}, 0.5), InvalidParameter);
    CHECK_THROWS_AS(shoot({Family::s2n(2), -1.0}, 0.5), InvalidParameter);
}

TEST_CASE("shoot: exhausted step budget surfaces as an exit class") {
    ShootConfig cfg;
    cfg.ode.max_steps = 10;
    const ShotResult s = shoot({Family::s2n(2), 1.0}, 0.8, cfg);
    CHECK(s.exit == ExitClass::Budget);
    CHECK(s.outcome == ode::Outcome::MaxSteps);
}

TEST_CASE("shoot: theta-guard crossing surfaces as an exit class") {
    // An artificially raised guard makes every trajectory trip it.
    ShootConfig cfg;
    cfg.theta_min = 0.7;
    const ShotResult s = shoot({Family::s2n(2), 1.0}, 0.8, cfg);
    CHECK(s.exit == ExitClass::ThetaGuardFault);
    CHECK(std::abs(s.state_exit.theta - 0.7) <= 1e-10);
}

TEST_CASE("bracket: both exit classes located for several regimes") {
    {
        const Params p{Family::s2n(2), 1.0};
        const BracketResult br = bracket(p);
        CHECK(br.r0_low < br.r0_high);
        CHECK(shoot(p, br.r0_low).exit == ExitClass::AlphaZero);
        CHECK(shoot(p, br.r0_high).exit == ExitClass::RWall);
        // The pair (0.005, 1.55) is itself a valid bracket for this regime.
        CHECK(shoot(p, 0.005).exit == ExitClass::AlphaZero);
        CHECK(shoot(p, 1.55).exit == ExitClass::RWall);
    }
    {
        const Params p{Family::s2n(2), 2.0};
        const BracketResult br = bracket(p);
        CHECK(br.r0_low < kPi / 4.0);
        CHECK(std::sin(br.r0_high) > 4.0 / (kPi * 2.0));
        CHECK(shoot(p, br.r0_high).exit == ExitClass::RWall);
    }
    {
        const Params p{Family::s3n_minus_1(2), 1.0};
        const BracketResult br = bracket(p);
        CHECK(shoot(p, br.r0_low).exit == ExitClass::AlphaZero);
        CHECK(shoot(p, br.r0_high).exit == ExitClass::GammaWall);
    }
    // Degenerate mean-curvature targets are rejected before any scan runs.
    CHECK_THROWS_AS(bracket({Family::s2n(2), 0.0}), InvalidParameter);
    CHECK_THROWS_AS(bracket({Family::s2n(2), -2.0}), InvalidParameter);
}

TEST_CASE("solve: corner hit for the two-block family") {
    const Params p{Family::s2n(2), 1.0};
    const SolveResult res = solve_generating_arc(p, 1e-10);
    CHECK(res.converged);
    CHECK(res.residual_alpha <= 1e-6);
    CHECK(res.residual_wall <= 1e-6);
    CHECK(std::abs(res.r0_star - kRefR0StarS2nN2L1) <= 1e-6);
    CHECK(res.r0_star > 0.005);
    CHECK(res.r0_star < 1.55);
    CHECK(res.shot.monitors.all_pass());
}

TEST_CASE("solve: corner hit, n = 3") {
    const SolveResult res = solve_generating_arc({Family::s2n(3), 1.0}, 1e-10);
    CHECK(res.converged);
    CHECK(res.residual_alpha <= 1e-6);
    CHECK(res.residual_wall <= 1e-6);
    CHECK(std::abs(res.r0_star - kRefR0StarS2nN3L1) <= 1e-6);
}

TEST_CASE("solve: corner hit at lambda = 5 with the arc-length cap") {
    const SolveResult res = solve_generating_arc({Family::s2n(2), 5.0}, 1e-12);
    CHECK(res.converged);
    CHECK(std::abs(res.r0_star - kRefR0StarS2nN2L5) <= 1e-6);
    CHECK(4.0 * res.shot.s_star <= 2.0 * kPi / 5.0);
}

TEST_CASE("solve: orthogonal hit for the three-block family") {
    const Params p{Family::s3n_minus_1(2), 1.0};
    const SolveResult res = solve_generating_arc(p, 1e-10);
    CHECK(res.converged);
    CHECK(res.shot.exit == ExitClass::GammaWall);
    CHECK(res.residual_alpha <= 1e-6);
    CHECK(std::abs(res.r0_star - kRefR0StarS3nN2L1) <= 1e-6);

    // Sanity of the stage-2 sign convention: just above the class boundary
    // the wall exit happens near {alpha = 0}, above the mirror's own angle.
    const ShotResult near_boundary = shoot(p, kRefClassBoundaryS3nN2L1 + 1e-4);
    CHECK(near_boundary.exit == ExitClass::GammaWall);
    const double h = near_boundary.state_exit.alpha -
                     beta_angle(near_boundary.state_exit.point());
    CHECK(h >= -1e-6);
}

TEST_CASE("solve: orthogonal hit at lambda = 3") {
    const SolveResult res = solve_generating_arc({Family::s3n_minus_1(2), 3.0}, 1e-10);
    CHECK(res.converged);
    CHECK(res.shot.exit == ExitClass::GammaWall);
    CHECK(res.residual_alpha <= 1e-6);
    CHECK(std::abs(res.r0_star - kRefR0StarS3nN2L3) <= 1e-6);
}

TEST_CASE("solve: invalid inputs") {
    CHECK_THROWS_AS(solve_generating_arc({Family::s2n(2), 1.0}, 0.0), InvalidParameter);
}

TEST_CASE("solve: bisection determinism is bit-exact") {
    const Params p{Family::s2n(2), 1.0};
    const SolveResult a = solve_generating_arc(p, 1e-10);
    const SolveResult b = solve_generating_arc(p, 1e-10);
    CHECK(a.r0_star == b.r0_star);
    CHECK(a.shot.s_star == b.shot.s_star);
    CHECK(a.shot.state_exit.alpha == b.shot.state_exit.alpha);
    CHECK(a.shot.state_exit.theta == b.shot.state_exit.theta);
}

TEST_CASE("monitors: theta floor for steep targets") {
    const Params p{Family::s2n(2), 2.0};
    const ShotResult s = shoot(p, 1.5);
    REQUIRE(s.monitors.theta_floor.applicable);
    CHECK(s.monitors.theta_floor.pass);
    const double floor = kPi / 4.0 - 1.0 / (2.0 * std::sin(1.5));
    CHECK(s.state_exit.theta >= floor - 1e-8);

    // Not applicable below the case split.
    const ShotResult t = shoot({Family::s2n(2), 1.0}, 1.5);
    CHECK_FALSE(t.monitors.theta_floor.applicable);
}

TEST_CASE("monitors: arc-length cap applies to every two-block shot") {
    for (double r0 : {0.01, 0.7, 1.5}) {
        const ShotResult s = shoot({Family::s2n(2), 1.0}, r0);
        REQUIRE(s.monitors.arc_length.applicable);
        CHECK(s.monitors.arc_length.pass);
        CHECK(s.s_star <= kPi / 2.0 + 1e-8);
    }
    const ShotResult t = shoot({Family::s3n_minus_1(2), 1.0}, 0.5);
    CHECK_FALSE(t.monitors.arc_length.applicable);
}

TEST_CASE("monitors: doubling implication is vacuous when r never doubles") {
    const ShotResult s = shoot({Family::s2n(2), 1.0}, 0.3);
    REQUIRE(s.monitors.two_radius.applicable);
    CHECK(s.monitors.two_radius.vacuous);
    CHECK(s.monitors.all_pass());
}
