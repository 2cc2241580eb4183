#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cmcshoot/assembly.hpp"
#include "cmcshoot/io.hpp"
#include "cmcshoot/shooting.hpp"
#include "cmcshoot/verify.hpp"
#include "helpers.hpp"

using namespace cmcshoot;
using test::kPi;

TEST_CASE("oracle: constant solution drift at fixed step") {
    const Params p{Family::s2n(2), 3.0};
    const double r_const = std::atan((2.0 * 2 - 1.0) / 3.0);
    OracleConfig cfg;
    cfg.step = 1e-6;
    cfg.store_every = 100000;
    const OracleRun run = oracle_integrate(p, {r_const, kPi / 4.0, kPi / 2.0}, 1.0, cfg);
    CHECK(run.stop == OracleStop::ReachedSEnd);
    CHECK(std::abs(run.state_end.r - r_const) <= 1e-10);
    CHECK(std::abs(run.state_end.alpha - kPi / 2.0) <= 1e-10);
}

TEST_CASE("oracle: classical fourth-order step-halving ratio") {
    // Step halving doubles as the cross-validation route for the three-block
    // family, which has no transformed phase system.
    for (FamilyKind kind : {FamilyKind::S2n, FamilyKind::S3nMinus1}) {
        const Params p{test::family_of(kind, 2), 1.0};
        const ShootingState y0{kind == FamilyKind::S2n ? 1.0 : 0.6, kPi / 4.0, -kPi / 2.0};
        const double span = kind == FamilyKind::S2n ? 0.5 : 0.25;
        const auto end_r = [&](double step) {
            OracleConfig cfg;
            cfg.step = step;
            cfg.store_every = 1000000;
            return oracle_integrate(p, y0, span, cfg).state_end;
        };
        const ShootingState ref = end_r(1e-5);
        const auto err = [&](double step) {
            const ShootingState e = end_r(step);
            return std::max({std::abs(e.r - ref.r), std::abs(e.theta - ref.theta),
                             std::abs(e.alpha - ref.alpha)});
        };
        // Steps chosen so truncation error sits well above the roundoff floor.
        const double e1 = err(8e-3), e2 = err(4e-3), e3 = err(2e-3);
        CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
        CHECK(e2 / e3 == doctest::Approx(16.0).epsilon(0.25));
    }
}

TEST_CASE("oracle: configuration validation") {
    OracleConfig bad;
    bad.step = 0.0;
    CHECK_THROWS_AS(oracle_integrate({Family::s2n(2), 1.0}, {0.5, kPi / 4.0, -kPi / 2.0}, 1.0,
                                     bad),
                    InvalidParameter);
    CHECK_THROWS_AS(oracle_shoot({Family::s2n(2), 1.0}, 2.0), InvalidParameter);
}

TEST_CASE("adaptive engine agrees with the oracle on random shots") {
    std::mt19937_64 rng(606);
    OracleConfig ocfg;
    ocfg.step = 1e-5;
    ocfg.store_every = 25;
    for (int trial = 0; trial < 10; ++trial) {
        const FamilyKind kind = trial % 2 == 0 ? FamilyKind::S2n : FamilyKind::S3nMinus1;
        const int n = 2 + static_cast<int>(rng() % 3);
        const double lambda = test::uniform(rng, 0.5, 4.0);
        const double top = r0_upper(kind);
        const double r0 = test::uniform(rng, 0.15, top - 0.05);
        const Params p{test::family_of(kind, n), lambda};

        const OracleRun o = oracle_shoot(p, r0, ocfg);
        const ShotResult s = shoot(p, r0);
        REQUIRE(o.stop == OracleStop::Event);
        CHECK(static_cast<int>(o.event) == static_cast<int>(s.exit));

        double sup = 0.0;
        for (const OracleSample& q : o.samples) {
            if (q.s > s.trajectory.s_end()) break;
            const ShootingState a = state_of(s.trajectory.eval(q.s));
            sup = std::max({sup, std::abs(a.r - q.state.r), std::abs(a.theta - q.state.theta),
                            std::abs(a.alpha - q.state.alpha)});
        }
        CHECK(sup <= 1e-8);
        CHECK(std::abs(o.s_end - s.s_star) <= 1e-7);
    }
}

TEST_CASE("check_H: algebraic route is an identity, finite differences stay tight") {
    const Params p{Family::s2n(2), 1.0};
    const ShotResult s = shoot(p, 1.0);
    const HCheck ht = check_H(s.trajectory, p);
    CHECK(ht.max_dev_algebraic <= 1e-12);
    CHECK(ht.max_dev_finite_difference <= 1e-6);

    const SolveResult solved = solve_generating_arc(p, 1e-12);
    const HCheck hc = check_H(assemble(p, solved.shot), p);
    CHECK(hc.max_dev_algebraic <= 1e-12);
    CHECK(hc.max_dev_finite_difference <= 1e-6);
    CHECK(hc.skipped == 0);
}

TEST_CASE("check_H: constant-radius sphere solution") {
    const Params p{Family::s2n(2), 3.0};
    const double r_const = std::atan(3.0 / 3.0);
    const auto f = [&](double, const ode::Vec<3>& v) {
        const StateDeriv d = rhs(p, state_of(v));
        return ode::Vec<3>{d.dr, d.dtheta, d.dalpha};
    };
    // Stop before theta reaches pi/2: curvature evaluation is ill-conditioned
    // against tangent-angle rounding next to that pole, and the contract puts
    // singularity avoidance on the caller.
    const auto res =
        ode::integrate_to<3>(f, {r_const, kPi / 4.0, kPi / 2.0}, 0.5, ode::Config{});
    REQUIRE(res.outcome == ode::Outcome::ReachedEnd);
    const HCheck h = check_H(res.trajectory, p);
    CHECK(h.max_dev_algebraic <= 1e-10);
    CHECK(h.max_dev_finite_difference <= 1e-10);
}

TEST_CASE("claim suite: default grid passes with anchored statements") {
    const ClaimSuiteReport report = run_claim_suite();
    CHECK(report.all_pass);
    CHECK_FALSE(report.results.empty());

    // Every result resolves to exactly one recorded statement; no orphans.
    for (const ClaimResult& c : report.results) {
        CHECK(report.statements.count(c.claim_id) == 1);
        if (!c.pass) {
            MESSAGE("failed claim ", c.claim_id, " at ", c.scope, " margin ", c.worst_margin);
        }
    }

    // The two-block monotonicity claim covers every grid point of its family.
    std::size_t mono_s2n = 0, mono_s3n = 0;
    for (const ClaimResult& c : report.results) {
        if (c.claim_id == "lemma-3.1") ++mono_s2n;
        if (c.claim_id == "lemma-4.1") ++mono_s3n;
    }
    CHECK(mono_s2n == 72);
    CHECK(mono_s3n == 72);

    // Wall claims are present for the near-top radii of every lambda.
    std::set<std::string> seen;
    for (const ClaimResult& c : report.results) seen.insert(c.claim_id);
    for (const char* id : {"lemma-3.2", "lemma-3.3", "lemma-3.4", "lemma-3.5", "lemma-3.6",
                           "lemma-3.7", "remark-3.8", "lemma-4.2", "lemma-4.3", "lemma-4.4",
                           "lemma-4.5", "lemma-4.6", "lemma-4.7"}) {
        CHECK(seen.count(id) == 1);
    }
}

TEST_CASE("claim suite: report serialization is byte-stable") {
    const auto grid = default_claim_grid();
    ShootConfig cfg;
    const std::string a = io::claims_json(run_claim_suite(grid, cfg)).dump(2);
    const std::string b = io::claims_json(run_claim_suite(grid, cfg)).dump(2);
    CHECK(a == b);
}

TEST_CASE("oracle agreement across every suite trajectory") {
    OracleConfig ocfg;
    ocfg.step = 1e-5;
    ocfg.store_every = 200;
    for (const ClaimGridPoint& g : default_claim_grid()) {
        const OracleRun o = oracle_shoot(g.params, g.r0, ocfg);
        const ShotResult s = shoot(g.params, g.r0);
        double sup = 0.0;
        for (const OracleSample& q : o.samples) {
            if (q.s > s.trajectory.s_end()) break;
            const ShootingState a = state_of(s.trajectory.eval(q.s));
            sup = std::max({sup, std::abs(a.r - q.state.r), std::abs(a.theta - q.state.theta),
                            std::abs(a.alpha - q.state.alpha)});
        }
        CHECK(sup <= 1e-7);
    }
}
