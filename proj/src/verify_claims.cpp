#include <cmath>
#include <sstream>

#include "cmcshoot/assembly.hpp"
#include "cmcshoot/geometry.hpp"
#include "cmcshoot/shooting.hpp"
#include "cmcshoot/verify.hpp"

namespace cmcshoot {

namespace {

const double kPi = std::acos(-1.0);

double h_algebraic_dev(const Params& params, const ShootingState& st, long& skipped) {
    try {
        const double h = mean_curvature(params.family, st, rhs_alpha(params, st));
        return std::abs(h - params.lambda);
    } catch (const SingularCoordinate&) {
        ++skipped;
        return 0.0;
    }
}

double h_fd_dev(const Params& params, const ShootingState& st, double alpha_prime_fd,
                long& skipped) {
    try {
        const double h = mean_curvature(params.family, st, alpha_prime_fd);
        return std::abs(h - params.lambda);
    } catch (const SingularCoordinate&) {
        ++skipped;
        return 0.0;
    }
}

// Five-point central difference, fourth order.
double central_diff(double am2, double am1, double ap1, double ap2, double h) {
    return (-ap2 + 8.0 * ap1 - 8.0 * am1 + am2) / (12.0 * h);
}

}  // namespace

HCheck check_H(const GeneratingCurve& curve, const Params& params) {
    HCheck out;
    const std::size_t n = curve.samples.size();
    if (n < 6) throw InvalidParameter("curve has too few samples for curvature checks");

    for (const CurveSample& cs : curve.samples) {
        const ShootingState st{cs.r, cs.theta, cs.alpha};
        out.max_dev_algebraic =
            std::max(out.max_dev_algebraic, h_algebraic_dev(params, st, out.skipped));
    }

    // Closed-curve finite differences: periodic indexing with the tangent
    // angle continued by its total winding over one loop.
    const std::size_t m = n - 1;  // last sample duplicates the first
    const double h = curve.length / static_cast<double>(m);
    const double winding = curve.samples[m].alpha - curve.samples[0].alpha;
    const auto alpha_at = [&](long i) {
        double shift = 0.0;
        while (i < 0) {
            i += static_cast<long>(m);
            shift -= winding;
        }
        while (i >= static_cast<long>(m)) {
            i -= static_cast<long>(m);
            shift += winding;
        }
        return curve.samples[static_cast<std::size_t>(i)].alpha + shift;
    };
    for (long i = 0; i < static_cast<long>(m); ++i) {
        const CurveSample& cs = curve.samples[static_cast<std::size_t>(i)];
        const double ap = central_diff(alpha_at(i - 2), alpha_at(i - 1), alpha_at(i + 1),
                                       alpha_at(i + 2), h);
        const ShootingState st{cs.r, cs.theta, cs.alpha};
        out.max_dev_finite_difference =
            std::max(out.max_dev_finite_difference, h_fd_dev(params, st, ap, out.skipped));
    }
    return out;
}

HCheck check_H(const ode::DenseTrajectory<3>& trajectory, const Params& params, long n_samples) {
    if (n_samples < 8) throw InvalidParameter("need at least 8 samples for curvature checks");
    HCheck out;
    const double h = trajectory.s_end() / static_cast<double>(n_samples);
    std::vector<ShootingState> states;
    states.reserve(static_cast<std::size_t>(n_samples) + 1);
    for (long i = 0; i <= n_samples; ++i) {
        states.push_back(state_of(trajectory.eval(h * static_cast<double>(i))));
    }
    for (const ShootingState& st : states) {
        out.max_dev_algebraic =
            std::max(out.max_dev_algebraic, h_algebraic_dev(params, st, out.skipped));
    }
    for (long i = 2; i + 2 <= n_samples; ++i) {
        const auto& st = states[static_cast<std::size_t>(i)];
        const double ap =
            central_diff(states[static_cast<std::size_t>(i - 2)].alpha,
                         states[static_cast<std::size_t>(i - 1)].alpha,
                         states[static_cast<std::size_t>(i + 1)].alpha,
                         states[static_cast<std::size_t>(i + 2)].alpha, h);
        out.max_dev_finite_difference =
            std::max(out.max_dev_finite_difference, h_fd_dev(params, st, ap, out.skipped));
    }
    return out;
}

namespace {

std::string scope_string(const ClaimGridPoint& g) {
    std::ostringstream os;
    os << "family=" << to_string(g.params.family.kind) << " n=" << g.params.family.n
       << " lambda=" << g.params.lambda << " r0=" << g.r0;
    return os.str();
}

ClaimResult from_monitor(const MonitorEntry& m, const ClaimGridPoint& g) {
    ClaimResult c;
    c.claim_id = m.id;
    c.scope = scope_string(g);
    c.pass = m.pass || m.vacuous;
    c.vacuous = m.vacuous;
    c.worst_margin = std::isfinite(m.margin) ? m.margin : 0.0;
    c.s_at = m.s_worst;
    c.sample_index = m.index_worst;
    c.note = m.note;
    return c;
}

ClaimResult class_claim(const std::string& id, const ClaimGridPoint& g, const ShotResult& shot,
                        ExitClass expected, double margin, bool margin_ok,
                        const std::string& note) {
    ClaimResult c;
    c.claim_id = id;
    c.scope = scope_string(g);
    c.pass = shot.exit == expected && margin_ok;
    c.worst_margin = margin;
    c.s_at = shot.s_star;
    c.note = shot.exit == expected ? note : "exit " + to_string(shot.exit) + ", expected " +
                                                to_string(expected);
    return c;
}

// Operational threshold for "initial radius sufficiently close to the upper
// endpoint": within 0.05 of it.
bool near_top(const ClaimGridPoint& g) {
    return g.r0 >= r0_upper(g.params.family.kind) - 0.05;
}

// Steep-exit bound used by the wall claims of the flat-lambda case: with
// delta = pi/4 - arccos(cot r0) and b = tan(2 delta), the exit angle is at
// most this value; the claim applies when delta <= 1/(6n) and the bound is
// below -pi/4.
double wall_exit_angle_bound(int n, double r0) {
    const double delta = kPi / 4.0 - std::acos(1.0 / std::tan(r0));
    const double b = std::tan(2.0 * delta);
    const double y1 = std::tan(0.25);
    return (2.0 * n - 1.0) * (b * b + 1.0) * delta - b * std::log((b + 1.0) / 2.0) - kPi / 2.0 +
           std::log(1.0 + (1.0 - y1) / (1.0 + y1) * b) / b;
}

}  // namespace

std::vector<ClaimGridPoint> default_claim_grid() {
    const std::vector<int> ns{2, 3, 4};
    const std::vector<double> lambdas{0.5, 1.0, 4.0 / kPi + 0.1, 2.0, 3.0, 5.0};
    std::vector<ClaimGridPoint> grid;
    for (FamilyKind kind : {FamilyKind::S2n, FamilyKind::S3nMinus1}) {
        const double top = r0_upper(kind);
        for (int n : ns) {
            const Family family =
                kind == FamilyKind::S2n ? Family::s2n(n) : Family::s3n_minus_1(n);
            for (double lambda : lambdas) {
                for (double r0 : {0.005, 0.01, top - 0.02, top - 0.01}) {
                    grid.push_back({Params{family, lambda}, r0});
                }
            }
        }
    }
    return grid;
}

ClaimSuiteReport run_claim_suite(std::span<const ClaimGridPoint> grid,
                                 const ShootConfig& config) {
    ClaimSuiteReport report;
    report.statements = {
        {"lemma-3.1", "inside the S2n box: dr/ds >= 0, dtheta/ds <= 0, dalpha/ds > 0 at every "
                      "accepted step"},
        {"lemma-3.2", "steep target, small r0: the trajectory exits via {alpha = 0}"},
        {"lemma-3.3", "steep target, r0 with 1/(lambda sin r0) < pi/4: theta stays at or above "
                      "pi/4 - 1/(lambda sin r0)"},
        {"lemma-3.4", "steep target, r0 near pi/2: the trajectory exits via {r = pi/2}"},
        {"lemma-3.5", "flat target, r0 < pi/4: once r doubles, theta < pi/4 - 1/(6n)"},
        {"lemma-3.6", "flat target, c_n r0 < pi/2: exit via {alpha = 0} with r(s*) <= c_n r0"},
        {"lemma-3.7", "r0 near pi/2: the trajectory exits via {r = pi/2} (holds for every "
                      "lambda > 0)"},
        {"remark-3.8", "every S2n shot satisfies s* <= pi/(2 lambda)"},
        {"lemma-4.1", "inside the S3n-1 box: dr/ds >= 0, dtheta/ds <= 0, dalpha/ds > 0 at every "
                      "accepted step"},
        {"lemma-4.2", "lambda > 2, r0 + 1/lambda < pi/4: exit via {alpha = 0}"},
        {"lemma-4.3", "lambda > 2, r0 with 1/(lambda sin r0) < pi/4: theta stays at or above "
                      "pi/4 - 1/(lambda sin r0)"},
        {"lemma-4.4", "lambda > 2, r0 near arctan(sqrt 2): exit via {tan r cos theta = 1} with "
                      "alpha(s*) < -pi/4"},
        {"lemma-4.5", "lambda <= 2, r0 < pi/8: once r doubles, theta < pi/4 - 1/(6n)"},
        {"lemma-4.6", "lambda <= 2, c_n r0 < pi/4: exit via {alpha = 0} with r(s*) <= c_n r0"},
        {"lemma-4.7", "lambda <= 2, r0 near arctan(sqrt 2) with the steep-exit bound below "
                      "-pi/4: exit via {tan r cos theta = 1} with alpha(s*) < -pi/4"},
    };

    for (const ClaimGridPoint& g : grid) {
        const bool s2n = g.params.family.kind == FamilyKind::S2n;
        const int n = g.params.family.n;
        const double lambda = g.params.lambda;
        const ShotResult shot = shoot(g.params, g.r0, config);
        const double alpha_exit = shot.state_exit.alpha;

        report.results.push_back(from_monitor(shot.monitors.monotonicity, g));
        if (shot.monitors.theta_floor.applicable) {
            report.results.push_back(from_monitor(shot.monitors.theta_floor, g));
        }
        if (shot.monitors.two_radius.applicable) {
            report.results.push_back(from_monitor(shot.monitors.two_radius, g));
        }
        if (shot.monitors.exit_radius.applicable) {
            report.results.push_back(from_monitor(shot.monitors.exit_radius, g));
        }
        if (shot.monitors.arc_length.applicable) {
            report.results.push_back(from_monitor(shot.monitors.arc_length, g));
        }

        if (s2n) {
            if (lambda > 4.0 / kPi && g.r0 < kPi / 4.0) {
                report.results.push_back(
                    class_claim("lemma-3.2", g, shot, ExitClass::AlphaZero, 1.0, true, ""));
            }
            if (lambda > 4.0 / kPi && near_top(g)) {
                report.results.push_back(
                    class_claim("lemma-3.4", g, shot, ExitClass::RWall, 1.0, true, ""));
            }
            if (near_top(g)) {
                report.results.push_back(class_claim("lemma-3.7", g, shot, ExitClass::RWall, 1.0,
                                                     true, "scope: every lambda > 0"));
            }
        } else {
            if (lambda > 2.0 && g.r0 + 1.0 / lambda < kPi / 4.0) {
                report.results.push_back(
                    class_claim("lemma-4.2", g, shot, ExitClass::AlphaZero, 1.0, true, ""));
            }
            if (lambda > 2.0 && near_top(g)) {
                report.results.push_back(class_claim("lemma-4.4", g, shot, ExitClass::GammaWall,
                                                     -kPi / 4.0 - alpha_exit,
                                                     alpha_exit < -kPi / 4.0, ""));
            }
            if (lambda <= 2.0 && near_top(g)) {
                const double delta = kPi / 4.0 - std::acos(1.0 / std::tan(g.r0));
                const double bound = wall_exit_angle_bound(n, g.r0);
                if (delta <= 1.0 / (6.0 * n) && bound < -kPi / 4.0) {
                    report.results.push_back(class_claim("lemma-4.7", g, shot,
                                                         ExitClass::GammaWall,
                                                         -kPi / 4.0 - alpha_exit,
                                                         alpha_exit < -kPi / 4.0, ""));
                }
            }
        }
    }

    for (const ClaimResult& c : report.results) {
        if (!c.pass) report.all_pass = false;
    }
    return report;
}

ClaimSuiteReport run_claim_suite() {
    const auto grid = default_claim_grid();
    return run_claim_suite(grid, ShootConfig{});
}

}  // namespace cmcshoot
