#include <cmath>

#include "cmcshoot/verify.hpp"

namespace cmcshoot {

namespace {

const double kPi = std::acos(-1.0);

ShootingState axpy(const ShootingState& y, double h, const StateDeriv& k) {
    return {y.r + h * k.dr, y.theta + h * k.dtheta, y.alpha + h * k.dalpha};
}

ShootingState rk4_step(const OracleRhs& f, const ShootingState& y, double h) {
    const StateDeriv k1 = f(y);
    const StateDeriv k2 = f(axpy(y, 0.5 * h, k1));
    const StateDeriv k3 = f(axpy(y, 0.5 * h, k2));
    const StateDeriv k4 = f(axpy(y, h, k3));
    return {y.r + h / 6.0 * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr),
            y.theta + h / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta),
            y.alpha + h / 6.0 * (k1.dalpha + 2.0 * k2.dalpha + 2.0 * k3.dalpha + k4.dalpha)};
}

}  // namespace

OracleRun oracle_integrate_system(const OracleRhs& f, const ShootingState& y0, double s_max,
                                  std::span<const BoxEvent> events, const OracleConfig& cfg) {
    if (!(cfg.step > 0.0)) throw InvalidParameter("oracle step must be positive");
    if (!(s_max > 0.0)) throw InvalidParameter("oracle s_max must be positive");

    OracleRun run;
    run.samples.push_back({0.0, y0});

    std::vector<double> g_prev(events.size());
    for (std::size_t j = 0; j < events.size(); ++j) g_prev[j] = events[j].fn(y0);

    ShootingState y = y0;
    double s = 0.0;
    long step_index = 0;
    while (s < s_max) {
        const double h = std::min(cfg.step, s_max - s);
        const ShootingState y_next = rk4_step(f, y, h);

        // First upward crossing wins; localize by bisection on substeps from y.
        double best_delta = -1.0;
        std::size_t best_event = 0;
        for (std::size_t j = 0; j < events.size(); ++j) {
            const double g_new = events[j].fn(y_next);
            if (g_prev[j] < 0.0 && g_new >= 0.0) {
                double lo = 0.0, hi = h;
                for (int it = 0; it < 80 && (hi - lo) > 1e-16; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const ShootingState probe = rk4_step(f, y, mid);
                    if (events[j].fn(probe) < 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                if (best_delta < 0.0 || hi < best_delta) {
                    best_delta = hi;
                    best_event = j;
                }
            }
            g_prev[j] = g_new;
        }

        if (best_delta >= 0.0) {
            const ShootingState y_hit = rk4_step(f, y, best_delta);
            run.stop = OracleStop::Event;
            run.event = events[best_event].id;
            run.s_end = s + best_delta;
            run.state_end = y_hit;
            run.samples.push_back({run.s_end, y_hit});
            return run;
        }

        s += h;
        y = y_next;
        ++step_index;
        if (step_index % cfg.store_every == 0) run.samples.push_back({s, y});
    }

    run.stop = OracleStop::ReachedSEnd;
    run.s_end = s;
    run.state_end = y;
    if (run.samples.back().s != s) run.samples.push_back({s, y});
    return run;
}

OracleRun oracle_integrate(const Params& params, const ShootingState& y0, double s_max,
                           const OracleConfig& cfg) {
    const OracleRhs f = [&params](const ShootingState& y) { return rhs(params, y); };
    return oracle_integrate_system(f, y0, s_max, {}, cfg);
}

OracleRun oracle_shoot(const Params& params, double r0, const OracleConfig& cfg) {
    const double top = r0_upper(params.family.kind);
    if (!(r0 > 0.0) || !(r0 < top)) {
        throw InvalidParameter("r0 outside the admissible interval (0, " + std::to_string(top) + ")");
    }
    const OracleRhs f = [&params](const ShootingState& y) { return rhs(params, y); };
    const auto events = box_events(box_for(params.family.kind));
    const double s_max = 2.0 * kPi / params.lambda + 5.0;
    return oracle_integrate_system(f, {r0, kPi / 4.0, -kPi / 2.0}, s_max, events, cfg);
}

}  // namespace cmcshoot
