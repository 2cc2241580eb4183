#ifndef CMCSHOOT_ODE_HPP
#define CMCSHOOT_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cmcshoot/types.hpp"

namespace cmcshoot::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

struct Config {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-13;
    double h_max = 5e-2;
    long max_steps = 2000000;
    double event_tol = 1e-12;

    // Setting h_min == h_max == h_init turns off step control entirely.
    bool fixed_step() const { return h_min == h_max; }

    void validate() const {
        if (!(rtol > 0.0) || !(atol > 0.0)) throw InvalidParameter("rtol and atol must be > 0");
        if (!(h_min > 0.0) || !(h_min <= h_init) || !(h_init <= h_max)) {
            throw InvalidParameter("step sizes must satisfy 0 < h_min <= h_init <= h_max");
        }
        if (!(event_tol > 0.0)) throw InvalidParameter("event_tol must be > 0");
        if (max_steps <= 0) throw InvalidParameter("max_steps must be > 0");
    }
};

enum class Outcome { EventHit, ReachedEnd, StepUnderflow, MaxSteps, SingularRhs };

inline std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::EventHit: return "event";
        case Outcome::ReachedEnd: return "reached-end";
        case Outcome::StepUnderflow: return "step-underflow";
        case Outcome::MaxSteps: return "max-steps";
        case Outcome::SingularRhs: return "singular-rhs";
    }
    return "unknown";
}

template <std::size_t N>
struct Event {
    int id = 0;
    std::function<double(const Vec<N>&)> fn;
};

template <std::size_t N>
struct EventHit {
    int id = -1;
    double s = 0.0;
    Vec<N> state{};
    // Ids of all events localized within event_tol of s, in event-list order.
    std::vector<int> simultaneous;
};

namespace detail {
// Dormand-Prince 5(4) coefficients.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace detail

/// One accepted step with the coefficients of the quartic interpolant
/// (local error O(h^5), matching the step order within the step).
template <std::size_t N>
struct StepRecord {
    double s0 = 0.0;
    double h = 0.0;
    Vec<N> rc1{}, rc2{}, rc3{}, rc4{}, rc5{};

    Vec<N> eval(double frac) const {
        Vec<N> out{};
        const double omf = 1.0 - frac;
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = rc1[i] + frac * (rc2[i] + omf * (rc3[i] + frac * (rc4[i] + omf * rc5[i])));
        }
        return out;
    }
};

/// Piecewise-quartic continuous solution over the accepted mesh. The sample
/// list starts at s = 0 and is strictly increasing; eval() interpolates with
/// local error O(h^4) or better anywhere in [0, s_end].
template <std::size_t N>
class DenseTrajectory {
public:
    DenseTrajectory() = default;

    void start(const Vec<N>& y0) {
        mesh_s_.assign(1, 0.0);
        mesh_y_.assign(1, y0);
        steps_.clear();
        s_end_ = 0.0;
        y_end_ = y0;
        has_terminal_ = false;
    }

    void push_step(const StepRecord<N>& step, const Vec<N>& y1) {
        steps_.push_back(step);
        mesh_s_.push_back(step.s0 + step.h);
        mesh_y_.push_back(y1);
        s_end_ = step.s0 + step.h;
        y_end_ = y1;
    }

    // Cuts the trajectory at an event point inside the last accepted step.
    void truncate(double s_hit, const Vec<N>& y_hit) {
        while (!mesh_s_.empty() && mesh_s_.back() > s_hit) {
            mesh_s_.pop_back();
            mesh_y_.pop_back();
        }
        s_end_ = s_hit;
        y_end_ = y_hit;
        has_terminal_ = true;
    }

    double s_end() const { return s_end_; }
    const Vec<N>& y_end() const { return y_end_; }

    /// Accepted mesh points at or before s_end (first one at s = 0).
    std::size_t mesh_size() const { return mesh_s_.size(); }
    double mesh_s(std::size_t i) const { return mesh_s_[i]; }
    const Vec<N>& mesh_y(std::size_t i) const { return mesh_y_[i]; }

    /// Mesh plus the event-localized terminal point when one exists.
    std::size_t size() const { return mesh_s_.size() + (has_terminal_ ? 1 : 0); }
    double sample_s(std::size_t i) const { return i < mesh_s_.size() ? mesh_s_[i] : s_end_; }
    const Vec<N>& sample_y(std::size_t i) const {
        return i < mesh_y_.size() ? mesh_y_[i] : y_end_;
    }

    Vec<N> eval(double s) const {
        if (steps_.empty() || s <= 0.0) return mesh_y_.front();
        if (s >= s_end_) return y_end_;
        // Binary search for the step containing s.
        std::size_t lo = 0, hi = steps_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi + 1) / 2;
            if (steps_[mid].s0 <= s) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        const StepRecord<N>& st = steps_[lo];
        return st.eval((s - st.s0) / st.h);
    }

    const std::vector<StepRecord<N>>& steps() const { return steps_; }

private:
    std::vector<StepRecord<N>> steps_;
    std::vector<double> mesh_s_;
    std::vector<Vec<N>> mesh_y_;
    double s_end_ = 0.0;
    Vec<N> y_end_{};
    bool has_terminal_ = false;
};

template <std::size_t N>
struct Result {
    Outcome outcome = Outcome::ReachedEnd;
    DenseTrajectory<N> trajectory;
    EventHit<N> hit;
    long n_accepted = 0;
    long n_rejected = 0;
    std::string error;
};

/// Advances dy/ds = rhs(s, y) from y(0) = y0 with the embedded 5(4) pair
/// until the first upward zero crossing of any event function, or until
/// s_end. Crossings are localized on the dense interpolant by bisection to
/// within event_tol of arc length. Deterministic for fixed inputs. Step
/// underflow, step-budget exhaustion and singular right-hand sides are
/// reported as distinct outcomes.
template <std::size_t N, class RHS>
Result<N> integrate(RHS&& rhs, const Vec<N>& y0, double s_end, std::span<const Event<N>> events,
                    const Config& cfg) {
    using namespace detail;
    cfg.validate();
    if (!(s_end > 0.0)) throw InvalidParameter("s_end must be positive");

    Result<N> res;
    res.trajectory.start(y0);

    Vec<N> y = y0;
    double s = 0.0;
    double h_ctrl = std::clamp(cfg.h_init, cfg.h_min, cfg.h_max);
    double h = h_ctrl;

    std::vector<double> g_prev(events.size());
    try {
        for (std::size_t j = 0; j < events.size(); ++j) g_prev[j] = events[j].fn(y0);
    } catch (const SingularCoordinate& e) {
        res.outcome = Outcome::SingularRhs;
        res.error = e.what();
        return res;
    }

    Vec<N> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
    bool have_k1 = false;

    auto stage = [&](const Vec<N>& base, double frac, std::initializer_list<std::pair<const Vec<N>*, double>> terms) {
        Vec<N> arg{};
        for (std::size_t i = 0; i < N; ++i) {
            double acc = base[i];
            for (const auto& [k, w] : terms) acc += h * w * (*k)[i];
            arg[i] = acc;
        }
        return rhs(s + frac * h, arg);
    };

    long attempts = 0;
    while (s < s_end) {
        if (attempts >= cfg.max_steps) {
            res.outcome = Outcome::MaxSteps;
            res.error = "step budget exhausted";
            return res;
        }
        ++attempts;

        if (!cfg.fixed_step() && h_ctrl < cfg.h_min * (1.0 - 1e-12)) {
            res.outcome = Outcome::StepUnderflow;
            res.error = "step size underflow at s = " + std::to_string(s);
            return res;
        }
        h = std::min(h_ctrl, s_end - s);

        Vec<N> y1{}, err{};
        try {
            if (!have_k1) {
                k1 = rhs(s, y);
                have_k1 = true;
            }
            k2 = stage(y, c2, {{&k1, a21}});
            k3 = stage(y, c3, {{&k1, a31}, {&k2, a32}});
            k4 = stage(y, c4, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
            k5 = stage(y, c5, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
            k6 = stage(y, 1.0, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
            for (std::size_t i = 0; i < N; ++i) {
                y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                    a76 * k6[i]);
            }
            k7 = rhs(s + h, y1);
        } catch (const SingularCoordinate& e) {
            res.outcome = Outcome::SingularRhs;
            res.error = e.what();
            return res;
        }

        double err_norm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
            const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
            const double q = err[i] / sc;
            err_norm += q * q;
        }
        err_norm = std::sqrt(err_norm / static_cast<double>(N));

        if (!cfg.fixed_step() && !(err_norm <= 1.0)) {
            // Rejected: shrink and retry (also handles NaN error norms).
            double fac = 0.2;
            if (std::isfinite(err_norm) && err_norm > 0.0) {
                fac = std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
            }
            h_ctrl = h * fac;
            ++res.n_rejected;
            continue;
        }

        // Accepted: record dense coefficients.
        StepRecord<N> rec;
        rec.s0 = s;
        rec.h = h;
        for (std::size_t i = 0; i < N; ++i) {
            const double de = y1[i] - y[i];
            rec.rc1[i] = y[i];
            rec.rc2[i] = de;
            rec.rc3[i] = h * k1[i] - de;
            rec.rc4[i] = de - h * k7[i] - rec.rc3[i];
            rec.rc5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                              d7 * k7[i]);
        }
        res.trajectory.push_step(rec, y1);
        ++res.n_accepted;

        // Event scan over the accepted step.
        double best_frac = 2.0;
        int best_index = -1;
        std::vector<std::pair<int, double>> crossings;
        for (std::size_t j = 0; j < events.size(); ++j) {
            const double g1 = events[j].fn(y1);
            if (g_prev[j] < 0.0 && g1 >= 0.0) {
                double lo = 0.0, hi = 1.0;
                while ((hi - lo) * h > cfg.event_tol) {
                    const double mid = 0.5 * (lo + hi);
                    if (events[j].fn(rec.eval(mid)) < 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                crossings.emplace_back(static_cast<int>(j), hi);
                if (hi < best_frac) {
                    best_frac = hi;
                    best_index = static_cast<int>(j);
                }
            }
            g_prev[j] = g1;
        }

        if (best_index >= 0) {
            const double s_hit = s + best_frac * h;
            res.hit.id = events[static_cast<std::size_t>(best_index)].id;
            res.hit.s = s_hit;
            res.hit.state = rec.eval(best_frac);
            for (const auto& [j, frac] : crossings) {
                if (std::abs(frac - best_frac) * h <= cfg.event_tol) {
                    res.hit.simultaneous.push_back(events[static_cast<std::size_t>(j)].id);
                }
            }
            res.trajectory.truncate(s_hit, res.hit.state);
            res.outcome = Outcome::EventHit;
            return res;
        }

        s += h;
        y = y1;
        k1 = k7;  // FSAL

        if (!cfg.fixed_step()) {
            double fac = 10.0;
            if (err_norm > 0.0) fac = std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 10.0);
            h_ctrl = std::min(h * fac, cfg.h_max);
        } else {
            h_ctrl = cfg.h_min;
        }
    }

    res.outcome = Outcome::ReachedEnd;
    return res;
}

template <std::size_t N, class RHS>
Result<N> integrate_to(RHS&& rhs, const Vec<N>& y0, double s_end, const Config& cfg) {
    return integrate<N>(std::forward<RHS>(rhs), y0, s_end, std::span<const Event<N>>{}, cfg);
}

}  // namespace cmcshoot::ode

#endif
