#ifndef CMCSHOOT_VERIFY_HPP
#define CMCSHOOT_VERIFY_HPP

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cmcshoot/dynamics.hpp"
#include "cmcshoot/types.hpp"

namespace cmcshoot {

struct GeneratingCurve;  // assembly.hpp
struct ShotResult;       // shooting.hpp
struct ShootConfig;      // shooting.hpp

namespace ode {
template <std::size_t N>
class DenseTrajectory;
}

/// Fixed-step classical fourth-order integration. Deliberately adaptivity-free
/// and independent of the main engine; it certifies the engine and freezes
/// regression constants.
struct OracleConfig {
    double step = 1e-6;      // must be <= 1e-5 for oracle duty
    long store_every = 50;   // mesh thinning for stored samples
};

struct OracleSample {
    double s = 0.0;
    ShootingState state;
};

enum class OracleStop { Event, ReachedSEnd };

struct OracleRun {
    std::vector<OracleSample> samples;  // always includes s = 0 and the end state
    OracleStop stop = OracleStop::ReachedSEnd;
    EventId event = EventId::AlphaZero;  // valid when stop == Event
    double s_end = 0.0;
    ShootingState state_end;
};

using OracleRhs = std::function<StateDeriv(const ShootingState&)>;

/// Integrates an arbitrary 3-state system with fixed steps, stopping at the
/// first upward zero crossing of any event (localized by bisection on
/// single-substep probes) or at s_max.
OracleRun oracle_integrate_system(const OracleRhs& f, const ShootingState& y0, double s_max,
                                  std::span<const BoxEvent> events, const OracleConfig& cfg);

/// Family dynamics without events.
OracleRun oracle_integrate(const Params& params, const ShootingState& y0, double s_max,
                           const OracleConfig& cfg = {});

/// Reference shot from (r0, pi/4, -pi/2) in the family's shooting box.
OracleRun oracle_shoot(const Params& params, double r0, const OracleConfig& cfg = {});

/// Worst deviations |H - lambda| along a curve or trajectory, by two routes:
/// algebraic (alpha_prime from the ODE right-hand side) and finite-difference
/// (alpha_prime from central differences of alpha in arc length).
struct HCheck {
    double max_dev_algebraic = 0.0;
    double max_dev_finite_difference = 0.0;
    long skipped = 0;  // samples at singular coordinates

    double worst() const {
        return max_dev_algebraic > max_dev_finite_difference ? max_dev_algebraic
                                                             : max_dev_finite_difference;
    }
};

HCheck check_H(const GeneratingCurve& curve, const Params& params);
HCheck check_H(const ode::DenseTrajectory<3>& trajectory, const Params& params,
               long n_samples = 2048);

/// One checked bound at one grid point.
struct ClaimResult {
    std::string claim_id;
    std::string scope;  // family, n, lambda, r0
    bool pass = false;
    bool vacuous = false;    // hypotheses held but the implication never triggered
    double worst_margin = 0.0;  // >= 0 means pass; most negative violation otherwise
    double s_at = 0.0;          // arc length of the worst margin
    long sample_index = -1;     // trajectory sample of the worst margin
    std::string note;
};

struct ClaimGridPoint {
    Params params;
    double r0 = 0.0;
};

struct ClaimSuiteReport {
    std::vector<ClaimResult> results;
    std::map<std::string, std::string> statements;  // claim id -> checked property
    bool all_pass = true;
};

/// Default grid: n in {2,3,4}, lambda in {0.5, 1, 4/pi + 0.1, 2, 3, 5},
/// r0 small {0.005, 0.01} and within 0.02 of the family's upper endpoint,
/// for both families.
std::vector<ClaimGridPoint> default_claim_grid();

/// Shoots every grid point and evaluates each bound whose hypotheses the
/// point satisfies. Failures are data, not errors.
ClaimSuiteReport run_claim_suite(std::span<const ClaimGridPoint> grid, const ShootConfig& config);
ClaimSuiteReport run_claim_suite();

}  // namespace cmcshoot

#endif
