#ifndef CMCSHOOT_SHOOTING_HPP
#define CMCSHOOT_SHOOTING_HPP

#include <limits>
#include <string>
#include <vector>

#include "cmcshoot/dynamics.hpp"
#include "cmcshoot/ode.hpp"
#include "cmcshoot/types.hpp"

namespace cmcshoot {

/// Which face of the shooting box a trajectory first reached. RWall occurs
/// only for S2n, GammaWall only for S3nMinus1. ThetaGuardFault flags a
/// crossing of the theta guard (an integration fault, not geometry); Budget
/// flags an exhausted arc-length or step budget.
enum class ExitClass { AlphaZero, RWall, GammaWall, ThetaGuardFault, Budget };

std::string to_string(ExitClass exit);

/// One runtime-checked bound along a shot. `margin` is the worst slack seen
/// (>= 0 passing); the worst point is identified by arc length and sample
/// index. Non-applicable entries mean the bound's hypotheses exclude the run.
struct MonitorEntry {
    std::string id;
    bool applicable = false;
    bool vacuous = false;
    bool pass = true;
    double margin = std::numeric_limits<double>::infinity();
    double s_worst = 0.0;
    long index_worst = -1;
    std::string note;
};

struct MonitorReport {
    MonitorEntry monotonicity;  // sign structure of the flow inside the box
    MonitorEntry theta_floor;   // theta lower bound for steep targets
    MonitorEntry two_radius;    // doubling r forces theta below pi/4 - 1/(6n)
    MonitorEntry exit_radius;   // small-r0 exits bounded by c_n * r0
    MonitorEntry arc_length;    // s* <= pi / (2 lambda), S2n only

    std::vector<const MonitorEntry*> entries() const;
    bool all_pass() const;  // over applicable entries
};

/// Exit-radius constant c_n = 2 exp(pi / (4n-4) * cot(1/(3n))).
double exit_radius_factor(int n);

struct ShootConfig {
    ode::Config ode{};
    double theta_min = kThetaGuard;
    // Arc-length budget for one shot is base + 2*pi/lambda.
    double s_budget_base = 5.0;
};

double shot_arc_budget(const Params& params, const ShootConfig& config);

struct ShotResult {
    double r0 = 0.0;
    ExitClass exit = ExitClass::Budget;
    double s_star = 0.0;
    ShootingState state_exit;
    ode::DenseTrajectory<3> trajectory;
    MonitorReport monitors;
    ode::Outcome outcome = ode::Outcome::ReachedEnd;
    std::vector<EventId> simultaneous;  // events co-localized within event_tol
};

ShootingState state_of(const ode::Vec<3>& v);
ode::Vec<3> vec_of(const ShootingState& s);

/// Integrates from (r0, pi/4, -pi/2) in the family's shooting box until an
/// exit event, then evaluates the monitors on the dense trajectory.
/// ThetaGuardFault and Budget are reported as exit classes; singular
/// coordinates and step underflow propagate as exceptions.
ShotResult shoot(const Params& params, double r0, const ShootConfig& config = {});

/// Distance of an exit state from the family's wall face:
/// |r - pi/2| for S2n, |tan r cos theta - 1| for S3nMinus1.
double wall_residual(const Params& params, const ShootingState& state);

struct BracketResult {
    double r0_low = 0.0;   // shot exits AlphaZero
    double r0_high = 0.0;  // shot exits at the wall
    int probes = 0;
};

/// Scans geometric sequences from both ends of the admissible r0 interval
/// until one initial radius exits via {alpha = 0} and another via the wall.
BracketResult bracket(const Params& params, const ShootConfig& config = {});

struct BisectionStep {
    double r0 = 0.0;
    ExitClass exit = ExitClass::Budget;
    double residual = 0.0;  // stage-2 orthogonality residual where applicable
};

struct SolveResult {
    double r0_star = 0.0;
    ShotResult shot;
    long iterations = 0;
    double bracket_low = 0.0;
    double bracket_high = 0.0;
    std::vector<BisectionStep> history;
    // Residuals of the returned shot. For S2n: |alpha(s*)| and |r(s*) - pi/2|.
    // For S3nMinus1: |alpha(s*) - beta(exit)| and |tan r cos theta - 1|.
    double residual_alpha = 0.0;
    double residual_wall = 0.0;
    bool converged = false;
};

inline constexpr double kExitResidualTol = 1e-6;

/// Locates the initial radius whose trajectory meets the family's mirror
/// orthogonally and can be reflection-doubled into a closed curve.
///
/// S2n: bisects on exit class until the bracket is narrower than tol_r0; the
/// midpoint shot must reach {alpha = 0} and {r = pi/2} simultaneously to
/// within kExitResidualTol.
///
/// S3nMinus1: stage 1 bisects on exit class to find the boundary between
/// {alpha = 0} and wall exits; stage 2 bisects the orthogonality residual
/// h(r0) = alpha(s*) - beta(exit) over wall-exiting data (h >= 0 near the
/// class boundary, h < 0 near arctan sqrt 2).
///
/// Throws SolverError when no bracket exists or residuals fail to converge;
/// the exception message carries the bisection history.
SolveResult solve_generating_arc(const Params& params, double tol_r0 = 1e-12,
                                 const ShootConfig& config = {});

}  // namespace cmcshoot

#endif
