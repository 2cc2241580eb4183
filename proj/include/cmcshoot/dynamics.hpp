#ifndef CMCSHOOT_DYNAMICS_HPP
#define CMCSHOOT_DYNAMICS_HPP

#include <functional>
#include <span>
#include <vector>

#include "cmcshoot/types.hpp"

namespace cmcshoot {

/// Derivative of a ShootingState per unit arc length.
struct StateDeriv {
    double dr = 0.0;
    double dtheta = 0.0;
    double dalpha = 0.0;
};

/// Right-hand side of the reduced system:
///   dr/ds     = cos(alpha)
///   dtheta/ds = sin(alpha) / sin(r)
///   dalpha/ds = (2n-2) cot(2 theta) cos(alpha) / sin(r) + T(r) sin(alpha) + lambda
/// with T(r) = -(2n-1) cot(r) for S2n and (n-1) tan(r) - (2n-1) cot(r) for
/// S3nMinus1. The cot(2 theta) cos(alpha) product is evaluated as written, so
/// theta = pi/4 is regular; it is treated as 0 when cos(alpha) vanishes within
/// tolerance, which keeps the r = const special solutions integrable across
/// theta = pi/2.
StateDeriv rhs(const Params& params, const ShootingState& state);

/// The dalpha/ds component alone (the value of alpha_prime that puts a state
/// on the mean-curvature shell H = lambda).
double rhs_alpha(const Params& params, const ShootingState& state);

/// Transformed phase coordinates x = tan r, y = cot 2theta, z = -cot alpha,
/// valid on the interior of the S2n shooting box with alpha < 0. Domain
/// Q = (0, inf) x [0, inf) x [0, inf).
struct PhaseState {
    double x = 0.0, y = 0.0, z = 0.0;
};

struct PhaseDeriv {
    double dx = 0.0, dy = 0.0, dz = 0.0;
};

/// S2n dynamics in the transformed coordinates:
///   dx/ds = (x^2+1) z / sqrt(z^2+1)
///   dy/ds = 2 (y^2+1) sqrt(x^2+1) / (x sqrt(z^2+1))
///   dz/ds = (z^2+1) [ (2n-2) y z sqrt(x^2+1) / (x sqrt(z^2+1))
///                     + (2n-1) / (x sqrt(z^2+1)) + lambda ]
/// Used as an independent cross-validation route; no analog exists for
/// S3nMinus1 (throws InvalidParameter for that family).
PhaseDeriv rhs_phase(const Params& params, const PhaseState& phase);

PhaseState to_phase(const ShootingState& state);
ShootingState from_phase(const PhaseState& phase);

/// Pointwise reflection maps of the system. Each sends solutions to solutions
/// when composed with parameter reversal:
///   ReflectTheta: (r, theta, alpha) -> (r, pi/2 - theta, pi - alpha)
///   ReflectR:     (r, theta, alpha) -> (pi - r, theta, -alpha)
///   Reverse:      (r, theta, alpha) -> (r, theta, pi + alpha)  (flips H sign)
enum class SymmetryMap { ReflectTheta, ReflectR, Reverse };

ShootingState apply_symmetry(SymmetryMap map, const ShootingState& state);

/// Curve sample for the ambient-swap reflection: position plus tangent angle.
struct OrientedPoint {
    OrbitPoint point;
    double alpha = 0.0;
};

/// Reflection across the mirror {tan r cos theta = 1}, i.e. the swap x <-> z
/// of the ambient triple (S3nMinus1 only). Positions map by the coordinate
/// swap, tangents by its pushforward. Throws SingularCoordinate if a
/// reflected point lands on the pole sin r' = 0.
std::vector<OrientedPoint> reflect_curve_xz(std::span<const OrientedPoint> samples);

/// Shooting domains. B  = (0, pi/2] x (0, pi/4] x [-pi/2, 0] for S2n;
/// BHat adds r <= arctan(sqrt 2) and tan r cos theta <= 1 for S3nMinus1.
enum class BoxKind { B, BHat };

BoxKind box_for(FamilyKind kind);

bool box_contains(BoxKind box, const ShootingState& state);

enum class EventId { AlphaZero = 0, RWall = 1, GammaWall = 2, ThetaGuard = 3 };

std::string to_string(EventId id);

/// Scalar event function arranged to cross zero upward at the boundary it
/// watches.
struct BoxEvent {
    EventId id;
    std::function<double(const ShootingState&)> fn;
};

/// Default guard distance from the theta = 0 face. Trajectories provably stay
/// a positive distance away, so a crossing is an integration fault.
inline constexpr double kThetaGuard = 1e-6;

/// Exit events of a shooting box: {alpha = 0} plus the family wall
/// ({r = pi/2} for B, {tan r cos theta = 1} for BHat), plus the theta guard.
std::vector<BoxEvent> box_events(BoxKind box, double theta_min = kThetaGuard);

}  // namespace cmcshoot

#endif
