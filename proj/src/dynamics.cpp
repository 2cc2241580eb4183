#include "cmcshoot/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace cmcshoot {

namespace {

const double kPi = std::acos(-1.0);

}  // namespace

StateDeriv rhs(const Params& params, const ShootingState& state) {
    const int n = params.family.n;
    const double sr = std::sin(state.r);
    const double cr = std::cos(state.r);
    const double sa = std::sin(state.alpha);
    const double ca = std::cos(state.alpha);
    const double s2t = std::sin(2.0 * state.theta);
    const double c2t = std::cos(2.0 * state.theta);

    if (std::abs(sr) < kSingularTol) throw SingularCoordinate("singular coordinate: sin r vanishes");

    StateDeriv d;
    d.dr = ca;
    d.dtheta = sa / sr;

    double cot2t_term;
    if (std::abs(s2t) < kSingularTol) {
        if (std::abs(ca) > kSingularTol) {
            throw SingularCoordinate("singular coordinate: sin 2theta vanishes with cos alpha != 0");
        }
        cot2t_term = 0.0;
    } else {
        cot2t_term = (c2t / s2t) * ca;
    }

    double tangential;
    if (params.family.kind == FamilyKind::S2n) {
        tangential = -(2.0 * n - 1.0) * (cr / sr) * sa;
    } else {
        if (std::abs(cr) < kSingularTol) {
            throw SingularCoordinate("singular coordinate: cos r vanishes");
        }
        tangential = ((n - 1.0) * (sr / cr) - (2.0 * n - 1.0) * (cr / sr)) * sa;
    }
    d.dalpha = (2.0 * n - 2.0) * cot2t_term / sr + tangential + params.lambda;
    return d;
}

double rhs_alpha(const Params& params, const ShootingState& state) {
    return rhs(params, state).dalpha;
}

PhaseDeriv rhs_phase(const Params& params, const PhaseState& phase) {
    if (params.family.kind != FamilyKind::S2n) {
        throw InvalidParameter("the transformed phase system exists only for family s2n");
    }
    if (!(phase.x > 0.0)) throw InvalidParameter("phase domain requires x > 0");
    const int n = params.family.n;
    const double x = phase.x, y = phase.y, z = phase.z;
    const double qx = std::sqrt(x * x + 1.0);
    const double qz = std::sqrt(z * z + 1.0);

    PhaseDeriv d;
    d.dx = (x * x + 1.0) * z / qz;
    d.dy = 2.0 * (y * y + 1.0) * qx / (x * qz);
    d.dz = (z * z + 1.0) *
           ((2.0 * n - 2.0) * y * z * qx / (x * qz) + (2.0 * n - 1.0) / (x * qz) + params.lambda);
    return d;
}

PhaseState to_phase(const ShootingState& state) {
    const double cr = std::cos(state.r);
    const double s2t = std::sin(2.0 * state.theta);
    const double sa = std::sin(state.alpha);
    if (std::abs(cr) < kSingularTol) throw SingularCoordinate("to_phase singular at r = pi/2");
    if (std::abs(sa) < kSingularTol) throw SingularCoordinate("to_phase singular at alpha = 0");
    if (std::abs(s2t) < kSingularTol) throw SingularCoordinate("to_phase singular at sin 2theta = 0");
    return {std::tan(state.r), std::cos(2.0 * state.theta) / s2t,
            -std::cos(state.alpha) / sa};
}

ShootingState from_phase(const PhaseState& phase) {
    if (!(phase.x > 0.0) || phase.y < 0.0 || phase.z < 0.0) {
        throw InvalidParameter("phase point outside Q = (0,inf) x [0,inf) x [0,inf)");
    }
    ShootingState s;
    s.r = std::atan(phase.x);
    s.theta = 0.5 * std::atan2(1.0, phase.y);
    s.alpha = -std::atan2(1.0, phase.z);
    return s;
}

ShootingState apply_symmetry(SymmetryMap map, const ShootingState& state) {
    switch (map) {
        case SymmetryMap::ReflectTheta:
            return {state.r, kPi / 2.0 - state.theta, kPi - state.alpha};
        case SymmetryMap::ReflectR:
            return {kPi - state.r, state.theta, -state.alpha};
        case SymmetryMap::Reverse:
        default:
            return {state.r, state.theta, kPi + state.alpha};
    }
}

std::vector<OrientedPoint> reflect_curve_xz(std::span<const OrientedPoint> samples) {
    std::vector<OrientedPoint> out;
    out.reserve(samples.size());
    for (const OrientedPoint& sp : samples) {
        const double sr = std::sin(sp.point.r);
        const double cr = std::cos(sp.point.r);
        const double st = std::sin(sp.point.theta);
        const double ct = std::cos(sp.point.theta);
        const double sa = std::sin(sp.alpha);
        const double ca = std::cos(sp.alpha);

        // Ambient position and velocity of the projected curve on S^2.
        const double x = sr * ct, y = sr * st, z = cr;
        const double vx = cr * ct * ca - st * sa;
        const double vy = cr * st * ca + ct * sa;
        const double vz = -sr * ca;

        // Swap x <-> z in both.
        const double nx = z, ny = y, nz = x;
        const double wx = vz, wy = vy, wz = vx;

        const double nr = std::acos(std::clamp(nz, -1.0, 1.0));
        const double nsr = std::sin(nr);
        if (std::abs(nsr) < kSingularTol) {
            throw SingularCoordinate("reflected point lies on a coordinate pole");
        }
        const double ntheta = std::atan2(ny, nx);

        // Recover the tangent angle from the orthonormal chart frame.
        const double nct = std::cos(ntheta), nst = std::sin(ntheta), ncr = std::cos(nr);
        const double cos_a = ncr * nct * wx + ncr * nst * wy - nsr * wz;
        const double sin_a = -nst * wx + nct * wy;
        out.push_back({{nr, ntheta}, std::atan2(sin_a, cos_a)});
    }
    return out;
}

BoxKind box_for(FamilyKind kind) {
    return kind == FamilyKind::S2n ? BoxKind::B : BoxKind::BHat;
}

bool box_contains(BoxKind box, const ShootingState& s) {
    const bool common = s.theta > 0.0 && s.theta <= kPi / 4.0 && s.alpha >= -kPi / 2.0 &&
                        s.alpha <= 0.0 && s.r > 0.0;
    if (!common) return false;
    if (box == BoxKind::B) return s.r <= kPi / 2.0;
    return s.r <= std::atan(std::sqrt(2.0)) && std::tan(s.r) * std::cos(s.theta) <= 1.0;
}

std::string to_string(EventId id) {
    switch (id) {
        case EventId::AlphaZero: return "alpha-zero";
        case EventId::RWall: return "r-wall";
        case EventId::GammaWall: return "gamma-wall";
        case EventId::ThetaGuard: return "theta-guard";
    }
    return "unknown";
}

std::vector<BoxEvent> box_events(BoxKind box, double theta_min) {
    std::vector<BoxEvent> events;
    events.push_back({EventId::AlphaZero, [](const ShootingState& s) { return s.alpha; }});
    if (box == BoxKind::B) {
        events.push_back({EventId::RWall, [](const ShootingState& s) { return s.r - kPi / 2.0; }});
    } else {
        events.push_back({EventId::GammaWall, [](const ShootingState& s) {
                              const double cr = std::cos(s.r);
                              if (cr < kSingularTol) return 1.0;  // far beyond the wall
                              return std::tan(s.r) * std::cos(s.theta) - 1.0;
                          }});
    }
    events.push_back(
        {EventId::ThetaGuard, [theta_min](const ShootingState& s) { return theta_min - s.theta; }});
    return events;
}

}  // namespace cmcshoot
