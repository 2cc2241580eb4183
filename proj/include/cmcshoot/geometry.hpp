#ifndef CMCSHOOT_GEOMETRY_HPP
#define CMCSHOOT_GEOMETRY_HPP

#include <span>
#include <vector>

#include "cmcshoot/types.hpp"

namespace cmcshoot {

/// Distinct principal curvatures of the generated hypersurface with their
/// multiplicities. kappa_z is present only for S3nMinus1. Multiplicities sum
/// to 2n-1 (S2n) or 3n-2 (S3nMinus1).
struct CurvatureVector {
    double kappa_x = 0.0;        // multiplicity n-1
    double kappa_y = 0.0;        // multiplicity n-1
    double kappa_z = 0.0;        // multiplicity n-1, S3nMinus1 only
    double kappa_profile = 0.0;  // multiplicity 1
    int multiplicity = 0;        // common multiplicity n-1 of the sphere blocks
    bool has_z = false;

    double sum() const {
        double s = multiplicity * (kappa_x + kappa_y) + kappa_profile;
        if (has_z) s += multiplicity * kappa_z;
        return s;
    }
};

/// Ambient coordinates (x, y, z) = (sin r cos theta, sin r sin theta, cos r)
/// of a quotient point, as a point of the unit 2-sphere.
struct AmbientTriple {
    double x = 0.0, y = 0.0, z = 0.0;
};

AmbientTriple ambient_of(const OrbitPoint& p);

/// Lifts a quotient point to the ambient unit sphere along the given unit
/// directions, one per sphere block (2 blocks for S2n, 3 for S3nMinus1, each
/// of dimension n-1 embedded in R^n). When dirs is empty every block uses its
/// first coordinate axis; curvature data is independent of this choice.
/// Output lives in R^{2n+1} (S2n) or R^{3n} (S3nMinus1) and has unit norm.
std::vector<double> lift(const Family& family, const OrbitPoint& p,
                         std::span<const std::vector<double>> dirs = {});

/// Angle between the inward normal of the segment {tan r cos theta = 1} and
/// d/dr: beta = -arctan(sin r sin theta). A curve meeting the segment with
/// tangent angle alpha = beta meets it orthogonally. Total in (r, theta);
/// only values on the segment are geometrically meaningful.
double beta_angle(const OrbitPoint& p);

/// Closed-form principal curvatures at a phase point, given the profile
/// derivative d(alpha)/ds. Throws SingularCoordinate when sin r, cos theta,
/// sin theta (or cos r for S3nMinus1) vanish within kSingularTol.
CurvatureVector principal_curvatures(const Family& family, const ShootingState& state,
                                     double alpha_prime);

/// Multiplicity-weighted sum of principal_curvatures.
double mean_curvature(const Family& family, const ShootingState& state, double alpha_prime);

}  // namespace cmcshoot

#endif
