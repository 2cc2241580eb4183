#ifndef CMCSHOOT_TYPES_HPP
#define CMCSHOOT_TYPES_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace cmcshoot {

// Tolerance below which a trigonometric denominator counts as singular.
inline constexpr double kSingularTol = 1e-12;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Rejected configuration or parameter values (maps to CLI "invalid-config").
struct InvalidParameter : Error {
    explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

// A coordinate denominator fell below kSingularTol. Inside the shooting
// domains this indicates an integration fault, not a valid state.
struct SingularCoordinate : Error {
    explicit SingularCoordinate(const std::string& msg) : Error(msg) {}
};

// Integration could not continue (step underflow).
struct IntegrationError : Error {
    explicit IntegrationError(const std::string& msg) : Error(msg) {}
};

// Bracketing or bisection failed to converge.
struct SolverError : Error {
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

/// The two one-parameter families of ambient spheres.
/// S2n:       S^{2n} with two block rotations acting; quotient r in [0, pi].
/// S3nMinus1: S^{3n-1} with three block rotations; quotient r in [0, pi/2].
enum class FamilyKind { S2n, S3nMinus1 };

struct Family {
    FamilyKind kind = FamilyKind::S2n;
    int n = 2;

    static Family s2n(int n);
    static Family s3n_minus_1(int n);

    int ambient_dim() const { return kind == FamilyKind::S2n ? 2 * n : 3 * n - 1; }
    int hypersurface_dim() const { return ambient_dim() - 1; }
    bool operator==(const Family&) const = default;
};

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

/// Point of the two-dimensional quotient, spherical coordinates (r, theta)
/// with metric dr^2 + sin(r)^2 dtheta^2.
struct OrbitPoint {
    double r = 0.0;
    double theta = 0.0;
};

/// Phase point of the reduced system: position plus the tangent angle alpha
/// measured against d/dr. alpha is kept unreduced in R; the reflection maps
/// produce values outside (-pi, pi] and junction checks compare mod 2*pi.
struct ShootingState {
    double r = 0.0;
    double theta = 0.0;
    double alpha = 0.0;

    OrbitPoint point() const { return {r, theta}; }
};

/// Family plus the mean-curvature target. Only lambda > 0 is admitted; a
/// negative target is equivalent to reversing the curve's orientation.
struct Params {
    Family family;
    double lambda = 1.0;
};

Params make_params(Family family, double lambda);

/// Upper end of the admissible initial-radius interval: pi/2 for S2n,
/// arctan(sqrt 2) for S3nMinus1.
double r0_upper(FamilyKind kind);

}  // namespace cmcshoot

#endif
