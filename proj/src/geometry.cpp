#include "cmcshoot/geometry.hpp"

#include <cmath>
#include <cstddef>

namespace cmcshoot {

namespace {

void check_denominator(double value, const char* what) {
    if (std::abs(value) < kSingularTol) {
        throw SingularCoordinate(std::string("singular coordinate: ") + what + " vanishes");
    }
}

std::vector<double> axis_direction(int n) {
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[0] = 1.0;
    return e;
}

void check_direction(const std::vector<double>& d, int n, int block) {
    if (static_cast<int>(d.size()) != n) {
        throw InvalidParameter("direction " + std::to_string(block) + " has dimension " +
                               std::to_string(d.size()) + ", expected " + std::to_string(n));
    }
    double norm2 = 0.0;
    for (double c : d) norm2 += c * c;
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
        throw InvalidParameter("direction " + std::to_string(block) + " is not a unit vector");
    }
}

}  // namespace

AmbientTriple ambient_of(const OrbitPoint& p) {
    return {std::sin(p.r) * std::cos(p.theta), std::sin(p.r) * std::sin(p.theta), std::cos(p.r)};
}

std::vector<double> lift(const Family& family, const OrbitPoint& p,
                         std::span<const std::vector<double>> dirs) {
    const int n = family.n;
    const int blocks = family.kind == FamilyKind::S2n ? 2 : 3;
    std::vector<std::vector<double>> use;
    if (dirs.empty()) {
        use.assign(static_cast<std::size_t>(blocks), axis_direction(n));
    } else {
        if (static_cast<int>(dirs.size()) != blocks) {
            throw InvalidParameter("expected " + std::to_string(blocks) + " directions, got " +
                                   std::to_string(dirs.size()));
        }
        use.assign(dirs.begin(), dirs.end());
        for (int b = 0; b < blocks; ++b) check_direction(use[static_cast<std::size_t>(b)], n, b);
    }

    const AmbientTriple a = ambient_of(p);
    std::vector<double> out;
    if (family.kind == FamilyKind::S2n) {
        out.reserve(static_cast<std::size_t>(2 * n + 1));
        for (double c : use[0]) out.push_back(a.x * c);
        for (double c : use[1]) out.push_back(a.y * c);
        out.push_back(a.z);
    } else {
        out.reserve(static_cast<std::size_t>(3 * n));
        for (double c : use[0]) out.push_back(a.x * c);
        for (double c : use[1]) out.push_back(a.y * c);
        for (double c : use[2]) out.push_back(a.z * c);
    }
    return out;
}

double beta_angle(const OrbitPoint& p) {
    return -std::atan(std::sin(p.r) * std::sin(p.theta));
}

CurvatureVector principal_curvatures(const Family& family, const ShootingState& state,
                                     double alpha_prime) {
    const double sr = std::sin(state.r);
    const double cr = std::cos(state.r);
    const double st = std::sin(state.theta);
    const double ct = std::cos(state.theta);
    const double sa = std::sin(state.alpha);
    const double ca = std::cos(state.alpha);

    check_denominator(sr, "sin r");
    check_denominator(ct, "cos theta");
    check_denominator(st, "sin theta");

    CurvatureVector k;
    k.multiplicity = family.n - 1;
    k.kappa_x = (cr * ct * sa + st * ca) / (sr * ct);
    k.kappa_y = (cr * st * sa - ct * ca) / (sr * st);
    k.kappa_profile = alpha_prime + (cr / sr) * sa;
    if (family.kind == FamilyKind::S3nMinus1) {
        check_denominator(cr, "cos r");
        k.kappa_z = -(sr / cr) * sa;
        k.has_z = true;
    }
    return k;
}

double mean_curvature(const Family& family, const ShootingState& state, double alpha_prime) {
    return principal_curvatures(family, state, alpha_prime).sum();
}

}  // namespace cmcshoot
