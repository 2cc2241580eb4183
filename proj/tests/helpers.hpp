#ifndef CMCSHOOT_TEST_HELPERS_HPP
#define CMCSHOOT_TEST_HELPERS_HPP

#include <cmath>
#include <random>

#include "cmcshoot/dynamics.hpp"
#include "cmcshoot/types.hpp"

namespace cmcshoot::test {

inline const double kPi = std::acos(-1.0);

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Admissible state away from coordinate singularities, with the tangent angle
// free in (-pi, pi).
inline ShootingState random_admissible(std::mt19937_64& rng, FamilyKind kind) {
    const double r_hi = kind == FamilyKind::S2n ? kPi - 0.1 : kPi / 2.0 - 0.1;
    return {uniform(rng, 0.1, r_hi), uniform(rng, 0.05, kPi / 2.0 - 0.05),
            uniform(rng, -kPi + 0.01, kPi - 0.01)};
}

// State in the interior of the family's shooting box.
inline ShootingState random_box_interior(std::mt19937_64& rng, FamilyKind kind) {
    if (kind == FamilyKind::S2n) {
        return {uniform(rng, 1e-3, kPi / 2.0), uniform(rng, 1e-3, kPi / 4.0),
                uniform(rng, -kPi / 2.0, 0.0)};
    }
    const double top = std::atan(std::sqrt(2.0));
    while (true) {
        const ShootingState s{uniform(rng, 1e-3, top), uniform(rng, 1e-3, kPi / 4.0),
                              uniform(rng, -kPi / 2.0, 0.0)};
        if (std::tan(s.r) * std::cos(s.theta) <= 1.0) return s;
    }
}

inline Family family_of(FamilyKind kind, int n) {
    return kind == FamilyKind::S2n ? Family::s2n(n) : Family::s3n_minus_1(n);
}

}  // namespace cmcshoot::test

#endif
