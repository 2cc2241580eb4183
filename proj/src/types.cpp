#include "cmcshoot/types.hpp"

namespace cmcshoot {

Family Family::s2n(int n) {
    if (n < 2) throw InvalidParameter("family S2n requires n >= 2, got n = " + std::to_string(n));
    return Family{FamilyKind::S2n, n};
}

Family Family::s3n_minus_1(int n) {
    if (n < 2) throw InvalidParameter("family S3n-1 requires n >= 2, got n = " + std::to_string(n));
    return Family{FamilyKind::S3nMinus1, n};
}

std::string to_string(FamilyKind kind) {
    return kind == FamilyKind::S2n ? "s2n" : "s3n-1";
}

FamilyKind family_kind_from_string(const std::string& name) {
    if (name == "s2n") return FamilyKind::S2n;
    if (name == "s3n-1" || name == "s3nm1") return FamilyKind::S3nMinus1;
    throw InvalidParameter("unknown family '" + name + "' (expected s2n or s3n-1)");
}

Params make_params(Family family, double lambda) {
    if (family.n < 2) throw InvalidParameter("n must be >= 2");
    if (!(lambda > 0.0)) {
        throw InvalidParameter("lambda must be > 0 (reverse the curve for negative mean curvature)");
    }
    if (!std::isfinite(lambda)) throw InvalidParameter("lambda must be finite");
    return Params{family, lambda};
}

double r0_upper(FamilyKind kind) {
    return kind == FamilyKind::S2n ? std::asin(1.0)  // pi/2
                                   : std::atan(std::sqrt(2.0));
}

}  // namespace cmcshoot
