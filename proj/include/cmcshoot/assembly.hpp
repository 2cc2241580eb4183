#ifndef CMCSHOOT_ASSEMBLY_HPP
#define CMCSHOOT_ASSEMBLY_HPP

#include <array>
#include <span>
#include <vector>

#include "cmcshoot/shooting.hpp"
#include "cmcshoot/types.hpp"

namespace cmcshoot {

inline constexpr double kClosureTol = 1e-6;    // chart units
inline constexpr double kSeamAngleTol = 1e-6;  // radians
inline constexpr int kCurveSamples = 2048;     // uniform arc-length resampling

struct CurveSample {
    double s = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double alpha = 0.0;  // tangent angle, unwrapped to vary continuously
};

struct SeamInfo {
    double s = 0.0;
    double position_gap = 0.0;   // chart distance between the two one-sided limits
    double angle_defect = 0.0;   // tangent mismatch mod 2*pi, radians
};

/// Closed generating curve in the quotient, assembled from reflected copies
/// of one shooting arc. Samples are uniform in arc length; the last sample
/// repeats the first up to the closure gap.
struct GeneratingCurve {
    Family family;
    double lambda = 0.0;
    double r0 = 0.0;
    double s_star = 0.0;
    int copies = 0;
    double length = 0.0;  // copies * s_star by construction
    bool closed = false;
    std::vector<CurveSample> samples;
    std::vector<SeamInfo> seams;

    double max_seam_gap() const;
    double max_seam_defect() const;
};

/// Four copies of the arc: itself, its reflection across {r = pi/2}
/// (parameter-reversed), then the {theta = pi/4} reflection of that half.
/// Requires an exit with |alpha| and |r - pi/2| within kClosureTol.
GeneratingCurve assemble_s2n(const Params& params, const ShotResult& shot,
                             int samples_per_curve = kCurveSamples);

/// Orbit of the arc under the reflections in {theta = pi/4} (ambient swap
/// x<->y) and {tan r cos theta = 1} (swap x<->z), applied until the curve
/// first closes; closure within 6 copies is verified, not assumed, and more
/// than 12 copies is an error. Requires a wall exit meeting the mirror
/// orthogonally within kClosureTol (alpha = beta at the exit point).
GeneratingCurve assemble_s3n(const Params& params, const ShotResult& shot,
                             int samples_per_curve = kCurveSamples);

GeneratingCurve assemble(const Params& params, const ShotResult& shot,
                         int samples_per_curve = kCurveSamples);

struct Certificate {
    bool closed = false;
    double closure_gap = 0.0;
    double seam_defect = 0.0;
    bool simple = false;
    double min_boundary_dist = 0.0;
    double length = 0.0;
    int copies = 0;
};

/// Simplicity check of a polyline in the (r, theta) chart: pairwise segment
/// intersection over a uniform spatial grid, skipping adjacent segments.
/// `closed` joins the last point back to the first.
bool polyline_simple(std::span<const std::array<double, 2>> points, bool closed);

/// Chart-level certificate: closure gap, worst seam defect, simplicity and
/// distance from the quotient boundary (the chart is injective on the open
/// quotient, so chart simplicity gives quotient simplicity).
Certificate certify(const GeneratingCurve& curve);

}  // namespace cmcshoot

#endif
