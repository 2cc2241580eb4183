#ifndef CMCSHOOT_IO_HPP
#define CMCSHOOT_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cmcshoot/assembly.hpp"
#include "cmcshoot/shooting.hpp"
#include "cmcshoot/verify.hpp"

namespace cmcshoot::io {

using json = nlohmann::ordered_json;

/// Full-precision decimal (17 significant digits); survives a text round trip
/// bit exactly.
std::string format_full(double v);

/// Columns: s, r, theta, alpha, H_residual (algebraic |H - lambda|).
void write_trajectory_csv(std::ostream& os, const Params& params,
                          const ode::DenseTrajectory<3>& trajectory);

/// Columns: s, r, theta, alpha.
void write_curve_csv(std::ostream& os, const GeneratingCurve& curve);

json curve_meta_json(const GeneratingCurve& curve);

/// Rebuilds a curve from the CSV sample table plus the metadata document.
GeneratingCurve read_curve(std::istream& csv, const json& meta);

json monitor_json(const MonitorReport& report);
json shot_json(const Params& params, const ShotResult& shot);

/// Certificate document with the fixed field set {closure_gap, seam_defect,
/// simple, min_boundary_dist, length, r0_star, h_residuals} plus context.
json certificate_json(const Params& params, const Certificate& cert, double r0_star,
                      const HCheck& h, double residual_alpha, double residual_wall);

json claims_json(const ClaimSuiteReport& report);

json error_json(const std::string& kind, const std::string& message);

/// Chart figure: the (r, theta) rectangle, dashed mirror lines, one path per
/// polyline, and a marker at the start point.
void write_chart_svg(std::ostream& os, FamilyKind kind,
                     std::span<const std::vector<std::array<double, 2>>> paths,
                     std::array<double, 2> start);

/// Assembled curve: one path per reflected copy.
void write_svg(std::ostream& os, const GeneratingCurve& curve);

/// Single-trajectory phase portrait in the same chart.
void write_trajectory_svg(std::ostream& os, const Params& params,
                          const ode::DenseTrajectory<3>& trajectory);

}  // namespace cmcshoot::io

#endif
