#include "cmcshoot/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "cmcshoot/geometry.hpp"

namespace cmcshoot::io {

namespace {

const double kPi = std::acos(-1.0);

double h_residual_or_nan(const Params& params, const ShootingState& st) {
    try {
        return std::abs(mean_curvature(params.family, st, rhs_alpha(params, st)) - params.lambda);
    } catch (const SingularCoordinate&) {
        return std::nan("");
    }
}

}  // namespace

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Params& params,
                          const ode::DenseTrajectory<3>& trajectory) {
    os << "s,r,theta,alpha,H_residual\n";
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const ShootingState st = state_of(trajectory.sample_y(i));
        os << format_full(trajectory.sample_s(i)) << ',' << format_full(st.r) << ','
           << format_full(st.theta) << ',' << format_full(st.alpha) << ','
           << format_full(h_residual_or_nan(params, st)) << '\n';
    }
}

void write_curve_csv(std::ostream& os, const GeneratingCurve& curve) {
    os << "s,r,theta,alpha\n";
    for (const CurveSample& cs : curve.samples) {
        os << format_full(cs.s) << ',' << format_full(cs.r) << ',' << format_full(cs.theta)
           << ',' << format_full(cs.alpha) << '\n';
    }
}

json curve_meta_json(const GeneratingCurve& curve) {
    json seams = json::array();
    for (const SeamInfo& seam : curve.seams) {
        seams.push_back({{"s", seam.s},
                         {"position_gap", seam.position_gap},
                         {"angle_defect", seam.angle_defect}});
    }
    return json{{"family", to_string(curve.family.kind)},
                {"n", curve.family.n},
                {"lambda", curve.lambda},
                {"r0", curve.r0},
                {"s_star", curve.s_star},
                {"copies", curve.copies},
                {"length", curve.length},
                {"closed", curve.closed},
                {"seams", seams}};
}

GeneratingCurve read_curve(std::istream& csv, const json& meta) {
    GeneratingCurve curve;
    const int n = meta.at("n").get<int>();
    curve.family = family_kind_from_string(meta.at("family").get<std::string>()) ==
                           FamilyKind::S2n
                       ? Family::s2n(n)
                       : Family::s3n_minus_1(n);
    curve.lambda = meta.at("lambda").get<double>();
    curve.r0 = meta.at("r0").get<double>();
    curve.s_star = meta.at("s_star").get<double>();
    curve.copies = meta.at("copies").get<int>();
    curve.length = meta.at("length").get<double>();
    curve.closed = meta.at("closed").get<bool>();
    for (const json& seam : meta.at("seams")) {
        curve.seams.push_back({seam.at("s").get<double>(), seam.at("position_gap").get<double>(),
                               seam.at("angle_defect").get<double>()});
    }

    std::string line;
    if (!std::getline(csv, line) || line.rfind("s,r,theta,alpha", 0) != 0) {
        throw InvalidParameter("curve CSV is missing the header row");
    }
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        CurveSample cs;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &cs.s, &cs.r, &cs.theta, &cs.alpha) !=
            4) {
            throw InvalidParameter("malformed curve CSV row: " + line);
        }
        curve.samples.push_back(cs);
    }
    if (curve.samples.size() < 4) throw InvalidParameter("curve CSV has too few rows");
    return curve;
}

json monitor_json(const MonitorReport& report) {
    json out = json::object();
    for (const MonitorEntry* e : report.entries()) {
        out[e->id] = {{"applicable", e->applicable}, {"vacuous", e->vacuous},
                      {"pass", e->pass},
                      {"margin", std::isfinite(e->margin) ? e->margin : 0.0},
                      {"s_worst", e->s_worst},   {"index_worst", e->index_worst},
                      {"note", e->note}};
    }
    return out;
}

json shot_json(const Params& params, const ShotResult& shot) {
    json simultaneous = json::array();
    for (EventId id : shot.simultaneous) simultaneous.push_back(to_string(id));
    return json{{"family", to_string(params.family.kind)},
                {"n", params.family.n},
                {"lambda", params.lambda},
                {"r0", shot.r0},
                {"exit", to_string(shot.exit)},
                {"s_star", shot.s_star},
                {"state_exit",
                 {{"r", shot.state_exit.r},
                  {"theta", shot.state_exit.theta},
                  {"alpha", shot.state_exit.alpha}}},
                {"outcome", ode::to_string(shot.outcome)},
                {"simultaneous_events", simultaneous},
                {"monitors_pass", shot.monitors.all_pass()},
                {"monitors", monitor_json(shot.monitors)}};
}

json certificate_json(const Params& params, const Certificate& cert, double r0_star,
                      const HCheck& h, double residual_alpha, double residual_wall) {
    const bool s2n = params.family.kind == FamilyKind::S2n;
    return json{{"closure_gap", cert.closure_gap},
                {"seam_defect", cert.seam_defect},
                {"simple", cert.simple},
                {"min_boundary_dist", cert.min_boundary_dist},
                {"length", cert.length},
                {"r0_star", r0_star},
                {"h_residuals",
                 {{"algebraic", h.max_dev_algebraic},
                  {"finite_difference", h.max_dev_finite_difference},
                  {"skipped_samples", h.skipped}}},
                {"closed", cert.closed},
                {"copies", cert.copies},
                {"exit_residuals",
                 {{s2n ? "alpha" : "alpha_minus_beta", residual_alpha},
                  {s2n ? "wall" : "gamma", residual_wall}}},
                {"family", to_string(params.family.kind)},
                {"n", params.family.n},
                {"lambda", params.lambda}};
}

json claims_json(const ClaimSuiteReport& report) {
    json statements = json::object();
    for (const auto& [id, text] : report.statements) statements[id] = text;

    json claims = json::object();
    for (const auto& [id, text] : report.statements) {
        (void)text;
        claims[id] = json::array();
    }
    std::size_t grid_results = 0;
    for (const ClaimResult& c : report.results) {
        ++grid_results;
        claims[c.claim_id].push_back(json{{"scope", c.scope},
                                          {"pass", c.pass},
                                          {"vacuous", c.vacuous},
                                          {"margin", c.worst_margin},
                                          {"s_at", c.s_at},
                                          {"sample_index", c.sample_index},
                                          {"note", c.note}});
    }
    // Drop claim ids that never applied on this grid.
    for (auto it = claims.begin(); it != claims.end();) {
        if (it.value().empty()) {
            it = claims.erase(it);
        } else {
            ++it;
        }
    }
    return json{{"all_pass", report.all_pass},
                {"result_count", grid_results},
                {"statements", statements},
                {"claims", claims}};
}

json error_json(const std::string& kind, const std::string& message) {
    return json{{"error", {{"kind", kind}, {"message", message}}}};
}

void write_chart_svg(std::ostream& os, FamilyKind kind,
                     std::span<const std::vector<std::array<double, 2>>> paths,
                     std::array<double, 2> start) {
    const bool s2n = kind == FamilyKind::S2n;
    const double r_max = s2n ? kPi : kPi / 2.0;
    const double t_max = kPi / 2.0;
    const double margin = 40.0;
    const double width = 720.0;
    const double height = width * (t_max / r_max);
    const auto px = [&](double r) { return margin + r / r_max * width; };
    const auto py = [&](double theta) { return margin + (t_max - theta) / t_max * height; };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width + 2 * margin
       << "\" height=\"" << height + 2 * margin << "\" viewBox=\"0 0 " << width + 2 * margin
       << ' ' << height + 2 * margin << "\">\n";
    os << "  <rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width
       << "\" height=\"" << height << "\" fill=\"white\" stroke=\"black\"/>\n";

    // Mirror {theta = pi/4}.
    os << "  <line x1=\"" << px(0.0) << "\" y1=\"" << py(kPi / 4.0) << "\" x2=\"" << px(r_max)
       << "\" y2=\"" << py(kPi / 4.0)
       << "\" stroke=\"gray\" stroke-dasharray=\"6 4\" stroke-width=\"1\"/>\n";
    if (s2n) {
        // Mirror {r = pi/2}.
        os << "  <line x1=\"" << px(kPi / 2.0) << "\" y1=\"" << py(0.0) << "\" x2=\""
           << px(kPi / 2.0) << "\" y2=\"" << py(t_max)
           << "\" stroke=\"gray\" stroke-dasharray=\"6 4\" stroke-width=\"1\"/>\n";
    } else {
        // Mirror {tan r cos theta = 1}, drawn as a dashed polyline.
        os << "  <polyline fill=\"none\" stroke=\"gray\" stroke-dasharray=\"6 4\" "
              "stroke-width=\"1\" points=\"";
        const int m = 64;
        for (int i = 0; i <= m; ++i) {
            const double theta = t_max * static_cast<double>(i) / static_cast<double>(m);
            const double c = std::cos(theta);
            const double r = c > 1e-9 ? std::atan(1.0 / c) : kPi / 2.0;
            os << px(r) << ',' << py(theta) << (i < m ? " " : "");
        }
        os << "\"/>\n";
    }

    for (const auto& path : paths) {
        os << "  <path fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" d=\"";
        for (std::size_t i = 0; i < path.size(); ++i) {
            os << (i == 0 ? 'M' : 'L') << px(path[i][0]) << ' ' << py(path[i][1]);
        }
        os << "\"/>\n";
    }

    os << "  <circle cx=\"" << px(start[0]) << "\" cy=\"" << py(start[1])
       << "\" r=\"3.5\" fill=\"#c23b22\"/>\n";
    os << "</svg>\n";
}

void write_svg(std::ostream& os, const GeneratingCurve& curve) {
    // One path per reflected copy of the arc.
    const std::size_t total = curve.samples.size();
    const int copies = curve.copies > 0 ? curve.copies : 1;
    std::vector<std::vector<std::array<double, 2>>> paths;
    for (int c = 0; c < copies; ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * (total - 1) / copies;
        const std::size_t end = static_cast<std::size_t>(c + 1) * (total - 1) / copies;
        std::vector<std::array<double, 2>> path;
        for (std::size_t i = begin; i <= end && i < total; ++i) {
            path.push_back({curve.samples[i].r, curve.samples[i].theta});
        }
        paths.push_back(std::move(path));
    }
    const std::array<double, 2> start{curve.samples.front().r, curve.samples.front().theta};
    write_chart_svg(os, curve.family.kind, paths, start);
}

void write_trajectory_svg(std::ostream& os, const Params& params,
                          const ode::DenseTrajectory<3>& trajectory) {
    std::vector<std::vector<std::array<double, 2>>> paths(1);
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const ShootingState st = state_of(trajectory.sample_y(i));
        paths[0].push_back({st.r, st.theta});
    }
    const std::array<double, 2> start = paths[0].front();
    write_chart_svg(os, params.family.kind, paths, start);
}

}  // namespace cmcshoot::io
