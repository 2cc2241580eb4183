// Batch front end: shoot | solve | assemble | verify | sweep over the two
// sphere families, emitting CSV trajectories, JSON certificates and reports,
// and SVG chart figures.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmcshoot/assembly.hpp"
#include "cmcshoot/geometry.hpp"
#include "cmcshoot/io.hpp"
#include "cmcshoot/shooting.hpp"
#include "cmcshoot/verify.hpp"

namespace fs = std::filesystem;
using namespace cmcshoot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitChecksFailed = 4;

struct Options {
    std::string family = "s2n";
    int n = 2;
    double lambda = 1.0;
    double r0 = 0.0;
    bool has_r0 = false;
    double rtol = 1e-10;
    double atol = 1e-12;
    double event_tol = 1e-12;
    double tol_r0 = 1e-12;
    bool strict_monitors = false;
    bool plot = false;
    std::string out_dir = ".";
    std::vector<double> lambdas;
};

Params params_of(const Options& opt) {
    const FamilyKind kind = family_kind_from_string(opt.family);
    const Family family = kind == FamilyKind::S2n ? Family::s2n(opt.n)
                                                  : Family::s3n_minus_1(opt.n);
    return make_params(family, opt.lambda);
}

ShootConfig shoot_config(const Options& opt) {
    ShootConfig cfg;
    cfg.ode.rtol = opt.rtol;
    cfg.ode.atol = opt.atol;
    cfg.ode.event_tol = opt.event_tol;
    cfg.ode.validate();
    return cfg;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << contents;
    if (!os) throw Error("write failed for " + path.string());
}

std::string json_text(const io::json& j) { return j.dump(2) + "\n"; }

int emit_error(int code, const std::string& kind, const std::string& message) {
    std::cerr << json_text(io::error_json(kind, message));
    return code;
}

struct SolveArtifacts {
    SolveResult solve;
    GeneratingCurve curve;
    Certificate cert;
    HCheck h;
};

SolveArtifacts run_solve(const Params& params, const Options& opt) {
    SolveArtifacts art;
    art.solve = solve_generating_arc(params, opt.tol_r0, shoot_config(opt));
    art.curve = assemble(params, art.solve.shot);
    art.cert = certify(art.curve);
    art.h = check_H(art.curve, params);
    return art;
}

void write_solve_outputs(const fs::path& dir, const Params& params, const Options& opt,
                         const SolveArtifacts& art) {
    fs::create_directories(dir);
    {
        std::ostringstream os;
        io::write_curve_csv(os, art.curve);
        write_file(dir / "curve.csv", os.str());
    }
    write_file(dir / "curve.json", json_text(io::curve_meta_json(art.curve)));
    write_file(dir / "certificate.json",
               json_text(io::certificate_json(params, art.cert, art.solve.r0_star, art.h,
                                              art.solve.residual_alpha,
                                              art.solve.residual_wall)));
    io::json solve_doc{{"family", to_string(params.family.kind)},
                       {"n", params.family.n},
                       {"lambda", params.lambda},
                       {"r0_star", art.solve.r0_star},
                       {"iterations", art.solve.iterations},
                       {"bracket", {art.solve.bracket_low, art.solve.bracket_high}},
                       {"residual_alpha", art.solve.residual_alpha},
                       {"residual_wall", art.solve.residual_wall},
                       {"s_star", art.solve.shot.s_star},
                       {"exit", to_string(art.solve.shot.exit)},
                       {"monitors_pass", art.solve.shot.monitors.all_pass()}};
    write_file(dir / "solve.json", json_text(solve_doc));
    {
        std::ostringstream os;
        io::write_svg(os, art.curve);
        write_file(dir / "curve.svg", os.str());
    }
}

int cmd_shoot(const Options& opt) {
    if (!opt.has_r0) throw InvalidParameter("shoot requires --r0");
    const Params params = params_of(opt);
    const ShotResult shot = shoot(params, opt.r0, shoot_config(opt));

    fs::create_directories(opt.out_dir);
    {
        std::ostringstream os;
        io::write_trajectory_csv(os, params, shot.trajectory);
        write_file(fs::path(opt.out_dir) / "trajectory.csv", os.str());
    }
    write_file(fs::path(opt.out_dir) / "shot.json", json_text(io::shot_json(params, shot)));
    if (opt.plot) {
        std::ostringstream os;
        io::write_trajectory_svg(os, params, shot.trajectory);
        write_file(fs::path(opt.out_dir) / "trajectory.svg", os.str());
    }

    if (opt.strict_monitors && !shot.monitors.all_pass()) {
        return emit_error(kExitChecksFailed, "monitor-failure",
                          "one or more applicable monitors failed (see shot.json)");
    }
    return kExitOk;
}

int cmd_solve(const Options& opt) {
    const Params params = params_of(opt);
    const SolveArtifacts art = run_solve(params, opt);
    write_solve_outputs(opt.out_dir, params, opt, art);
    if (opt.strict_monitors && !art.solve.shot.monitors.all_pass()) {
        return emit_error(kExitChecksFailed, "monitor-failure",
                          "one or more applicable monitors failed (see solve.json)");
    }
    return kExitOk;
}

int cmd_assemble(const Options& opt) {
    if (!opt.has_r0) throw InvalidParameter("assemble requires --r0");
    const Params params = params_of(opt);
    const ShotResult shot = shoot(params, opt.r0, shoot_config(opt));
    GeneratingCurve curve;
    try {
        curve = assemble(params, shot);
    } catch (const InvalidParameter& e) {
        throw SolverError(std::string("arc at the given r0 cannot be assembled: ") + e.what());
    }
    const Certificate cert = certify(curve);
    const HCheck h = check_H(curve, params);
    const double res_alpha = params.family.kind == FamilyKind::S2n
                                 ? std::abs(shot.state_exit.alpha)
                                 : std::abs(shot.state_exit.alpha -
                                            beta_angle(shot.state_exit.point()));
    const double res_wall = wall_residual(params, shot.state_exit);

    fs::create_directories(opt.out_dir);
    {
        std::ostringstream os;
        io::write_curve_csv(os, curve);
        write_file(fs::path(opt.out_dir) / "curve.csv", os.str());
    }
    write_file(fs::path(opt.out_dir) / "curve.json", json_text(io::curve_meta_json(curve)));
    write_file(fs::path(opt.out_dir) / "certificate.json",
               json_text(io::certificate_json(params, cert, shot.r0, h, res_alpha, res_wall)));
    {
        std::ostringstream os;
        io::write_svg(os, curve);
        write_file(fs::path(opt.out_dir) / "curve.svg", os.str());
    }
    return kExitOk;
}

int cmd_verify(const Options& opt) {
    const auto grid = default_claim_grid();
    const ClaimSuiteReport report = run_claim_suite(grid, shoot_config(opt));
    fs::create_directories(opt.out_dir);
    write_file(fs::path(opt.out_dir) / "claims.json", json_text(io::claims_json(report)));
    return report.all_pass ? kExitOk : kExitChecksFailed;
}

int cmd_sweep(const Options& opt) {
    (void)family_kind_from_string(opt.family);  // validate before any output
    fs::create_directories(opt.out_dir);

    std::ostringstream summary;
    summary << "lambda,r0_star,length,max_H_residual,status\n";
    io::json failures = io::json::array();
    bool all_ok = true;

    for (double lambda : opt.lambdas) {
        Options item = opt;
        item.lambda = lambda;
        std::ostringstream name;
        name << "lambda-" << lambda;
        const fs::path dir = fs::path(opt.out_dir) / name.str();
        try {
            const Params params = params_of(item);
            const SolveArtifacts art = run_solve(params, item);
            write_solve_outputs(dir, params, item, art);
            summary << io::format_full(lambda) << ',' << io::format_full(art.solve.r0_star)
                    << ',' << io::format_full(art.curve.length) << ','
                    << io::format_full(art.h.worst()) << ",ok\n";
        } catch (const Error& e) {
            all_ok = false;
            summary << io::format_full(lambda) << ",,,,failed\n";
            failures.push_back({{"lambda", lambda}, {"message", e.what()}});
        }
    }

    write_file(fs::path(opt.out_dir) / "summary.csv", summary.str());
    if (!failures.empty()) {
        write_file(fs::path(opt.out_dir) / "failures.json", json_text(io::json{{"failures", failures}}));
    }
    return all_ok ? kExitOk : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Closed constant-mean-curvature generating curves in sphere quotients, by "
                 "shooting and reflection assembly"};
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.footer("Config file keys are the long option names: family, n, lambda, r0, rtol, atol,\n"
               "event-tol, tol-r0, strict-monitors, out, plot, lambdas.");

    app.add_option("--family", opt.family, "family: s2n or s3n-1")
        ->check(CLI::IsMember({"s2n", "s3n-1"}))
        ->capture_default_str();
    app.add_option("--n", opt.n, "block dimension parameter, n >= 2")->capture_default_str();
    app.add_option("--lambda", opt.lambda, "mean-curvature target, > 0")->capture_default_str();
    auto* r0_opt = app.add_option("--r0", opt.r0, "initial radius for shoot/assemble");
    app.add_option("--rtol", opt.rtol, "integrator relative tolerance")->capture_default_str();
    app.add_option("--atol", opt.atol, "integrator absolute tolerance")->capture_default_str();
    app.add_option("--event-tol", opt.event_tol, "event localization tolerance (arc length)")
        ->capture_default_str();
    app.add_option("--tol-r0", opt.tol_r0, "bisection tolerance on the initial radius")
        ->capture_default_str();
    app.add_flag("--strict-monitors", opt.strict_monitors,
                 "treat monitor failures as hard failures");
    app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    app.add_flag("--plot", opt.plot, "also write an SVG chart figure");
    app.add_option("--lambdas", opt.lambdas, "sweep: mean-curvature targets")->delimiter(',');

    CLI::App* c_shoot = app.add_subcommand("shoot", "integrate one trajectory from --r0");
    CLI::App* c_solve = app.add_subcommand("solve", "locate r0*, assemble and certify the curve");
    CLI::App* c_assemble =
        app.add_subcommand("assemble", "assemble and certify the curve shot from --r0");
    CLI::App* c_verify = app.add_subcommand("verify", "run the bound suite on the default grid");
    CLI::App* c_sweep = app.add_subcommand("sweep", "run solve for each value in --lambdas");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << json_text(io::error_json("invalid-config", e.what()));
        return kExitInvalidConfig;
    }
    opt.has_r0 = r0_opt->count() > 0;

    try {
        if (c_shoot->parsed()) return cmd_shoot(opt);
        if (c_solve->parsed()) return cmd_solve(opt);
        if (c_assemble->parsed()) return cmd_assemble(opt);
        if (c_verify->parsed()) return cmd_verify(opt);
        if (c_sweep->parsed()) return cmd_sweep(opt);
        return emit_error(kExitInvalidConfig, "invalid-config", "no subcommand given");
    } catch (const InvalidParameter& e) {
        return emit_error(kExitInvalidConfig, "invalid-config", e.what());
    } catch (const SolverError& e) {
        return emit_error(kExitSolverFailure, "solver-failure", e.what());
    } catch (const SingularCoordinate& e) {
        return emit_error(kExitSolverFailure, "singular-coordinate", e.what());
    } catch (const IntegrationError& e) {
        return emit_error(kExitSolverFailure, "integration-failure", e.what());
    } catch (const std::exception& e) {
        return emit_error(kExitIo, "io-failure", e.what());
    }
}
