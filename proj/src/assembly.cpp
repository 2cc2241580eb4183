#include "cmcshoot/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cmcshoot/geometry.hpp"

namespace cmcshoot {

namespace {

const double kPi = std::acos(-1.0);

double wrap_to_pi(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a - kPi;
}

double chart_dist(double r1, double t1, double r2, double t2) {
    return std::hypot(r1 - r2, t1 - t2);
}

ShootingState eval_state(const ode::DenseTrajectory<3>& traj, double s) {
    return state_of(traj.eval(s));
}

// ---- S2n: four chart-level pieces ---------------------------------------

// Piecewise definition of the closed curve over [0, 4 s*]. `side` selects the
// one-sided limit at the seams (+1 from above, -1 from below).
ShootingState s2n_curve_state(const ode::DenseTrajectory<3>& arc, double s_star, double s,
                              int side) {
    const auto in_first = [&](double u) { return eval_state(arc, u); };
    const auto in_half = [&](double u, int sd) -> ShootingState {
        const bool first = (u < s_star) || (u == s_star && sd < 0);
        if (first) return in_first(u);
        const ShootingState st = in_first(2.0 * s_star - u);
        return {kPi - st.r, st.theta, -st.alpha};
    };
    const bool lower = (s < 2.0 * s_star) || (s == 2.0 * s_star && side < 0);
    if (lower) return in_half(s, side);
    const ShootingState st = in_half(4.0 * s_star - s, -side);
    return {st.r, kPi / 2.0 - st.theta, kPi - st.alpha};
}

// ---- S3nMinus1: ambient coordinate permutations --------------------------

struct Permutation {
    std::array<int, 3> idx{0, 1, 2};  // out[i] = in[idx[i]]
};

Permutation compose(const Permutation& outer, const Permutation& inner) {
    // (outer . inner)(t) = outer(inner(t))
    Permutation p;
    for (int i = 0; i < 3; ++i) p.idx[i] = inner.idx[outer.idx[i]];
    return p;
}

constexpr Permutation kSwapXY{{1, 0, 2}};
constexpr Permutation kSwapXZ{{2, 1, 0}};

struct AmbientSample {
    std::array<double, 3> pos{};
    std::array<double, 3> vel{};
};

AmbientSample ambient_sample(const ShootingState& st) {
    const double sr = std::sin(st.r), cr = std::cos(st.r);
    const double stg = std::sin(st.theta), ctg = std::cos(st.theta);
    const double sa = std::sin(st.alpha), ca = std::cos(st.alpha);
    AmbientSample a;
    a.pos = {sr * ctg, sr * stg, cr};
    a.vel = {cr * ctg * ca - stg * sa, cr * stg * ca + ctg * sa, -sr * ca};
    return a;
}

std::array<double, 3> permute(const Permutation& p, const std::array<double, 3>& v) {
    return {v[p.idx[0]], v[p.idx[1]], v[p.idx[2]]};
}

// Chart state of a transformed sample; `forward` flips the velocity for
// parameter-reversed pieces.
ShootingState chart_of(const AmbientSample& a, const Permutation& p, bool forward) {
    const std::array<double, 3> pos = permute(p, a.pos);
    std::array<double, 3> vel = permute(p, a.vel);
    if (!forward) {
        for (double& c : vel) c = -c;
    }
    const double r = std::acos(std::clamp(pos[2], -1.0, 1.0));
    const double sr = std::sin(r);
    if (std::abs(sr) < kSingularTol) {
        throw SingularCoordinate("transformed curve sample lies on a coordinate pole");
    }
    const double theta = std::atan2(pos[1], pos[0]);
    const double st = std::sin(theta), ct = std::cos(theta), cr = std::cos(r);
    const double cos_a = cr * ct * vel[0] + cr * st * vel[1] - sr * vel[2];
    const double sin_a = -st * vel[0] + ct * vel[1];
    return {r, theta, std::atan2(sin_a, cos_a)};
}

GeneratingCurve finish(GeneratingCurve curve) {
    const CurveSample& first = curve.samples.front();
    const CurveSample& last = curve.samples.back();
    const double closure = chart_dist(first.r, first.theta, last.r, last.theta);
    curve.closed = closure <= kClosureTol && curve.max_seam_gap() <= kClosureTol &&
                   curve.max_seam_defect() <= kSeamAngleTol;
    return curve;
}

}  // namespace

double GeneratingCurve::max_seam_gap() const {
    double g = 0.0;
    for (const SeamInfo& s : seams) g = std::max(g, s.position_gap);
    return g;
}

double GeneratingCurve::max_seam_defect() const {
    double d = 0.0;
    for (const SeamInfo& s : seams) d = std::max(d, s.angle_defect);
    return d;
}

GeneratingCurve assemble_s2n(const Params& params, const ShotResult& shot,
                             int samples_per_curve) {
    if (params.family.kind != FamilyKind::S2n) {
        throw InvalidParameter("assemble_s2n requires family s2n");
    }
    const double alpha_res = std::abs(shot.state_exit.alpha);
    const double wall_res = std::abs(shot.state_exit.r - kPi / 2.0);
    if (alpha_res > kClosureTol || wall_res > kClosureTol) {
        throw InvalidParameter("arc does not reach {alpha = 0} and {r = pi/2}: residuals " +
                               std::to_string(alpha_res) + ", " + std::to_string(wall_res));
    }
    if (samples_per_curve < 8) throw InvalidParameter("samples_per_curve too small");

    const double s_star = shot.s_star;
    GeneratingCurve curve;
    curve.family = params.family;
    curve.lambda = params.lambda;
    curve.r0 = shot.r0;
    curve.s_star = s_star;
    curve.copies = 4;
    curve.length = 4.0 * s_star;

    const int n = samples_per_curve;
    curve.samples.reserve(static_cast<std::size_t>(n) + 1);
    double prev_alpha = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = curve.length * static_cast<double>(i) / static_cast<double>(n);
        ShootingState st = s2n_curve_state(shot.trajectory, s_star, s, -1);
        if (i > 0) {
            // The piece formulas already keep alpha continuous; unwrap guards
            // against residual-sized jumps only.
            st.alpha = prev_alpha + wrap_to_pi(st.alpha - prev_alpha);
        }
        prev_alpha = st.alpha;
        curve.samples.push_back({s, st.r, st.theta, st.alpha});
    }

    for (int seam = 1; seam <= 4; ++seam) {
        const double s = seam * s_star;
        const ShootingState below = s2n_curve_state(shot.trajectory, s_star, s, -1);
        const ShootingState above =
            seam == 4 ? s2n_curve_state(shot.trajectory, s_star, 0.0, +1)
                      : s2n_curve_state(shot.trajectory, s_star, s, +1);
        curve.seams.push_back({s, chart_dist(below.r, below.theta, above.r, above.theta),
                               std::abs(wrap_to_pi(above.alpha - below.alpha))});
    }
    return finish(std::move(curve));
}

GeneratingCurve assemble_s3n(const Params& params, const ShotResult& shot,
                             int samples_per_curve) {
    if (params.family.kind != FamilyKind::S3nMinus1) {
        throw InvalidParameter("assemble_s3n requires family s3n-1");
    }
    const double wall_res = wall_residual(params, shot.state_exit);
    const double ortho_res =
        std::abs(shot.state_exit.alpha - beta_angle(shot.state_exit.point()));
    if (shot.exit != ExitClass::GammaWall || wall_res > kClosureTol || ortho_res > kClosureTol) {
        throw InvalidParameter("arc does not meet {tan r cos theta = 1} orthogonally: residuals " +
                               std::to_string(wall_res) + ", " + std::to_string(ortho_res));
    }
    if (samples_per_curve < 12) throw InvalidParameter("samples_per_curve too small");

    const double s_star = shot.s_star;
    const AmbientSample start = ambient_sample(eval_state(shot.trajectory, 0.0));
    const AmbientSample stop = ambient_sample(shot.state_exit);

    // Walk the reflection orbit until the endpoint returns to the start.
    std::vector<Permutation> transforms{Permutation{}};
    const int max_copies = 12;
    int copies = 0;
    for (int c = 0;; ++c) {
        if (c >= max_copies) {
            throw SolverError("curve failed to close within " + std::to_string(max_copies) +
                              " reflected copies (exit residuals too large)");
        }
        const bool forward = c % 2 == 0;
        const std::array<double, 3> endpoint =
            permute(transforms.back(), forward ? stop.pos : start.pos);
        const std::array<double, 3> origin = start.pos;
        const double gap = std::hypot(endpoint[0] - origin[0], endpoint[1] - origin[1],
                                      endpoint[2] - origin[2]);
        if (c > 0 && gap <= kClosureTol) {
            copies = c + 1;
            break;
        }
        transforms.push_back(compose(transforms.back(), forward ? kSwapXZ : kSwapXY));
    }

    GeneratingCurve curve;
    curve.family = params.family;
    curve.lambda = params.lambda;
    curve.r0 = shot.r0;
    curve.s_star = s_star;
    curve.copies = copies;
    curve.length = copies * s_star;

    const int n = samples_per_curve;
    curve.samples.reserve(static_cast<std::size_t>(n) + 1);
    double prev_alpha = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = curve.length * static_cast<double>(i) / static_cast<double>(n);
        int c = std::min(static_cast<int>(s / s_star), copies - 1);
        const double u = s - c * s_star;
        const bool forward = c % 2 == 0;
        const double tau = forward ? u : s_star - u;
        const AmbientSample a = ambient_sample(eval_state(shot.trajectory, tau));
        ShootingState st = chart_of(a, transforms[static_cast<std::size_t>(c)], forward);
        if (i > 0) st.alpha = prev_alpha + wrap_to_pi(st.alpha - prev_alpha);
        prev_alpha = st.alpha;
        curve.samples.push_back({s, st.r, st.theta, st.alpha});
    }

    // Seam diagnostics from the one-sided limits under the exact transforms.
    for (int c = 0; c < copies; ++c) {
        const bool forward = c % 2 == 0;
        const AmbientSample& junction = forward ? stop : start;
        const ShootingState below = chart_of(junction, transforms[static_cast<std::size_t>(c)],
                                             forward);
        const std::size_t next = static_cast<std::size_t>((c + 1) % copies);
        const ShootingState above = chart_of(junction, transforms[next], !forward);
        curve.seams.push_back({(c + 1) * s_star,
                               chart_dist(below.r, below.theta, above.r, above.theta),
                               std::abs(wrap_to_pi(above.alpha - below.alpha))});
    }
    return finish(std::move(curve));
}

GeneratingCurve assemble(const Params& params, const ShotResult& shot, int samples_per_curve) {
    return params.family.kind == FamilyKind::S2n ? assemble_s2n(params, shot, samples_per_curve)
                                                 : assemble_s3n(params, shot, samples_per_curve);
}

namespace {

struct Segment {
    std::array<double, 2> a, b;
    std::size_t index;
};

double orient(const std::array<double, 2>& a, const std::array<double, 2>& b,
              const std::array<double, 2>& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool on_segment(const std::array<double, 2>& a, const std::array<double, 2>& b,
                const std::array<double, 2>& p) {
    return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
           std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}

bool segments_intersect(const Segment& s1, const Segment& s2) {
    const double o1 = orient(s1.a, s1.b, s2.a);
    const double o2 = orient(s1.a, s1.b, s2.b);
    const double o3 = orient(s2.a, s2.b, s1.a);
    const double o4 = orient(s2.a, s2.b, s1.b);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
        o4 != 0) {
        return true;
    }
    if (o1 == 0 && on_segment(s1.a, s1.b, s2.a)) return true;
    if (o2 == 0 && on_segment(s1.a, s1.b, s2.b)) return true;
    if (o3 == 0 && on_segment(s2.a, s2.b, s1.a)) return true;
    if (o4 == 0 && on_segment(s2.a, s2.b, s1.b)) return true;
    return false;
}

}  // namespace

bool polyline_simple(std::span<const std::array<double, 2>> points, bool closed) {
    std::vector<std::array<double, 2>> pts(points.begin(), points.end());
    if (closed && pts.size() > 1) {
        const auto& f = pts.front();
        const auto& l = pts.back();
        if (f[0] == l[0] && f[1] == l[1]) pts.pop_back();  // drop the duplicate closure point
    }
    const std::size_t m = pts.size();
    if (m < 3) return true;

    std::vector<Segment> segs;
    segs.reserve(m);
    const std::size_t seg_count = closed ? m : m - 1;
    double max_len = 0.0;
    double min_x = pts[0][0], min_y = pts[0][1];
    for (std::size_t i = 0; i < seg_count; ++i) {
        const Segment s{pts[i], pts[(i + 1) % m], i};
        if (s.a[0] == s.b[0] && s.a[1] == s.b[1]) continue;  // degenerate
        max_len = std::max(max_len, std::hypot(s.b[0] - s.a[0], s.b[1] - s.a[1]));
        min_x = std::min({min_x, s.a[0], s.b[0]});
        min_y = std::min({min_y, s.a[1], s.b[1]});
        segs.push_back(s);
    }
    if (segs.size() < 2) return true;
    const double cell = std::max(max_len, 1e-300);

    // Uniform grid hash; each segment registers in every cell its bounding
    // box overlaps (segments are never longer than one cell).
    struct CellKey {
        long x, y;
        bool operator==(const CellKey&) const = default;
    };
    struct CellHash {
        std::size_t operator()(const CellKey& k) const {
            return std::hash<long>()(k.x * 73856093L ^ k.y * 19349663L);
        }
    };
    std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
    const auto cell_of = [&](double x, double y) {
        return CellKey{static_cast<long>(std::floor((x - min_x) / cell)),
                       static_cast<long>(std::floor((y - min_y) / cell))};
    };

    const auto adjacent = [&](std::size_t i, std::size_t j) {
        const std::size_t d = i > j ? i - j : j - i;
        if (d <= 1) return true;
        return closed && d == seg_count - 1;
    };

    for (std::size_t si = 0; si < segs.size(); ++si) {
        const Segment& s = segs[si];
        const CellKey c1 = cell_of(std::min(s.a[0], s.b[0]), std::min(s.a[1], s.b[1]));
        const CellKey c2 = cell_of(std::max(s.a[0], s.b[0]), std::max(s.a[1], s.b[1]));
        for (long cx = c1.x; cx <= c2.x; ++cx) {
            for (long cy = c1.y; cy <= c2.y; ++cy) {
                auto& bucket = grid[CellKey{cx, cy}];
                for (std::size_t sj : bucket) {
                    if (adjacent(s.index, segs[sj].index)) continue;
                    if (segments_intersect(s, segs[sj])) return false;
                }
                bucket.push_back(si);
            }
        }
    }
    return true;
}

Certificate certify(const GeneratingCurve& curve) {
    if (curve.samples.size() < 4) throw InvalidParameter("curve has too few samples to certify");

    Certificate cert;
    cert.length = curve.length;
    cert.copies = curve.copies;
    cert.seam_defect = curve.max_seam_defect();

    const CurveSample& first = curve.samples.front();
    const CurveSample& last = curve.samples.back();
    cert.closure_gap = chart_dist(first.r, first.theta, last.r, last.theta);
    cert.closed = cert.closure_gap <= kClosureTol && curve.max_seam_gap() <= kClosureTol &&
                  cert.seam_defect <= kSeamAngleTol;

    std::vector<std::array<double, 2>> pts;
    pts.reserve(curve.samples.size());
    for (const CurveSample& cs : curve.samples) pts.push_back({cs.r, cs.theta});
    cert.simple = polyline_simple(pts, true);

    const bool s2n = curve.family.kind == FamilyKind::S2n;
    const double r_far = s2n ? kPi : kPi / 2.0;
    double dist = std::numeric_limits<double>::infinity();
    for (const CurveSample& cs : curve.samples) {
        dist = std::min({dist, cs.theta, kPi / 2.0 - cs.theta, cs.r, r_far - cs.r});
    }
    cert.min_boundary_dist = dist;
    return cert;
}

}  // namespace cmcshoot
