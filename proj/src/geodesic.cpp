#include "geolab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace geolab {

Mat2L operator*(const Mat2L& x, const Mat2L& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2d to_real(const Mat2L& g) {
    return {static_cast<double>(g.a), static_cast<double>(g.b), static_cast<double>(g.c), static_cast<double>(g.d)};
}

Mat2Z to_exact(const Mat2L& g) { return Mat2Z(Int(static_cast<long>(g.a)), Int(static_cast<long>(g.b)), Int(static_cast<long>(g.c)), Int(static_cast<long>(g.d))); }

Mat2d diag_flow(double t) { return {std::exp(t / 2), 0.0, 0.0, std::exp(-t / 2)}; }

static void fix_sign(Mat2d& M, Mat2L& G) {
    if (M.c < 0 || (M.c == 0 && M.d < 0)) {
        M = {-M.a, -M.b, -M.c, -M.d};
        G = {-G.a, -G.b, -G.c, -G.d};
    }
}

static SurfacePoint describe(const Mat2d& M) {
    SurfacePoint p;
    double w2 = M.c * M.c + M.d * M.d;
    p.x = (M.b * M.d + M.a * M.c) / w2;
    p.y = 1.0 / w2;
    double th = M_PI / 2 - 2 * std::atan2(M.c, M.d);
    th = std::fmod(th, 2 * M_PI);
    if (th < 0) th += 2 * M_PI;
    if (th >= 2 * M_PI) th -= 2 * M_PI;
    p.theta = th;
    p.height = std::sqrt(p.y);
    p.g = M;
    return p;
}

Reduction reduce_to_fundamental_domain(const Mat2d& g) {
    double scale = std::max({std::fabs(g.a), std::fabs(g.b), std::fabs(g.c), std::fabs(g.d), 1.0});
    if (std::fabs(g.det() - 1.0) > kUnimodularTol * scale * scale)
        throw std::invalid_argument("reduce_to_fundamental_domain: determinant is not 1");
    Mat2d M = g;
    Mat2L G;
    for (int it = 0; it < 10000; ++it) {
        double w2 = M.c * M.c + M.d * M.d;
        double x = (M.b * M.d + M.a * M.c) / w2;
        double n = std::floor(x + 0.5);
        if (n != 0) {
            M.a -= n * M.c;
            M.b -= n * M.d;
            auto k = static_cast<std::int64_t>(n);
            G.a -= k * G.c;
            G.b -= k * G.d;
            x -= n;
        }
        double y = 1.0 / w2;
        double r2 = x * x + y * y;
        bool inside = r2 < 1.0 - 1e-13;
        bool on_arc_right = !inside && r2 < 1.0 + 1e-13 && x > 1e-13;
        if (!inside && !on_arc_right) break;
        M = {-M.c, -M.d, M.a, M.b};
        G = {-G.c, -G.d, G.a, G.b};
    }
    fix_sign(M, G);
    return {describe(M), G};
}

bool in_fundamental_domain(double x, double y) { return std::fabs(x) <= 0.5 + 1e-12 && x * x + y * y >= 1.0 - 1e-12; }

SurfacePoint point_from_coordinates(double x, double y, double theta) {
    double phi = (M_PI / 2 - theta) / 2;
    double sy = std::sqrt(y);
    Mat2d n_a{sy, x / sy, 0.0, 1.0 / sy};
    Mat2d k{std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi)};
    Mat2d M = n_a * k;
    Mat2L G;
    fix_sign(M, G);
    return describe(M);
}

double lattice_height(const Mat2d& basis) {
    double covol = std::fabs(basis.det());
    if (covol <= 0) throw std::invalid_argument("lattice_height: degenerate lattice");
    double s = 1.0 / std::sqrt(covol);
    double u[2] = {basis.a * s, basis.b * s}, v[2] = {basis.c * s, basis.d * s};
    // Lagrange-Gauss reduction
    auto n2 = [](const double* w) { return w[0] * w[0] + w[1] * w[1]; };
    if (n2(u) > n2(v)) std::swap(u, v);
    for (int it = 0; it < 1000; ++it) {
        double mu = std::round((u[0] * v[0] + u[1] * v[1]) / n2(u));
        v[0] -= mu * u[0];
        v[1] -= mu * u[1];
        if (n2(v) >= n2(u)) break;
        std::swap(u, v);
    }
    return 1.0 / std::sqrt(n2(u));
}

double height(const SurfacePoint& p) { return std::sqrt(p.y); }

Mat2d matrix_log(const Mat2d& Min) {
    Mat2d M = Min;
    double tr = M.a + M.d;
    if (tr < 0) {
        M = {-M.a, -M.b, -M.c, -M.d};
        tr = -tr;
    }
    double h = tr / 2;
    double f;
    if (std::fabs(h - 1) < 1e-8) {
        f = 1 - (h - 1) / 3;
    } else if (h > 1) {
        double th = std::acosh(h);
        f = th / std::sinh(th);
    } else {
        double th = std::acos(h);
        f = th / std::sin(th);
    }
    return {f * (M.a - h), f * M.b, f * M.c, f * (M.d - h)};
}

double log_norm(const Mat2d& M) {
    Mat2d X = matrix_log(M);
    return std::sqrt(X.a * X.a + X.b * X.b + X.c * X.c + X.d * X.d);
}

const std::vector<Mat2L>& short_words() {
    static const std::vector<Mat2L> words = [] {
        const Mat2L S{0, -1, 1, 0}, T{1, 1, 0, 1}, Ti{1, -1, 0, 1};
        auto key = [](Mat2L m) {
            if (m.a < 0 || (m.a == 0 && (m.b < 0 || (m.b == 0 && m.c < 0)))) m = {-m.a, -m.b, -m.c, -m.d};
            return std::array<std::int64_t, 4>{m.a, m.b, m.c, m.d};
        };
        std::set<std::array<std::int64_t, 4>> seen{key(Mat2L{})};
        std::vector<Mat2L> out{Mat2L{}}, frontier{Mat2L{}};
        for (int len = 1; len <= 4; ++len) {
            std::vector<Mat2L> next;
            for (const auto& w : frontier)
                for (const auto& gen : {S, T, Ti}) {
                    Mat2L m = gen * w;
                    if (seen.insert(key(m)).second) {
                        out.push_back(m);
                        next.push_back(m);
                    }
                }
            frontier = next;
        }
        return out;
    }();
    return words;
}

double group_distance(const Mat2d& g1, const Mat2d& g2) { return log_norm(inverse(g1) * g2); }

double distance(const SurfacePoint& p, const SurfacePoint& q) {
    Mat2d pinv = inverse(p.g);
    double best = log_norm(pinv * q.g);
    for (const auto& w : short_words()) best = std::min(best, log_norm(pinv * (to_real(w) * q.g)));
    return best;
}

std::pair<QuadIrr, QuadIrr> endpoints(const QuadForm& q) {
    if (q.a == 0) throw std::invalid_argument("endpoints: a = 0, move the form first");
    Int d = q.disc();
    if (d <= 0 || is_square(d)) throw std::invalid_argument("endpoints: need positive non-square discriminant");
    return {QuadIrr(-q.b, -1, 2 * q.a, d), QuadIrr(-q.b, 1, 2 * q.a, d)};
}

LatticeForm form_from_lattice(const Mat2d& B, double sqrt_d) {
    double vol = std::fabs(B.det());
    if (vol <= 0) throw std::invalid_argument("form_from_lattice: degenerate lattice");
    double s = sqrt_d / vol;
    double coef[3] = {s * B.a * B.b, s * (B.a * B.d + B.b * B.c), s * B.c * B.d};
    LatticeForm out;
    Int r[3];
    for (int i = 0; i < 3; ++i) {
        double rr = std::round(coef[i]);
        out.residual = std::max(out.residual, std::fabs(coef[i] - rr));
        r[i] = Int(rr);
    }
    out.form = QuadForm(r[0], r[1], r[2]);
    return out;
}

Mat2d base_matrix(const QuadForm& q) {
    if (q.a == 0) throw std::invalid_argument("base_matrix: a = 0");
    double d = to_double(q.disc());
    double sd = std::sqrt(d), a = to_double(q.a), b = to_double(q.b), c = to_double(q.c);
    double s = a > 0 ? 1.0 : -1.0;
    double alpha = std::sqrt(std::fabs(a) / sd);
    // root (b - sqrt d)/(2a) written without cancellation
    double rho = (b > 0) ? 2 * c / (b + sd) : (b - sd) / (2 * a);
    double sigma = (b >= 0) ? (b + sd) / (2 * a) : 2 * c / (b - sd);
    return {alpha, s * alpha, alpha * rho, s * alpha * sigma};
}

GeodesicOrbit make_orbit(const FormClass& fc, const Int& d) {
    GeodesicOrbit o;
    o.d = d;
    o.cls = fc;
    const QuadForm& q = fc.canonical;
    o.ends = endpoints(q);
    o.h = {QuadIrr(q.b, 1, 1, d), QuadIrr(q.b, -1, 1, d), QuadIrr(2 * q.c, 0, 1, d), QuadIrr(2 * q.c, 0, 1, d)};
    double t = 0;
    for (const auto& f : fc.cycle) {
        o.base.push_back(base_matrix(f));
        o.times.push_back(t);
        t += cycle_step_time(d, f.b);
    }
    o.period = t;
    o.height_period = fc.twin_cycle.empty() ? t / 2 : t;
    Mat2Z A;
    for (const auto& s : fc.steps) A = s * A;
    o.automorph = A;
    return o;
}

static Mat2d orbit_matrix(const GeodesicOrbit& o, double t, std::size_t& idx) {
    double tt = std::fmod(t, o.period);
    if (tt < 0) tt += o.period;
    auto it = std::upper_bound(o.times.begin(), o.times.end(), tt);
    std::size_t i = static_cast<std::size_t>(it - o.times.begin()) - 1;
    std::size_t n = o.times.size();
    double next_time = (i + 1 < n) ? o.times[i + 1] : o.period;
    // start from the nearer reduced form to keep the matrix entries small
    if (next_time - tt < tt - o.times[i]) {
        idx = (i + 1) % n;
        return o.base[idx] * diag_flow(tt - next_time);
    }
    idx = i;
    return o.base[i] * diag_flow(tt - o.times[i]);
}

SurfacePoint point_at(const GeodesicOrbit& o, double t) {
    std::size_t idx;
    return reduce_to_fundamental_domain(orbit_matrix(o, t, idx)).point;
}

OrbitPoint point_with_form(const GeodesicOrbit& o, double t) {
    std::size_t idx;
    Reduction r = reduce_to_fundamental_domain(orbit_matrix(o, t, idx));
    QuadForm f = gl2_act(to_exact(r.gamma), o.cls.cycle[idx]);
    return {r.point, {to_i64(f.a), to_i64(f.b), to_i64(f.c)}};
}

std::vector<SurfacePoint> sample_orbit(const GeodesicOrbit& o, std::size_t n, double offset) {
    if (n == 0) throw std::invalid_argument("sample_orbit: n must be positive");
    std::vector<SurfacePoint> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(point_at(o, offset + o.period * static_cast<double>(k) / static_cast<double>(n)));
    return out;
}

}  // namespace geolab
