#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "geolab/geodesic.hpp"

using namespace geolab;

namespace {

Mat2d random_sl2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-3, 3);
    double a = U(rng), b = U(rng), c = U(rng);
    if (std::fabs(a) < 0.2) a += 1;
    return {a, b, c, (1 + b * c) / a};
}

std::pair<double, double> mobius(const Mat2d& g, double x, double y) {
    // g.(x + iy) for the standard action
    double re_n = g.a * x + g.b, im_n = g.a * y, re_d = g.c * x + g.d, im_d = g.c * y;
    double den = re_d * re_d + im_d * im_d;
    return {(re_n * re_d + im_n * im_d) / den, (im_n * re_d - re_n * im_d) / den};
}

// Largest imaginary part over gamma.z for integer gamma with entries up to K: the only
// quantity the height depends on, found without the reduction algorithm.
double brute_max_im(double x, double y, long K) {
    double best = y;
    for (long c = 0; c <= K; ++c)
        for (long d = -K; d <= K; ++d) {
            if (std::gcd(c, d) != 1) continue;
            double re = c * x + d, im = c * y;
            best = std::max(best, y / (re * re + im * im));
        }
    return best;
}

double brute_shortest(const Mat2d& B, long K) {
    double best = INFINITY;
    for (long u = -K; u <= K; ++u)
        for (long v = -K; v <= K; ++v) {
            if (u == 0 && v == 0) continue;
            double x = u * B.a + v * B.c, y = u * B.b + v * B.d;
            best = std::min(best, std::hypot(x, y));
        }
    return best;
}

}  // namespace

TEST_CASE("reduction lands in the fundamental domain at maximal height") {
    std::mt19937_64 rng(21);
    for (int it = 0; it < 300; ++it) {
        Mat2d g = random_sl2(rng);
        Reduction R = reduce_to_fundamental_domain(g);
        const SurfacePoint& p = R.point;
        CHECK(in_fundamental_domain(p.x, p.y));
        Mat2d h = to_real(R.gamma) * g;
        double s = (std::fabs(h.a - p.g.a) < 1e-6) ? 1 : -1;
        CHECK(s * h.a == doctest::Approx(p.g.a).epsilon(1e-8));
        CHECK(s * h.d == doctest::Approx(p.g.d).epsilon(1e-8));
        auto [x0, y0] = mobius(g, 0, 1);
        CHECK(p.y == doctest::Approx(brute_max_im(x0, y0, 60)).epsilon(1e-9));
        CHECK(height(p) == doctest::Approx(std::sqrt(p.y)));
    }
    CHECK_THROWS(reduce_to_fundamental_domain(Mat2d{2, 0, 0, 1}));
}

TEST_CASE("lattice height through the shortest vector") {
    std::mt19937_64 rng(22);
    for (int it = 0; it < 200; ++it) {
        Mat2d B = random_sl2(rng);
        double h = lattice_height(B);
        CHECK(h == doctest::Approx(1 / brute_shortest(B, 40)).epsilon(1e-9));
        Mat2d gamma{2, 1, 1, 1};
        CHECK(lattice_height(gamma * B) == doctest::Approx(h).epsilon(1e-9));
    }
    for (double s : {1.0, 1.5, 7.0}) CHECK(lattice_height(Mat2d{1 / s, 0, 0, s}) == doctest::Approx(s));
}

TEST_CASE("flow, logarithm and distance") {
    for (double t : {-2.0, 0.3, 1.0}) {
        Mat2d a = diag_flow(t);
        CHECK(a.det() == doctest::Approx(1));
        CHECK(log_norm(a) == doctest::Approx(std::fabs(t) / std::sqrt(2.0)));
    }
    Mat2d L = matrix_log(Mat2d{2, 1, 1, 1});
    CHECK(L.a + L.d == doctest::Approx(0).epsilon(1e-12));
    std::mt19937_64 rng(23);
    for (int it = 0; it < 100; ++it) {
        SurfacePoint p = reduce_to_fundamental_domain(random_sl2(rng)).point;
        SurfacePoint q = reduce_to_fundamental_domain(random_sl2(rng)).point;
        CHECK(distance(p, p) == doctest::Approx(0).epsilon(1e-9));
        CHECK(distance(p, q) == doctest::Approx(distance(q, p)).epsilon(1e-9));
        CHECK(distance(p, q) <= group_distance(p.g, q.g) + 1e-12);
        SurfacePoint pf = reduce_to_fundamental_domain(p.g * diag_flow(0.01)).point;
        CHECK(distance(p, pf) <= 0.01 / std::sqrt(2.0) + 1e-9);
    }
}

TEST_CASE("base matrices and lattice forms") {
    for (long d : {5L, 13L, 229L, 377L}) {
        for (const auto& fc : enumerate_classes(Int(d))) {
            for (const auto& q : fc.cycle) {
                Mat2d g = base_matrix(q);
                CHECK(g.det() == doctest::Approx(1).epsilon(1e-12));
                LatticeForm L = form_from_lattice(g, std::sqrt(static_cast<double>(d)));
                CHECK(L.residual < 1e-8);
                CHECK(L.form.disc() == d);
            }
        }
    }
}

TEST_CASE("closed orbits: period, height period and form labels") {
    for (long d : {5L, 12L, 13L, 229L, 377L, 1000001L}) {
        ClassTable T((Int(d)));
        PellData P = pell_fundamental(Int(d));
        for (const auto& fc : T.classes()) {
            GeodesicOrbit o = make_orbit(fc, Int(d));
            CHECK(o.period == doctest::Approx(2 * P.log_eps_plus).epsilon(1e-10));
            CHECK(o.height_period == doctest::Approx(fc.twin_cycle.empty() ? o.period / 2 : o.period));
            CHECK(gl2_act(o.automorph, fc.canonical) == fc.canonical);
            for (double t : {0.0, 0.37, 1.9}) {
                SurfacePoint a = point_at(o, t), b = point_at(o, t + o.period);
                CHECK(a.x == doctest::Approx(b.x).epsilon(1e-7));
                CHECK(a.y == doctest::Approx(b.y).epsilon(1e-7));
                CHECK(height(point_at(o, t + o.height_period)) == doctest::Approx(height(a)).epsilon(1e-7));
                OrbitPoint op = point_with_form(o, t);
                QuadForm f(Int(op.form[0]), Int(op.form[1]), Int(op.form[2]));
                CHECK(f.disc() == d);
                CHECK(T.index_of(f) == fc.index);
            }
            CHECK(sample_orbit(o, 17, 0.1).size() == 17);
        }
    }
}

TEST_CASE("discriminant 5 reaches height (5/4)^(1/4)") {
    auto cls = enumerate_classes(Int(5));
    REQUIRE(cls.size() == 1);
    GeodesicOrbit o = make_orbit(cls.front(), Int(5));
    double best = 0;
    for (const auto& p : sample_orbit(o, 200000, 0)) best = std::max(best, p.height);
    double top = std::pow(1.25, 0.25);
    CHECK(best <= top + 1e-12);
    CHECK(best == doctest::Approx(top).epsilon(1e-6));
}
