#include <doctest.h>

#include <cmath>
#include <numeric>

#include "geolab/stats.hpp"

using namespace geolab;

namespace {

// (3/pi) * area by a midpoint rule in (x, s = 1/y), times the angular fraction.
double liouville_grid(const TestRegion& R, int n) {
    double s_max = 1 / 0.8660254037844386, hx = 1.0 / n, hs = s_max / n, area = 0;
    for (int i = 0; i < n; ++i) {
        double x = -0.5 + (i + 0.5) * hx;
        for (int j = 0; j < n; ++j) {
            double s = (j + 0.5) * hs, y = 1 / s;
            if (x * x + y * y < 1) continue;
            if (x >= R.x0 && x <= R.x1 && y >= R.y0 && y <= R.y1) area += hx * hs;
        }
    }
    return 3 / M_PI * area * (R.th1 - R.th0) / (2 * M_PI);
}

std::size_t brute_hyperboloid(long d, const CoefBox& box) {
    double sd = std::sqrt(static_cast<double>(d));
    long A = static_cast<long>(std::ceil(std::max(std::fabs(box.lo[0]), std::fabs(box.hi[0])) * sd)) + 1;
    long Bm = static_cast<long>(std::ceil(std::max(std::fabs(box.lo[1]), std::fabs(box.hi[1])) * sd)) + 1;
    std::size_t n = 0;
    for (long a = -A; a <= A; ++a)
        for (long b = -Bm; b <= Bm; ++b) {
            if (a == 0) {
                if (b * b == d) continue;  // never for non-square d
                continue;
            }
            long N = b * b - d;
            if (N % (4 * a) != 0) continue;
            long c = N / (4 * a);
            if (std::gcd(std::gcd(std::labs(a), std::labs(b)), std::labs(c)) != 1) continue;
            if (box.contains(a / sd, b / sd, c / sd)) ++n;
        }
    return n;
}

double cone_grid(const CoefBox& box, int n) {
    double lo[3], hi[3];
    for (int i = 0; i < 3; ++i) {
        lo[i] = std::min(box.lo[i], 0.0);
        hi[i] = std::max(box.hi[i], 0.0);
    }
    double h[3] = {(hi[0] - lo[0]) / n, (hi[1] - lo[1]) / n, (hi[2] - lo[2]) / n}, v = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double a = lo[0] + (i + 0.5) * h[0], b = lo[1] + (j + 0.5) * h[1], c = lo[2] + (k + 0.5) * h[2];
                double D = b * b - 4 * a * c;
                if (D <= 0 || D > 1) continue;
                double r = std::sqrt(D);
                if (box.contains(a / r, b / r, c / r)) v += h[0] * h[1] * h[2];
            }
    return v;
}

}  // namespace

TEST_CASE("Liouville measure of boxes") {
    CHECK(liouville_measure(TestRegion{}) == doctest::Approx(1).epsilon(1e-12));
    TestRegion cusp;
    cusp.y0 = 2;
    CHECK(liouville_measure(cusp) == doctest::Approx(3 / (2 * M_PI)).epsilon(1e-12));
    for (TestRegion R : {TestRegion{-0.3, 0.2, 0.7, 1.4, 0, M_PI}, TestRegion{0, 0.5, 0.9, INFINITY, 1, 2},
                         TestRegion{-0.5, 0.5, 1.1, 3, 0, 2 * M_PI}}) {
        CHECK(liouville_measure(R) == doctest::Approx(liouville_grid(R, 1500)).epsilon(3e-3));
    }
    CHECK_THROWS_AS(liouville_measure(TestRegion{-0.7, 0.2, 1, 2, 0, 1}), RegionError);
    CHECK_THROWS_AS(liouville_measure(TestRegion{-0.2, 0.2, 1, 2, 0, 7}), RegionError);
    CHECK_THROWS_AS(liouville_measure(TestRegion{0.2, -0.2, 1, 2, 0, 1}), RegionError);
}

TEST_CASE("cusp mass and the d = 5 ceiling") {
    GeodesicSet G = make_geodesic_set(Int(5));
    auto pts = mu_d_sample(G, 20000, 7);
    CHECK(cusp_mass(pts, 2) == 0);
    CHECK(cusp_mass(pts, 0.5) == 1);
    auto prof = cusp_mass_profile(pts, {1.0, 1.05});
    REQUIRE(prof.size() == 2);
    CHECK(prof[0].mass >= prof[1].mass);
    CHECK(prof[1].scaled == doctest::Approx(prof[1].mass * 1.05 * 1.05));
}

TEST_CASE("sampling is reproducible and per-class") {
    GeodesicSet G = make_geodesic_set(Int(229));
    REQUIRE(G.orbits.size() == 3);
    auto a = mu_d_sample(G, 50, 99, SampleLayout::Independent), b = mu_d_sample(G, 50, 99, SampleLayout::Independent);
    REQUIRE(a.size() == 150);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].t == b[i].t);
        CHECK(a[i].class_index == static_cast<int>(i / 50));
        CHECK(a[i].t >= 0);
        CHECK(a[i].t < G.orbits[a[i].class_index].period);
    }
    CHECK(class_seed(1, 0) != class_seed(1, 1));
    CHECK_THROWS(mu_d_sample(G, 0, 1));
}

TEST_CASE("excursion components match ideals class by class") {
    for (long d : {229L, 1001L, 4005L, 10001L}) {
        GeodesicSet G = make_geodesic_set(Int(d));
        HeightProfile prof = height_profile(G, 0.002);
        for (double H : {1.05, 1.2, 1.5, 2.0}) {
            if (H > std::pow(static_cast<double>(d), 0.25)) continue;
            ComponentReport R = cusp_components(G, prof, H);
            CAPTURE(d);
            CAPTURE(H);
            if (R.inconclusive) continue;
            CHECK(R.components == R.ideals);
            CHECK(R.match_by_class());
        }
    }
}

TEST_CASE("delta grid, slopes and rank correlation") {
    auto g = delta_grid(1e6, 1.5, 4);
    REQUIRE(!g.empty());
    CHECK(g.front() == doctest::Approx(1 / (3 * 1.5 * 1.5)));
    CHECK(g.back() >= std::pow(1e6, -0.25) * (1 - 1e-12));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(std::pow(2.0, -0.25)));
    CHECK_THROWS(delta_grid(10, 3, 4));
    std::vector<double> x{1, 2, 4, 8}, y{3, 12, 48, 192};
    CHECK(loglog_slope(x, y) == doctest::Approx(2));
    CHECK(spearman(x, y) == doctest::Approx(1));
    CHECK(spearman(x, {4, 3, 2, 1}) == doctest::Approx(-1));
    CHECK_THROWS(spearman(x, {1, 2}));
}

TEST_CASE("pair counts agree with an all-pairs loop") {
    GeodesicSet G = make_geodesic_set(Int(100001));
    auto pts = mu_d_sample(G, 1500 / G.orbits.size() + 1, 5, SampleLayout::Independent);
    const double H = 1.3;
    auto deltas = delta_grid(100001, H, 2);
    PairCorrStat st = pair_correlation(G, pts, H, deltas);

    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].p.height < H) used.push_back(i);
    CHECK(st.used == used.size());
    auto form_of = [&](const Mat2d& g) {
        LatticeForm L = form_from_lattice(g, G.sqrt_d);
        return std::array<std::string, 3>{L.form.a.get_str(), L.form.b.get_str(), L.form.c.get_str()};
    };
    std::vector<std::uint64_t> cross(deltas.size(), 0), diag(deltas.size(), 0);
    for (std::size_t i : used) {
        Mat2d gi = pts[i].p.g, ginv = inverse(gi);
        auto fi = form_of(gi);
        for (std::size_t j : used) {
            if (i == j) continue;
            Mat2d best_g = pts[j].p.g;
            double best = log_norm(ginv * best_g);
            for (const auto& w : short_words()) {
                Mat2d M = to_real(w) * pts[j].p.g;
                double v = log_norm(ginv * M);
                if (v < best) best = v, best_g = M;
            }
            bool same = form_of(best_g) == fi;
            for (std::size_t k = 0; k < deltas.size(); ++k)
                if (best < deltas[k]) ++(same ? diag[k] : cross[k]);
        }
    }
    auto sorted = deltas;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint64_t> cross_s(deltas.size()), diag_s(deltas.size());
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        std::size_t pos = static_cast<std::size_t>(std::find(sorted.begin(), sorted.end(), deltas[k]) - sorted.begin());
        cross_s[pos] = cross[k];
        diag_s[pos] = diag[k];
    }
    CHECK(st.cross_pairs == cross_s);
    CHECK(st.diag_pairs == diag_s);
    std::uint64_t total = std::accumulate(cross.begin(), cross.end(), std::uint64_t{0}) +
                          std::accumulate(diag.begin(), diag.end(), std::uint64_t{0});
    CHECK(total > 0);
}

TEST_CASE("integer points on the hyperboloid") {
    for (long d : {5L, 13L, 40L, 229L, 1001L}) {
        for (double R : {0.5, 1.0, 2.0}) {
            CoefBox box = CoefBox::max_norm(R);
            CAPTURE(d);
            CAPTURE(R);
            CHECK(count_hyperboloid_points(Int(d), box) == brute_hyperboloid(d, box));
            for (const auto& p : hyperboloid_points(Int(d), box)) CHECK(p.form.disc() == d);
        }
        CoefBox skew{{0, -1, -0.5}, {1.5, 0.2, 2}};
        CHECK(count_hyperboloid_points(Int(d), skew) == brute_hyperboloid(d, skew));
    }
}

TEST_CASE("cone measure matches a deterministic grid") {
    for (CoefBox box : {CoefBox::max_norm(1), CoefBox{{0, -1, -0.5}, {1.5, 0.2, 2}}}) {
        MonteCarlo mc = cone_measure(box, 2000000, 3);
        double ref = cone_grid(box, 220);
        CHECK(std::fabs(mc.value - ref) < 5 * mc.stderr_ + 0.01 * ref);
    }
    CHECK(cone_measure(CoefBox::max_norm(1), 0, 1).value == 0);
}

TEST_CASE("volume identity for a non-fundamental discriminant") {
    VolumeReport r = volume_identity(Int(20));
    CHECK(r.conductor == 2);
    CHECK(r.fundamental == 5);
    CHECK(r.ratio_formula == doctest::Approx(3));
    CHECK(r.ratio_observed == doctest::Approx(3).epsilon(1e-12));
    CHECK(r.volume_unit == doctest::Approx(r.volume_cycle).epsilon(1e-10));
    VolumeReport r45 = volume_identity(Int(45));  // f = 3, (5/3) = -1
    CHECK(r45.ratio_observed == doctest::Approx(4).epsilon(1e-12));
    CHECK_THROWS(volume_identity(Int(16)));
}
