#include "geolab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "geolab/parallel.hpp"
#include "geolab/spatial.hpp"

namespace geolab {

double GeodesicSet::total_length() const {
    double s = 0;
    for (const auto& o : orbits) s += o.period;
    return s;
}

GeodesicSet make_geodesic_set(const Int& d) {
    ClassTable table(d);
    GeodesicSet G{d, table, pell_fundamental(d), {}, std::sqrt(to_double(d))};
    G.orbits.reserve(G.table.h());
    for (const auto& fc : G.table.classes()) G.orbits.push_back(make_orbit(fc, d));
    return G;
}

std::uint64_t class_seed(std::uint64_t seed, std::size_t class_index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(class_index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<Sample> mu_d_sample(const GeodesicSet& G, std::size_t per_class, std::uint64_t seed, SampleLayout layout) {
    if (per_class == 0) throw std::invalid_argument("mu_d_sample: per_class must be positive");
    std::size_t h = G.orbits.size();
    std::vector<Sample> out(h * per_class);
    parallel_for(h, [&](std::size_t k) {
        const GeodesicOrbit& o = G.orbits[k];
        std::mt19937_64 rng(class_seed(seed, k));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double offset = U(rng) * o.period;
        for (std::size_t i = 0; i < per_class; ++i) {
            double t = layout == SampleLayout::Stratified
                           ? offset + o.period * static_cast<double>(i) / static_cast<double>(per_class)
                           : U(rng) * o.period;
            t = std::fmod(t, o.period);
            out[k * per_class + i] = {point_at(o, t), static_cast<int>(k), t};
        }
    });
    return out;
}

bool TestRegion::contains(const SurfacePoint& p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1 && p.theta >= th0 && p.theta <= th1;
}

std::string TestRegion::str() const {
    std::ostringstream s;
    s << "[" << x0 << "," << x1 << "]x[" << y0 << "," << y1 << "]x[" << th0 << "," << th1 << "]";
    return s.str();
}

double liouville_measure(const TestRegion& R) {
    const double eps = 1e-12;
    if (R.x0 > R.x1 || R.y0 > R.y1 || R.th0 > R.th1) throw RegionError("liouville_measure: empty or reversed box " + R.str());
    if (R.x0 < -0.5 - eps || R.x1 > 0.5 + eps) {
        TestRegion bad = R;
        if (R.x0 < -0.5 - eps) bad.x1 = std::min(R.x1, -0.5);
        else bad.x0 = std::max(R.x0, 0.5);
        throw RegionError("liouville_measure: sub-box " + bad.str() + " leaves |x| <= 1/2");
    }
    if (R.th0 < -eps || R.th1 > 2 * M_PI + eps) {
        TestRegion bad = R;
        if (R.th0 < -eps) bad.th1 = std::min(R.th1, 0.0);
        else bad.th0 = std::max(R.th0, 2 * M_PI);
        throw RegionError("liouville_measure: sub-box " + bad.str() + " leaves the angle range [0, 2 pi]");
    }
    double x0 = std::max(R.x0, -0.5), x1 = std::min(R.x1, 0.5);
    // integrand 1/max(y0, sqrt(1 - x^2)) - 1/y1 where positive; split where the regime changes
    std::vector<double> cuts{x0, x1};
    for (double y : {R.y0, R.y1})
        if (y < 1 && y > 0) {
            double xc = std::sqrt(1 - y * y);
            for (double c : {-xc, xc})
                if (c > x0 && c < x1) cuts.push_back(c);
        }
    std::sort(cuts.begin(), cuts.end());
    double inv_top = std::isinf(R.y1) ? 0.0 : 1.0 / R.y1;
    double area = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double p = cuts[i], q = cuts[i + 1];
        if (q <= p) continue;
        double m = (p + q) / 2, arc = std::sqrt(1 - m * m);
        bool on_arc = arc > R.y0;
        double floor_y = on_arc ? arc : R.y0;
        if (floor_y >= R.y1) continue;
        double lower = on_arc ? std::asin(q) - std::asin(p) : (q - p) / R.y0;
        area += lower - (q - p) * inv_top;
    }
    if (area < 0) area = 0;
    return 3.0 / M_PI * area * (R.th1 - R.th0) / (2 * M_PI);
}

double region_frequency(const std::vector<Sample>& pts, const TestRegion& R) {
    if (pts.empty()) return 0;
    std::size_t c = 0;
    for (const auto& s : pts) c += R.contains(s.p);
    return static_cast<double>(c) / static_cast<double>(pts.size());
}

double cusp_mass(const std::vector<Sample>& pts, double H) {
    if (pts.empty()) return 0;
    std::size_t c = 0;
    for (const auto& s : pts) c += s.p.height >= H;
    return static_cast<double>(c) / static_cast<double>(pts.size());
}

std::vector<CuspMassRow> cusp_mass_profile(const std::vector<Sample>& pts, const std::vector<double>& Hs) {
    std::vector<CuspMassRow> rows;
    for (double H : Hs) {
        double m = cusp_mass(pts, H);
        rows.push_back({H, m, m * H * H});
    }
    return rows;
}

HeightProfile height_profile(const GeodesicSet& G, double max_step) {
    if (!(max_step > 0)) throw std::invalid_argument("height_profile: step must be positive");
    HeightProfile prof;
    prof.log_height.resize(G.orbits.size());
    double step_used = 0;
    std::vector<double> steps(G.orbits.size());
    parallel_for(G.orbits.size(), [&](std::size_t k) {
        const GeodesicOrbit& o = G.orbits[k];
        auto n = static_cast<std::size_t>(std::ceil(o.height_period / max_step));
        double s = o.height_period / static_cast<double>(n);
        steps[k] = s;
        auto& v = prof.log_height[k];
        v.resize(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = std::log(point_at(o, s * static_cast<double>(i)).height);
    });
    for (double s : steps) step_used = std::max(step_used, s);
    prof.step = step_used;
    return prof;
}

ComponentReport cusp_components(const GeodesicSet& G, const HeightProfile& prof, double H) {
    if (!(H > 1)) throw std::invalid_argument("cusp_components: H must exceed 1");
    ComponentReport rep;
    rep.H = H;
    rep.norm_bound = 0.5 * G.sqrt_d / (H * H);
    std::size_t h = G.orbits.size();
    rep.components_by_class.assign(h, 0);
    rep.ideals_by_class.assign(h, 0);
    double logH = std::log(H);
    // log height along a geodesic near its top behaves like log(top) - t^2/4; a sample sits within
    // half a step of the top
    double band = prof.step * prof.step / 8;
    for (std::size_t k = 0; k < h; ++k) {
        const auto& v = prof.log_height[k];
        std::size_t n = v.size();
        if (n == 0) continue;
        double s = G.orbits[k].height_period / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            double prev = v[(i + n - 1) % n], next = v[(i + 1) % n];
            if (v[i] >= prev && v[i] >= next && v[i] < logH && v[i] >= logH - band) rep.inconclusive = true;
        }
        std::size_t start = n;
        for (std::size_t i = 0; i < n; ++i)
            if (v[i] < logH) {
                start = i;
                break;
            }
        if (start == n) {  // never below H: a whole orbit inside the cusp neighbourhood
            rep.inconclusive = true;
            continue;
        }
        for (std::size_t j = 1; j <= n; ++j) {
            std::size_t i = (start + j) % n;
            if (v[i] >= logH && v[(i + n - 1) % n] < logH) {
                std::size_t best = i;
                for (std::size_t r = i; v[r] >= logH; r = (r + 1) % n)
                    if (v[r] > v[best]) best = r;
                rep.excursions.push_back({static_cast<int>(k), s * static_cast<double>(best), std::exp(v[best])});
                ++rep.components_by_class[k];
                ++rep.components;
            }
        }
    }
    for (auto& t : ideals_of_norm_up_to(G.table, rep.norm_bound)) {
        if (!t.primitive) continue;
        int inv_cls = G.table.index_of(ideal_to_form(conjugate(t.ideal)));
        if (inv_cls >= 0) ++rep.ideals_by_class[static_cast<std::size_t>(inv_cls)];
        ++rep.ideals;
        rep.ideal_list.push_back(std::move(t));
    }
    return rep;
}

ComponentReport cusp_components(const GeodesicSet& G, double H, double max_step) {
    return cusp_components(G, height_profile(G, max_step), H);
}

std::vector<double> delta_grid(double d, double H, int per_octave) {
    if (per_octave < 1) throw std::invalid_argument("delta_grid: per_octave must be positive");
    double hi = 1.0 / (3.0 * H * H), lo = std::pow(d, -0.25);
    std::vector<double> out;
    for (int k = 0;; ++k) {
        double v = hi * std::pow(2.0, -static_cast<double>(k) / per_octave);
        if (v < lo * (1 - 1e-12)) break;
        out.push_back(v);
    }
    if (out.empty())
        throw std::invalid_argument("pair_correlation: empty delta window, d^(-1/4) = " + std::to_string(lo) +
                                    " exceeds H^-2/3 = " + std::to_string(hi));
    return out;
}

namespace {

struct Image {
    Mat2d g;
    std::uint32_t owner;
    std::array<std::int64_t, 3> form;
};

std::array<std::int64_t, 3> lattice_form(const Mat2d& g, double sqrt_d) {
    LatticeForm lf = form_from_lattice(g, sqrt_d);
    if (lf.residual > 1e-4) throw std::runtime_error("pair_correlation: orbit point does not carry an integral form (residual " + std::to_string(lf.residual) + ")");
    return {to_i64(lf.form.a), to_i64(lf.form.b), to_i64(lf.form.c)};
}

}  // namespace

PairCorrStat pair_correlation(const GeodesicSet& G, const std::vector<Sample>& pts, double H, const std::vector<double>& deltas) {
    if (deltas.empty()) throw std::invalid_argument("pair_correlation: empty delta grid");
    PairCorrStat st;
    st.d = to_i64(G.d);
    st.H = H;
    st.samples = pts.size();
    st.delta = deltas;
    std::sort(st.delta.begin(), st.delta.end());
    const std::size_t K = st.delta.size();
    const double dmax = st.delta.back();
    const double y_cap = H * H;
    st.cross_pairs.assign(K, 0);
    st.diag_pairs.assign(K, 0);

    std::vector<std::uint32_t> used;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].p.height < H) used.push_back(static_cast<std::uint32_t>(i));
    st.used = used.size();

    // centres and their Gamma-images close to the fundamental domain
    std::vector<std::array<std::int64_t, 3>> centre_form(used.size());
    std::vector<std::vector<Image>> per_point(used.size());
    const double r = std::sqrt(2.0) * dmax * 1.05;
    parallel_for(used.size(), [&](std::size_t u) {
        const Mat2d& g = pts[used[u]].p.g;
        centre_form[u] = lattice_form(g, G.sqrt_d);
        per_point[u].push_back({g, static_cast<std::uint32_t>(u), centre_form[u]});
        for (const auto& w : short_words()) {
            if (w.a == 1 && w.b == 0 && w.c == 0 && w.d == 1) continue;
            Mat2d M = to_real(w) * g;
            if (near_domain(M, y_cap, r)) per_point[u].push_back({M, static_cast<std::uint32_t>(u), lattice_form(M, G.sqrt_d)});
        }
    });

    // cell width bounds ||g exp(X) - g||_F <= ||g||_F (e^|X| - 1) over all centres
    double gmax = 0;
    for (std::size_t u = 0; u < used.size(); ++u) {
        const Mat2d& g = pts[used[u]].p.g;
        gmax = std::max(gmax, frobenius(g));
    }
    const double W = gmax * std::expm1(dmax) * 1.01 + 1e-12;
    std::vector<Image> images;
    for (auto& v : per_point)
        for (auto& im : v) {
            images.push_back(im);
            images.push_back({Mat2d{-im.g.a, -im.g.b, -im.g.c, -im.g.d}, im.owner, im.form});
        }
    per_point.clear();
    per_point.shrink_to_fit();
    st.images = images.size();
    MatrixGrid grid(W);
    grid.reserve(images.size());
    for (std::uint32_t i = 0; i < images.size(); ++i) grid.insert(images[i].g, i);

    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(used.size(), 64));
    std::vector<std::vector<std::uint64_t>> cross_chunk(chunks, std::vector<std::uint64_t>(K, 0)),
        diag_chunk(chunks, std::vector<std::uint64_t>(K, 0));
    std::vector<std::size_t> evals(chunks, 0);
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (std::size_t c = 0; c < chunks; ++c) ranges.push_back({used.size() * c / chunks, used.size() * (c + 1) / chunks});
    parallel_for(chunks, [&](std::size_t c) {
        struct Hit {
            std::uint32_t owner;
            double dist;
            bool diag;
        };
        std::vector<Hit> hits;
        for (std::size_t u = ranges[c].first; u < ranges[c].second; ++u) {
            const Mat2d& g = pts[used[u]].p.g;
            Mat2d ginv = inverse(g);
            hits.clear();
            grid.for_neighbours(g, [&](std::uint32_t idx) {
                const Image& im = images[idx];
                if (im.owner == u) return;
                ++evals[c];
                double dist = log_norm(ginv * im.g);
                if (dist < dmax) hits.push_back({im.owner, dist, im.form == centre_form[u]});
            });
            std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.owner != b.owner ? a.owner < b.owner : a.dist < b.dist; });
            for (std::size_t i = 0; i < hits.size(); ++i) {
                if (i > 0 && hits[i].owner == hits[i - 1].owner) continue;  // keep the closest image
                for (std::size_t k = 0; k < K; ++k)
                    if (hits[i].dist < st.delta[k]) ++(hits[i].diag ? diag_chunk[c][k] : cross_chunk[c][k]);
            }
        }
    });
    for (std::size_t c = 0; c < chunks; ++c) {
        st.distance_evaluations += evals[c];
        for (std::size_t k = 0; k < K; ++k) {
            st.cross_pairs[k] += cross_chunk[c][k];
            st.diag_pairs[k] += diag_chunk[c][k];
        }
    }
    double n2 = static_cast<double>(st.samples) * static_cast<double>(st.samples);
    for (std::size_t k = 0; k < K; ++k) {
        st.cross_freq.push_back(static_cast<double>(st.cross_pairs[k]) / n2);
        st.diag_freq.push_back(static_cast<double>(st.diag_pairs[k]) / n2);
        st.cross_err.push_back(std::sqrt(static_cast<double>(st.cross_pairs[k])) / n2);
        st.diag_err.push_back(std::sqrt(static_cast<double>(st.diag_pairs[k])) / n2);
    }
    st.cross_slope = loglog_slope(st.delta, st.cross_freq);
    st.diag_slope = loglog_slope(st.delta, st.diag_freq);
    return st;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
        if (x[i] > 0 && y[i] > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    if (lx.size() < 2) return NAN;
    double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : NAN;
}

static std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two sequences of equal length >= 2");
    auto rx = ranks(x), ry = ranks(y);
    double n = static_cast<double>(x.size());
    double mx = (n + 1) / 2, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - mx);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - mx) * (ry[i] - mx);
    }
    return sxy / std::sqrt(sxx * syy);
}

template <class Visit>
static void scan_hyperboloid(const Int& dZ, const CoefBox& box, Visit&& visit) {
    if (dZ <= 0 || is_square(dZ)) throw std::invalid_argument("hyperboloid_points: need a positive non-square discriminant");
    const std::int64_t d = to_i64(dZ);
    const double sd = std::sqrt(static_cast<double>(d));
    auto lo = [&](int i) { return static_cast<std::int64_t>(std::ceil(box.lo[i] * sd - 1e-9)); };
    auto hi = [&](int i) { return static_cast<std::int64_t>(std::floor(box.hi[i] * sd + 1e-9)); };
    std::int64_t a0 = lo(0), a1 = hi(0), b0 = lo(1), b1 = hi(1);
    if ((b0 - d) % 2 != 0) ++b0;  // b = d mod 2
    for (std::int64_t b = b0; b <= b1; b += 2) {
        std::int64_t N = b * b - d;  // = 4ac, divisible by 4
        if (N % 4 != 0) continue;
        std::int64_t n4 = N / 4;
        for (std::int64_t a = a0; a <= a1; ++a) {
            if (a == 0 || n4 % a != 0) continue;
            std::int64_t c = n4 / a;
            double x[3] = {static_cast<double>(a) / sd, static_cast<double>(b) / sd, static_cast<double>(c) / sd};
            if (!box.contains(x[0], x[1], x[2])) continue;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            visit(a, b, c, x);
        }
    }
}

std::vector<HyperboloidPoint> hyperboloid_points(const Int& d, const CoefBox& box) {
    std::vector<HyperboloidPoint> out;
    scan_hyperboloid(d, box, [&](std::int64_t a, std::int64_t b, std::int64_t c, const double* x) {
        HyperboloidPoint p;
        p.form = QuadForm(Int(static_cast<long>(a)), Int(static_cast<long>(b)), Int(static_cast<long>(c)));
        std::copy(x, x + 3, p.x);
        out.push_back(p);
    });
    return out;
}

std::size_t count_hyperboloid_points(const Int& d, const CoefBox& box) {
    std::size_t n = 0;
    scan_hyperboloid(d, box, [&](std::int64_t, std::int64_t, std::int64_t, const double*) { ++n; });
    return n;
}

MonteCarlo cone_measure(const CoefBox& box, std::size_t samples, std::uint64_t seed) {
    MonteCarlo mc;
    mc.samples = samples;
    mc.seed = seed;
    if (samples == 0) return mc;
    double lo[3], hi[3], vol = 1;
    for (int i = 0; i < 3; ++i) {
        if (box.hi[i] < box.lo[i]) return mc;
        lo[i] = std::min(box.lo[i], 0.0);
        hi[i] = std::max(box.hi[i], 0.0);
        vol *= hi[i] - lo[i];
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U0(lo[0], hi[0]), U1(lo[1], hi[1]), U2(lo[2], hi[2]);
    std::size_t hit = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        double a = U0(rng), b = U1(rng), c = U2(rng);
        double D = b * b - 4 * a * c;
        if (!(D > 0 && D <= 1)) continue;
        double r = std::sqrt(D);
        if (box.contains(a / r, b / r, c / r)) ++hit;
    }
    double p = static_cast<double>(hit) / static_cast<double>(samples);
    mc.value = vol * p;
    mc.stderr_ = vol * std::sqrt(p * (1 - p) / static_cast<double>(samples));
    return mc;
}

VolumeReport volume_identity(const Int& d) {
    VolumeReport rep;
    rep.d = d;
    Discriminant D = make_discriminant(d);
    if (D.is_square || d <= 0) throw std::invalid_argument("volume_identity: need a positive non-square discriminant");
    rep.fundamental = D.fundamental;
    rep.conductor = D.conductor;
    ClassTable T(d);
    PellData P = pell_fundamental(d);
    rep.h = T.h();
    rep.unit_norm = P.unit_norm;
    rep.regulator_unit = P.regulator;
    rep.regulator_cycle = P.regulator_cycle;
    rep.volume_unit = static_cast<double>(rep.h) * P.regulator;
    rep.volume_cycle = static_cast<double>(rep.h) * P.regulator_cycle;
    rep.exponent = std::log(rep.volume_unit) / std::log(to_double(d));
    double ratio = to_double(D.conductor);
    for (const auto& [p, e] : factor(D.conductor)) ratio *= 1.0 - kronecker(D.fundamental, p) / to_double(p);
    rep.ratio_formula = ratio;
    if (D.conductor == 1) {
        rep.ratio_observed = 1;
    } else {
        ClassTable T0(D.fundamental);
        PellData P0 = pell_fundamental(D.fundamental);
        rep.ratio_observed = rep.volume_unit / (static_cast<double>(T0.h()) * P0.regulator);
    }
    return rep;
}

}  // namespace geolab
