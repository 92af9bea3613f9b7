#include "geolab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "geolab/parallel.hpp"
#include "geolab/spatial.hpp"

namespace geolab {

SurfacePoint time_one(const SurfacePoint& p) { return reduce_to_fundamental_domain(p.g * diag_flow(1.0)).point; }
SurfacePoint time_one_inv(const SurfacePoint& p) { return reduce_to_fundamental_domain(p.g * diag_flow(-1.0)).point; }

Trajectory trajectory(const SurfacePoint& p, int N) {
    if (N < 0) throw std::invalid_argument("trajectory: N must be non-negative");
    Trajectory tr;
    tr.base = p;
    tr.N = N;
    tr.iterates.resize(static_cast<std::size_t>(2 * N + 1));
    tr.iterates[static_cast<std::size_t>(N)] = p;
    for (int n = 1; n <= N; ++n) {
        tr.iterates[static_cast<std::size_t>(N + n)] = time_one(tr.iterates[static_cast<std::size_t>(N + n - 1)]);
        tr.iterates[static_cast<std::size_t>(N - n)] = time_one_inv(tr.iterates[static_cast<std::size_t>(N - n + 1)]);
    }
    for (const auto& q : tr.iterates) tr.heights.push_back(q.height);
    return tr;
}

int min_excursion_steps(double M) { return M <= 1 ? 0 : static_cast<int>(std::floor(2 * std::log(M))); }

std::vector<std::pair<int, int>> ExcursionPattern::stretches() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < static_cast<int>(V.size()); ++i) {
        if (!V[static_cast<std::size_t>(i)]) continue;
        if (i > 0 && V[static_cast<std::size_t>(i - 1)]) out.back().second = i - N;
        else out.push_back({i - N, i - N});
    }
    return out;
}

std::size_t ExcursionPattern::separation_violations() const {
    auto s = stretches();
    const int gap = 2 * min_excursion_steps(M);
    std::size_t bad = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].first - s[i - 1].second < gap) ++bad;
    return bad;
}

std::string ExcursionPattern::key() const {
    std::string k;
    for (bool b : V) k.push_back(b ? '1' : '0');
    return k;
}

static ExcursionPattern window_pattern(const Trajectory& tr, int N, double M) {
    ExcursionPattern ep;
    ep.M = M;
    ep.N = N;
    for (int n = -N; n <= N; ++n) ep.V.push_back(tr.height_at(n) >= M);
    ep.left_below = !ep.V.front();
    ep.right_below = !ep.V.back();
    return ep;
}

ExcursionPattern excursion_pattern(const Trajectory& tr, double M) { return window_pattern(tr, tr.N, M); }
ExcursionPattern excursion_pattern(const SurfacePoint& p, int N, double M) { return window_pattern(trajectory(p, N), N, M); }

PatternCensus pattern_census(const std::vector<SurfacePoint>& samples, const std::vector<int>& Ns, double M) {
    if (Ns.empty()) throw std::invalid_argument("pattern_census: empty N list");
    if (M <= 1) throw std::invalid_argument("pattern_census: M must exceed 1");
    PatternCensus pc;
    pc.M = M;
    pc.rate = 2 * std::log(std::log(M)) / std::log(M);
    std::vector<int> sorted = Ns;
    std::sort(sorted.begin(), sorted.end());
    const int Nmax = sorted.back();
    std::vector<Trajectory> trs(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { trs[i] = trajectory(samples[i], Nmax); });

    const int climb = min_excursion_steps(M);
    TrajectoryChecks& ck = pc.checks;
    ck.trajectories = trs.size();
    for (const auto& tr : trs) {
        for (int n = -Nmax; n < Nmax; ++n)
            if (std::fabs(std::log(tr.height_at(n + 1)) - std::log(tr.height_at(n))) > 0.5 + 1e-9) ++ck.height_step_violations;
        for (int n = -Nmax; n <= Nmax; ++n) {
            if (tr.height_at(n) < M) continue;
            for (int k = 1; k < climb && n + k <= Nmax; ++k)
                if (tr.height_at(n + k) < 1 - 1e-9) {
                    ++ck.climb_violations;
                    break;
                }
        }
        ck.separation_violations += excursion_pattern(tr, M).separation_violations();
    }
    for (int N : sorted) {
        std::set<std::string> keys;
        for (const auto& tr : trs) {
            auto key = window_pattern(tr, N, M).key();
            keys.insert(key);
            if (N == Nmax) ++pc.histogram[key];
        }
        pc.rows.push_back({N, keys.size(), 0});
    }
    pc.C = static_cast<double>(pc.rows.front().distinct) / std::exp(pc.rate * pc.rows.front().N);
    for (auto& r : pc.rows) r.bound = pc.C * std::exp(pc.rate * r.N);
    return pc;
}

// Bowen radius of the displacement M = g_x^-1 g_y without any Gamma-translation.
static double direct_radius(const Mat2d& M, double eN, double emN) {
    Mat2d X = matrix_log(M);
    double u = (X.a - X.d) / 2, v = X.b, w = X.c;
    return std::sqrt(2 * u * u + std::max(eN * v * v + emN * w * w, emN * v * v + eN * w * w));
}

double bowen_radius(const Mat2d& centre, const Mat2d& y, int N) {
    Mat2d cinv = inverse(centre);
    const double eN = std::exp(2.0 * N), emN = std::exp(-2.0 * N);
    double best = direct_radius(cinv * y, eN, emN);
    for (const auto& wd : short_words()) best = std::min(best, direct_radius(cinv * (to_real(wd) * y), eN, emN));
    return best;
}

bool in_bowen_ball(const Mat2d& centre, const Mat2d& y, int N, double eta) { return bowen_radius(centre, y, N) <= eta; }

double max_height_for_eta(double eta) { return 0.95 / std::sqrt(2 * eta); }

BowenCover bowen_cover(const std::vector<SurfacePoint>& samples, int N, double eta, double height_cap, int max_N, double max_eta) {
    if (N < 0 || N > max_N) throw std::invalid_argument("bowen_cover: N outside [0, " + std::to_string(max_N) + "]");
    if (!(eta > 0) || eta > max_eta) throw std::invalid_argument("bowen_cover: eta outside (0, " + std::to_string(max_eta) + "]");
    if (!(height_cap >= 1)) throw std::invalid_argument("bowen_cover: height cap must be at least 1");
    if (2 * eta >= 1 / (height_cap * height_cap))
        throw InjectivityError("bowen_cover: 2 eta = " + std::to_string(2 * eta) + " is not below the injectivity radius estimate 1/H^2 = " +
                               std::to_string(1 / (height_cap * height_cap)) + " at height cap " + std::to_string(height_cap));
    BowenCover bc;
    bc.N = N;
    bc.eta = eta;
    bc.height_cap = height_cap;
    bc.samples = samples.size();
    double gmax = 0;
    for (const auto& s : samples) {
        if (s.height > height_cap) throw std::invalid_argument("bowen_cover: sample of height " + std::to_string(s.height) + " above the cap");
        gmax = std::max(gmax, frobenius(s.g));
    }
    // every ball lies in the group-distance ball of radius eta around its centre
    MatrixGrid grid(gmax * std::expm1(eta) * 1.01 + 1e-12);
    // translates of the centres by short words are stored in the grid, so each candidate
    // needs only the direct displacement test
    std::vector<Mat2d> images;
    const double eN = std::exp(2.0 * N), emN = std::exp(-2.0 * N);
    const double y_cap = height_cap * height_cap, r = std::sqrt(2.0) * eta * 1.05;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Mat2d& g = samples[i].g;
        bool covered = false;
        grid.for_neighbours(g, [&](std::uint32_t id) {
            if (!covered && direct_radius(inverse(images[id]) * g, eN, emN) <= eta) covered = true;
        });
        if (covered) continue;
        bc.centres.push_back(static_cast<std::uint32_t>(i));
        auto add = [&](const Mat2d& M) {
            for (const Mat2d& s : {M, Mat2d{-M.a, -M.b, -M.c, -M.d}}) {
                grid.insert(s, static_cast<std::uint32_t>(images.size()));
                images.push_back(s);
            }
        };
        add(g);
        for (const auto& w : short_words()) {
            if (w.a == 1 && w.b == 0 && w.c == 0 && w.d == 1) continue;
            Mat2d M = to_real(w) * g;
            if (near_domain(M, y_cap, r)) add(M);
        }
    }
    bc.balls = bc.centres.size();
    return bc;
}

bool EntropyReport::inequality_holds() const {
    return std::all_of(rows.begin(), rows.end(), [](const EntropyRow& r) { return r.margin >= 0; });
}

EntropyReport entropy_report(const std::vector<SurfacePoint>& samples, const std::vector<int>& Ns, double eta,
                             const std::vector<double>& Ms, double slack, double height_cap) {
    if (Ns.empty()) throw std::invalid_argument("entropy_report: empty N list");
    EntropyReport rep;
    rep.samples = samples.size();
    rep.eta = eta;
    rep.slack = slack;
    rep.height_cap = height_cap > 0 ? height_cap : max_height_for_eta(eta);
    rep.Ns = Ns;
    std::sort(rep.Ns.begin(), rep.Ns.end());
    std::vector<SurfacePoint> capped;
    for (const auto& s : samples)
        if (s.height <= rep.height_cap) capped.push_back(s);
    rep.capped_samples = capped.size();
    std::vector<double> xs, ys;
    for (int N : rep.Ns) {
        auto bc = bowen_cover(capped, N, eta, rep.height_cap);
        rep.cover.push_back(bc.balls);
        double lb = std::log(static_cast<double>(std::max<std::size_t>(bc.balls, 1)));
        rep.ratio.push_back(N > 0 ? lb / (2.0 * N) : 0);
        xs.push_back(2.0 * N);
        ys.push_back(lb);
    }
    rep.entropy = rep.ratio.back();
    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        rep.slope = sxx > 0 ? sxy / sxx : 0;
    }
    for (double M : Ms) {
        if (M <= 1) throw std::invalid_argument("entropy_report: M must exceed 1");
        EntropyRow row;
        row.M = M;
        std::size_t above = 0;
        for (const auto& s : samples)
            if (s.height >= M) ++above;
        row.cusp_mass = samples.empty() ? 0 : static_cast<double>(above) / static_cast<double>(samples.size());
        row.bound = 1 + std::log(std::log(M)) / std::log(M) - row.cusp_mass / 2;
        row.margin = row.bound + slack - rep.entropy;
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<SurfacePoint> surface_points(const std::vector<Sample>& s) {
    std::vector<SurfacePoint> out;
    out.reserve(s.size());
    for (const auto& x : s) out.push_back(x.p);
    return out;
}

std::vector<SurfacePoint> single_orbit_points(const GeodesicOrbit& o, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, o.period);
    std::vector<SurfacePoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(point_at(o, U(rng)));
    return out;
}

}  // namespace geolab
