// The time-one map of the geodesic flow on X, excursion patterns above a height M,
// greedy covers by Bowen balls and the entropy estimates built from them.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolab/geodesic.hpp"
#include "geolab/stats.hpp"

namespace geolab {

// T(x) = x a with a = diag(e^{1/2}, e^{-1/2}), reduced back to the fundamental domain.
SurfacePoint time_one(const SurfacePoint& p);
SurfacePoint time_one_inv(const SurfacePoint& p);  // multiplies by a^{-1}

struct Trajectory {
    SurfacePoint base;
    int N = 0;
    std::vector<SurfacePoint> iterates;  // T^n(base) for n = -N..N at index n + N
    std::vector<double> heights;
    const SurfacePoint& at(int n) const { return iterates[static_cast<std::size_t>(n + N)]; }
    double height_at(int n) const { return heights[static_cast<std::size_t>(n + N)]; }
};
Trajectory trajectory(const SurfacePoint& p, int N);

struct ExcursionPattern {
    double M = 0;
    int N = 0;
    std::vector<bool> V;  // V[n + N] iff ht(T^n x) >= M
    bool left_below = true, right_below = true;  // endpoints n = -N and n = N below M
    // maximal runs [first, last] of V, in n-coordinates
    std::vector<std::pair<int, int>> stretches() const;
    // stretches closer than 2 floor(2 log M) to each other
    std::size_t separation_violations() const;
    std::string key() const;  // bit string, '1' for n in V
};
int min_excursion_steps(double M);  // floor(2 log M)
ExcursionPattern excursion_pattern(const Trajectory& tr, double M);
ExcursionPattern excursion_pattern(const SurfacePoint& p, int N, double M);

struct TrajectoryChecks {
    std::size_t trajectories = 0;
    std::size_t height_step_violations = 0;  // |log ht(Tx) - log ht(x)| > 1/2
    std::size_t climb_violations = 0;        // ht(x) >= M but ht(T^n x) < 1 for some 0 < n < floor(2 log M)
    std::size_t separation_violations = 0;
};

struct CensusRow {
    int N = 0;
    std::size_t distinct = 0;
    double bound = 0;  // C(M) e^{(2 log log M / log M) N}
};
struct PatternCensus {
    double M = 0;
    double rate = 0;  // 2 log log M / log M
    double C = 0;     // fitted at the smallest N
    std::vector<CensusRow> rows;
    std::map<std::string, std::size_t> histogram;  // at the largest N
    TrajectoryChecks checks;                        // at the largest N
};
// Patterns of the samples for every N in Ns; trajectories are computed once at max N and
// restricted to the shorter windows.
PatternCensus pattern_census(const std::vector<SurfacePoint>& samples, const std::vector<int>& Ns, double M);

class InjectivityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

constexpr int kMaxBowenN = 12;
constexpr double kMaxBowenEta = 0.05;

// y in x B_{N,eta} iff some short word w gives X = log(g_x^-1 w g_y) with
// ||a^-n X a^n||_F <= eta for all |n| <= N.
bool in_bowen_ball(const Mat2d& centre, const Mat2d& y, int N, double eta);
double bowen_radius(const Mat2d& centre, const Mat2d& y, int N);  // smallest eta admitting y

struct BowenCover {
    int N = 0;
    double eta = 0, height_cap = 0;
    std::size_t samples = 0, balls = 0;
    std::vector<std::uint32_t> centres;  // sample indices
};
// Greedy cover in sample order. Requires every sample below height_cap and 2 eta below the
// injectivity estimate 1/height_cap^2, and N, eta within the numerical caps.
BowenCover bowen_cover(const std::vector<SurfacePoint>& samples, int N, double eta, double height_cap,
                       int max_N = kMaxBowenN, double max_eta = kMaxBowenEta);
double max_height_for_eta(double eta);  // largest cap allowed by the injectivity test, times 0.95

struct EntropyRow {
    double M = 0;
    double cusp_mass = 0;
    double bound = 0;   // 1 + log log M / log M - mass / 2
    double margin = 0;  // bound + slack - entropy
};
struct EntropyReport {
    std::string source;
    std::size_t samples = 0, capped_samples = 0;
    double eta = 0, height_cap = 0, slack = 0;
    std::vector<int> Ns;
    std::vector<std::size_t> cover;
    std::vector<double> ratio;  // log BC / (2N)
    double entropy = 0;         // ratio at the largest N
    double slope = 0;           // least squares slope of log BC against 2N
    std::vector<EntropyRow> rows;
    bool inequality_holds() const;
};
EntropyReport entropy_report(const std::vector<SurfacePoint>& samples, const std::vector<int>& Ns, double eta,
                             const std::vector<double>& Ms, double slack = 0, double height_cap = 0);
// mu_d sample helper: per_class points on each orbit.
std::vector<SurfacePoint> surface_points(const std::vector<Sample>& s);
// Points spread at spacing step along a single closed orbit.
std::vector<SurfacePoint> single_orbit_points(const GeodesicOrbit& o, std::size_t n, std::uint64_t seed);

}  // namespace geolab
