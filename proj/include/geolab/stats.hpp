// Measures on X attached to the geodesic set G_d and the statistics built on them:
// Liouville boxes, cusp mass and excursion components, near-pair counts,
// integer points on the disc = d hyperboloid, cone volumes and volume identities.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "geolab/classgroup.hpp"
#include "geolab/geodesic.hpp"

namespace geolab {

// Every closed geodesic of discriminant d, one per GL2(Z) class.
struct GeodesicSet {
    Int d;
    ClassTable table;
    PellData pell;
    std::vector<GeodesicOrbit> orbits;
    double sqrt_d = 0;
    double total_length() const;  // sum of the closing periods
};
GeodesicSet make_geodesic_set(const Int& d);

struct Sample {
    SurfacePoint p;
    int class_index = 0;
    double t = 0;  // flow time along the orbit
};

enum class SampleLayout {
    Stratified,   // n equally spaced times shifted by one random offset per class
    Independent,  // n independent uniform times per class
};

// Per-class generator seed derived from the run seed (splitmix64 mixing).
std::uint64_t class_seed(std::uint64_t seed, std::size_t class_index);
std::vector<Sample> mu_d_sample(const GeodesicSet& G, std::size_t per_class, std::uint64_t seed,
                                SampleLayout layout = SampleLayout::Stratified);

// Box in fundamental-domain coordinates; y1 may be +infinity.
struct TestRegion {
    double x0 = -0.5, x1 = 0.5, y0 = 0, y1 = INFINITY, th0 = 0, th1 = 2 * M_PI;
    bool contains(const SurfacePoint& p) const;
    std::string str() const;
};

class RegionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// (3/pi) times the hyperbolic area of the box inside the fundamental domain, times the
// angular fraction. Parts of the box below the unit arc are clipped away; boxes leaving
// |x| <= 1/2 or the angle range [0, 2 pi] are rejected with the offending sub-box.
double liouville_measure(const TestRegion& R);
double region_frequency(const std::vector<Sample>& pts, const TestRegion& R);

// Fraction of samples with height >= H.
double cusp_mass(const std::vector<Sample>& pts, double H);
struct CuspMassRow {
    double H = 0, mass = 0, scaled = 0;  // scaled = mass * H^2
};
std::vector<CuspMassRow> cusp_mass_profile(const std::vector<Sample>& pts, const std::vector<double>& Hs);

// Log-heights along every orbit at a fixed flow-time step, over one period of the height function.
struct HeightProfile {
    double step = 0;
    std::vector<std::vector<double>> log_height;  // per class
};
HeightProfile height_profile(const GeodesicSet& G, double max_step);

struct Excursion {
    int class_index = 0;
    double t_peak = 0, peak_height = 0;
};
struct ComponentReport {
    double H = 0, norm_bound = 0;  // norm_bound = H^-2 sqrt(d) / 2
    std::size_t components = 0;
    std::size_t ideals = 0;                        // primitive proper integral ideals of norm <= norm_bound
    std::vector<std::size_t> components_by_class;  // by class of the orbit
    std::vector<std::size_t> ideals_by_class;      // by class of the inverse of the ideal
    bool inconclusive = false;                     // a sampled peak lies within the sampling error of H
    std::vector<Excursion> excursions;
    std::vector<TaggedIdeal> ideal_list;
    bool match() const { return !inconclusive && components == ideals; }
    bool match_by_class() const { return !inconclusive && components_by_class == ideals_by_class; }
};
ComponentReport cusp_components(const GeodesicSet& G, const HeightProfile& prof, double H);
ComponentReport cusp_components(const GeodesicSet& G, double H, double max_step = 0.01);

// Near pairs in X_{<H} x X_{<H}, split by whether the two points carry the same integral form
// (same local A-orbit piece, "diagonal") or different ones ("cross").
struct PairCorrStat {
    std::int64_t d = 0;
    double H = 0;
    std::size_t samples = 0, used = 0;  // all samples, samples with height < H
    std::vector<double> delta;
    std::vector<std::uint64_t> cross_pairs, diag_pairs;  // ordered pairs (i, j), i != j
    std::vector<double> cross_freq, diag_freq;           // divided by samples^2
    std::vector<double> cross_err, diag_err;             // Poisson standard errors of the frequencies
    double cross_slope = 0, diag_slope = 0;              // log-log least squares
    std::size_t images = 0, distance_evaluations = 0;
};
// Geometric grid H^-2/3 * 2^(-k/per_octave) down to d^(-1/4); throws if empty.
std::vector<double> delta_grid(double d, double H, int per_octave = 4);
PairCorrStat pair_correlation(const GeodesicSet& G, const std::vector<Sample>& pts, double H, const std::vector<double>& deltas);

// Least-squares slope of log y against log x over entries with y > 0.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct CoefBox {
    double lo[3] = {-1, -1, -1}, hi[3] = {1, 1, 1};
    static CoefBox max_norm(double R) { return {{-R, -R, -R}, {R, R, R}}; }
    bool contains(double a, double b, double c) const {
        return a >= lo[0] && a <= hi[0] && b >= lo[1] && b <= hi[1] && c >= lo[2] && c <= hi[2];
    }
};
struct HyperboloidPoint {
    QuadForm form;
    double x[3] = {0, 0, 0};  // (a, b, c)/sqrt d
};
// All primitive (a,b,c) of discriminant d with (a,b,c)/sqrt(d) in the box.
std::vector<HyperboloidPoint> hyperboloid_points(const Int& d, const CoefBox& box);
std::size_t count_hyperboloid_points(const Int& d, const CoefBox& box);

struct MonteCarlo {
    double value = 0, stderr_ = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};
// Volume of {r x : x on disc = 1 with x in the box, 0 <= r <= 1}.
MonteCarlo cone_measure(const CoefBox& box, std::size_t samples, std::uint64_t seed);

struct VolumeReport {
    Int d, fundamental, conductor;
    std::size_t h = 0;
    double regulator_unit = 0, regulator_cycle = 0;
    double volume_unit = 0, volume_cycle = 0;  // h Reg by the two routes
    double exponent = 0;                        // log vol / log d
    int unit_norm = 1;
    double ratio_formula = 1;   // f prod_{p | f} (1 - (d'/p)/p)
    double ratio_observed = 1;  // vol(d) / vol(d')
};
VolumeReport volume_identity(const Int& d);

}  // namespace geolab
