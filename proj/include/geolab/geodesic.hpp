// Points of X = PSL2(Z)\PSL2(R), the height function, the matrix-log distance,
// and closed geodesic orbits attached to form classes.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "geolab/forms.hpp"

namespace geolab {

// Integer matrix with machine entries, used for the reduction words.
struct Mat2L {
    std::int64_t a = 1, b = 0, c = 0, d = 1;
};
Mat2L operator*(const Mat2L& x, const Mat2L& y);
Mat2d to_real(const Mat2L& g);
Mat2Z to_exact(const Mat2L& g);

// a_t = diag(e^{t/2}, e^{-t/2}); the time-one map is right multiplication by a_1.
Mat2d diag_flow(double t);

struct SurfacePoint {
    double x = 0, y = 1;  // z = g.i in the fundamental domain
    double theta = M_PI / 2;  // direction of the flow, in [0, 2 pi)
    double height = 1;        // sqrt(y)
    Mat2d g;                  // representative with g.i = z, sign fixed by c > 0 or (c = 0, d > 0)
};

struct Reduction {
    SurfacePoint point;
    Mat2L gamma;  // gamma * input = point.g (up to sign)
};

constexpr double kUnimodularTol = 1e-9;

// Rejects |det g - 1| > 1e-9 (relative to the entry scale).
Reduction reduce_to_fundamental_domain(const Mat2d& g);
SurfacePoint point_from_coordinates(double x, double y, double theta);
bool in_fundamental_domain(double x, double y);

// Height of the lattice spanned by the rows of basis: (min |v| / covol^(1/2))^(-1).
double lattice_height(const Mat2d& basis);
double height(const SurfacePoint& p);

// ||log(M)||_F for M in SL2(R), sign chosen so that trace >= 0.
double log_norm(const Mat2d& M);
Mat2d matrix_log(const Mat2d& M);
// Words of length <= 4 in S, T, T^-1, modulo sign.
const std::vector<Mat2L>& short_words();
double distance(const SurfacePoint& p, const SurfacePoint& q);
double group_distance(const Mat2d& g1, const Mat2d& g2);  // ||log(g1^-1 g2)||_F

// Endpoints (-b - sqrt d)/(2a), (-b + sqrt d)/(2a).
std::pair<QuadIrr, QuadIrr> endpoints(const QuadForm& q);

struct LatticeForm {
    QuadForm form;
    double residual = 0;  // max distance of the scaled coefficients from integers
};
// Integral form with q0(u alpha + v beta) = vol(L) (a u^2 + b uv + c v^2)/sqrt d, q0 = xy.
LatticeForm form_from_lattice(const Mat2d& basis, double sqrt_d);

struct GeodesicOrbit {
    Int d;
    FormClass cls;
    std::pair<QuadIrr, QuadIrr> ends;     // endpoints of the canonical form
    std::array<QuadIrr, 4> h;             // [[b + sqrt d, b - sqrt d], [2c, 2c]] for the canonical form
    std::vector<Mat2d> base;              // det-1 base matrix for every reduced form of the cycle
    std::vector<double> times;            // flow time at which base[i] is reached
    double period = 0;                    // closing time of the orbit
    double height_period = 0;             // period of the height function (half when a norm -1 unit exists)
    Mat2Z automorph;                      // product of the reduction steps, stabilises the canonical form
};

GeodesicOrbit make_orbit(const FormClass& fc, const Int& d);
// Base matrix g with g.q0 = q/sqrt(d) for a form with a != 0.
Mat2d base_matrix(const QuadForm& q);

struct OrbitPoint {
    SurfacePoint p;
    std::array<std::int64_t, 3> form{};  // integral form sqrt(d) (g.q0) at the reduced representative
};

SurfacePoint point_at(const GeodesicOrbit& o, double t);
OrbitPoint point_with_form(const GeodesicOrbit& o, double t);
std::vector<SurfacePoint> sample_orbit(const GeodesicOrbit& o, std::size_t n, double offset);

}  // namespace geolab
