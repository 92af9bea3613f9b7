// Binary lattices inside ternary ones: raw embedding counts, orbits under the integral
// rotation group of a definite ternary form, local invariants of binary forms, and orbits of
// pairs of forms of equal discriminant under PGL2(Z).
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "geolab/forms.hpp"

namespace geolab {

using V3 = std::array<std::int64_t, 3>;
using M3 = std::array<std::array<std::int64_t, 3>, 3>;  // acts on column vectors

// Q(v) = v^T B v / 2 with B symmetric, even diagonal; the Gram matrix is B/2.
struct TernaryForm {
    M3 B{};
    static TernaryForm sum_of_squares();
    // Gram entries g_ij with g_ii integral and 2 g_ij integral.
    static TernaryForm from_gram(const std::array<std::array<double, 3>, 3>& gram);
    std::int64_t Q(const V3& v) const;
    std::int64_t bilinear(const V3& v, const V3& w) const;  // Q(v+w) - Q(v) - Q(w)
    std::int64_t disc() const;                              // det B
    bool positive_definite() const;
    double min_eigenvalue() const;  // of the Gram matrix
};

struct EmbeddingPair {
    V3 v1, v2;
};

// <r, s> = 2 b b' - 4 a c' - 4 a' c
std::int64_t polarization(const std::array<std::int64_t, 3>& r, const std::array<std::int64_t, 3>& s);

struct ShellTable {
    std::int64_t max_value = 0;
    std::int64_t radius = 0;  // coordinate box used for the search
    bool verified = false;    // the box contains the whole ellipsoid Q <= max_value
    std::map<std::int64_t, std::vector<V3>> shells;
    const std::vector<V3>& shell(std::int64_t n) const;
};
// All v with 0 < Q(v) <= max_value for positive definite Q; the coordinate radius comes
// from the smallest Gram eigenvalue with a 10% margin and is checked against the exact
// ellipsoid extents afterwards.
ShellTable make_shells(const TernaryForm& Q, std::int64_t max_value);

struct EmbeddingCount {
    std::uint64_t raw = 0;
    bool complete = false;  // false when only a coefficient box was searched
    std::int64_t radius = 0;
};
// Definite Q: exact. Indefinite Q: requires a box radius and reports a partial count.
EmbeddingCount count_embeddings(const std::array<std::int64_t, 3>& q, const TernaryForm& Q, std::optional<std::int64_t> box = std::nullopt);
std::vector<EmbeddingPair> enumerate_embeddings(const std::array<std::int64_t, 3>& q, const TernaryForm& Q, const ShellTable& shells);

// SO_Q(Z) for definite Q by exhaustive search over the shells of the diagonal values.
std::vector<M3> integral_isometries(const TernaryForm& Q);
bool is_group(const std::vector<M3>& G);
M3 mul(const M3& x, const M3& y);
V3 apply(const M3& g, const V3& v);
std::int64_t det(const M3& g);

struct OrbitCount {
    std::uint64_t raw = 0;
    std::uint64_t orbits = 0;
    std::size_t group_order = 0;
};
OrbitCount orbit_count(const std::array<std::int64_t, 3>& q, const TernaryForm& Q);

// Orbit counts for every q = (a1, a2, a3) with 1 <= a1, a3 <= max_coef, |a2| <= max_coef,
// computed per (a1, a3) through orbit representatives of the first vector.
struct OrbitSweep {
    std::int64_t max_coef = 0;
    std::map<std::array<std::int64_t, 3>, OrbitCount> counts;  // only forms with raw > 0
    double max_ratio = 0;  // max N(q)/f, f^2 the largest square dividing gcd(q)
    std::array<std::int64_t, 3> argmax{};
};
OrbitSweep orbit_sweep(const TernaryForm& Q, std::int64_t max_coef);
std::int64_t square_part_root(std::int64_t g);  // largest f with f^2 | g

struct LocalInvariants {
    Int p;
    int a = 0, b = 0;
    bool diagonal = true;  // 2-adic shape: u 2^a x^2 + v 2^b y^2 rather than the xy-type
};
LocalInvariants local_invariants(const QuadForm& q, const Int& p);

struct PairOrbitCount {
    std::int64_t d = 0, ell = 0, box = 0;
    std::uint64_t forms_in_box = 0, pairs_in_box = 0;
    std::uint64_t orbits = 0;
    std::int64_t exhaust_bound = 0;  // every orbit has a representative with coefficients up to this
    bool complete = false;
    // canonical representatives: class index of the first form and the normalised second form
    std::vector<std::pair<int, std::array<std::int64_t, 3>>> representatives;
};
// Orbits of PGL2(Z) (acting as SO_disc(Z)) on pairs (r, r') with disc r = disc r' = d and
// <r, r'> = ell, among pairs whose coefficients are bounded by box.
PairOrbitCount pair_orbit_count(const Int& d, std::int64_t ell, std::int64_t box);
std::vector<std::array<std::int64_t, 3>> forms_in_box(std::int64_t d, std::int64_t box);

}  // namespace geolab
