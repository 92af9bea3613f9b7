// Lattices and ideals of the quadratic order O_d = Z[w], w = (d + sqrt d)/2,
// and the maps between form classes, optimal embeddings and ideal classes.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geolab/forms.hpp"

namespace geolab {

using Rat = mpq_class;

// Element u + v w of K = Q(sqrt d), coordinates in the basis (1, w).
struct KElem {
    Rat u, v;
    bool operator==(const KElem& o) const { return u == o.u && v == o.v; }
};

struct QuadOrder {
    Int d;
    explicit QuadOrder(Int d_);
    KElem mul(const KElem& x, const KElem& y) const;  // uses w^2 = d w - (d^2 - d)/4
    KElem conj(const KElem& x) const;                 // w' = d - w
    Rat norm(const KElem& x) const;
    QuadIrr to_quadirr(const KElem& x) const;  // (p + q sqrt d)/r form
    KElem from_quadirr(const QuadIrr& x) const;
    KElem omega() const { return {Rat(0), Rat(1)}; }
};

// Rank-2 lattice scale * (Z n + Z (m + w)) with 0 <= m < n. For O_d-ideals this standard
// form always exists; general lattices are rejected by from_generators unless they are O_d-modules.
struct OIdeal {
    Int d;
    Rat scale{1};
    Int n{1}, m{0};
    KElem alpha() const { return {scale * Rat(n), Rat(0)}; }
    KElem beta() const { return {scale * Rat(m), scale}; }
    bool integral() const;
    bool primitive() const { return scale == 1; }  // not contained in k O_d for an integer k > 1
    bool operator==(const OIdeal& o) const { return d == o.d && scale == o.scale && n == o.n && m == o.m; }
    std::string str() const;
};

OIdeal unit_ideal(const Int& d);
// Lattice generated by the given elements; throws if rank < 2 or not an O_d-module.
OIdeal ideal_from_generators(const Int& d, const std::vector<KElem>& gens);
bool contains(const OIdeal& I, const KElem& x);
Rat ideal_norm(const OIdeal& I);
OIdeal multiply(const OIdeal& I, const OIdeal& J);
OIdeal conjugate(const OIdeal& I);
OIdeal invert(const OIdeal& I);  // requires a proper ideal
// Multiplier ring is exactly O_d (tested against every order of discriminant d/p^2).
bool is_proper(const OIdeal& I);
OIdeal principal_ideal(const Int& d, const KElem& lambda);

struct Embedding {
    Int d;
    Mat2Z m;  // trace zero, m^2 = d Id
    // iota(u + v w) = u Id + v (d Id + m)/2, entries rational in general
    std::array<Rat, 4> ring_map(const KElem& x) const;
    bool squares_to_d() const;
    bool optimal() const;
};

Embedding form_to_embedding(const QuadForm& q);
QuadForm embedding_to_form(const Embedding& e);
// {lambda in K : e1 iota(lambda) in Z^2}
OIdeal embedding_to_ideal(const Embedding& e);
OIdeal form_to_ideal(const QuadForm& q);
QuadForm ideal_to_form(const OIdeal& I);

struct TaggedIdeal {
    OIdeal ideal;
    Int norm;
    bool primitive = true;
    int class_index = -1;
};
// All proper integral ideals with norm <= B, tagged with their class in the given table.
std::vector<TaggedIdeal> ideals_of_norm_up_to(const ClassTable& table, double B);

// Cayley table of Cl(O_d) on the classes of the table, plus axiom checks.
struct PicardTable {
    std::vector<std::vector<int>> mul;
    int identity = -1;
    bool closed = true, associative = true, commutative = true, has_inverses = true;
};
PicardTable picard_table(const ClassTable& table);
// Number of distinct classes hit by primitive proper ideals of norm <= sqrt(d)/2 + 1.
std::size_t class_count_from_ideals(const ClassTable& table);

}  // namespace geolab
