#include "geolab/classgroup.hpp"

#include <cmath>
#include <stdexcept>

namespace geolab {

QuadOrder::QuadOrder(Int d_) : d(std::move(d_)) {
    if (!is_discriminant(d) || is_square(d)) throw std::invalid_argument("QuadOrder: need a non-square discriminant");
}

KElem QuadOrder::mul(const KElem& x, const KElem& y) const {
    // w^2 = d w - (d^2 - d)/4
    Rat vv = x.v * y.v;
    Rat c0 = Rat(Int((d * d - d) / 4));
    return {x.u * y.u - vv * c0, x.u * y.v + x.v * y.u + vv * Rat(d)};
}

KElem QuadOrder::conj(const KElem& x) const { return {x.u + x.v * Rat(d), -x.v}; }

Rat QuadOrder::norm(const KElem& x) const {
    // N(u + v w) = u^2 + d u v + (d^2 - d)/4 v^2
    return x.u * x.u + Rat(d) * x.u * x.v + Rat(Int((d * d - d) / 4)) * x.v * x.v;
}

QuadIrr QuadOrder::to_quadirr(const KElem& x) const {
    // u + v (d + sqrt d)/2 = (2u + v d + v sqrt d)/2
    Rat p = 2 * x.u + x.v * Rat(d);
    Rat q = x.v;
    Int den = p.get_den() * q.get_den() / gcd(p.get_den(), q.get_den());
    Rat P = p * Rat(den), Q = q * Rat(den);
    return QuadIrr(P.get_num(), Q.get_num(), 2 * den, d);
}

KElem QuadOrder::from_quadirr(const QuadIrr& x) const {
    if (x.d != d) throw std::invalid_argument("from_quadirr: field mismatch");
    // (p + q sqrt d)/r with sqrt d = 2w - d
    Rat r(x.r);
    return {(Rat(x.p) - Rat(x.q) * Rat(d)) / r, Rat(2 * x.q) / r};
}

bool OIdeal::integral() const { return scale.get_den() == 1; }

std::string OIdeal::str() const {
    std::string s = "[" + n.get_str() + ", " + m.get_str() + "+w]";
    if (scale != 1) s = scale.get_str() + "*" + s;
    return s;
}

OIdeal unit_ideal(const Int& d) {
    OIdeal I;
    I.d = d;
    return I;
}

namespace {

struct IVec {
    Int u, v;
};

// Extended gcd: returns g = s a + t b with g >= 0.
Int xgcd(const Int& a, const Int& b, Int& s, Int& t) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

}  // namespace

OIdeal ideal_from_generators(const Int& d, const std::vector<KElem>& gens) {
    Int L = 1;
    for (const auto& g : gens) {
        for (const Rat* r : {&g.u, &g.v}) {
            Int den = r->get_den();
            L = L * den / gcd(L, den);
        }
    }
    bool have_e = false;
    IVec e;
    Int n0 = 0;
    for (const auto& g : gens) {
        Rat uu = g.u * Rat(L), vv = g.v * Rat(L);
        IVec w{uu.get_num(), vv.get_num()};
        if (w.v == 0) {
            n0 = gcd(n0, w.u);
            continue;
        }
        if (!have_e) {
            e = w;
            have_e = true;
            continue;
        }
        Int s, t;
        Int g2 = xgcd(e.v, w.v, s, t);
        IVec e2{s * e.u + t * w.u, g2};
        Int zu = (w.v / g2) * e.u - (e.v / g2) * w.u;
        n0 = gcd(n0, zu);
        e = e2;
    }
    if (!have_e || n0 == 0) throw std::invalid_argument("ideal_from_generators: lattice of rank < 2");
    if (e.v < 0) {
        e.u = -e.u;
        e.v = -e.v;
    }
    n0 = abs(n0);
    Int x0 = mod_pos(e.u, n0);
    const Int& y0 = e.v;
    if (n0 % y0 != 0 || x0 % y0 != 0) throw std::invalid_argument("ideal_from_generators: lattice is not an O_d-module");
    OIdeal I;
    I.d = d;
    I.n = n0 / y0;
    I.m = x0 / y0;
    I.scale = Rat(y0) / Rat(L);
    I.scale.canonicalize();
    Int normw = I.m * I.m + d * I.m + (d * d - d) / 4;
    if (normw % I.n != 0) throw std::invalid_argument("ideal_from_generators: lattice is not an O_d-module");
    return I;
}

bool contains(const OIdeal& I, const KElem& x) {
    Rat u = x.u / I.scale, v = x.v / I.scale;
    if (v.get_den() != 1 || u.get_den() != 1) return false;
    Int r = u.get_num() - v.get_num() * I.m;
    return r % I.n == 0;
}

Rat ideal_norm(const OIdeal& I) { return I.scale * I.scale * Rat(I.n); }

OIdeal multiply(const OIdeal& I, const OIdeal& J) {
    if (I.d != J.d) throw std::invalid_argument("multiply: ideals of different orders");
    QuadOrder O(I.d);
    std::vector<KElem> gens;
    for (const KElem& x : {I.alpha(), I.beta()})
        for (const KElem& y : {J.alpha(), J.beta()}) gens.push_back(O.mul(x, y));
    return ideal_from_generators(I.d, gens);
}

OIdeal conjugate(const OIdeal& I) {
    QuadOrder O(I.d);
    return ideal_from_generators(I.d, {O.conj(I.alpha()), O.conj(I.beta())});
}

OIdeal invert(const OIdeal& I) {
    if (!is_proper(I)) throw std::invalid_argument("invert: ideal is not proper");
    OIdeal J = conjugate(I);
    J.scale /= ideal_norm(I);
    J.scale.canonicalize();
    return J;
}

// Generator of the order of discriminant d/p^2 written in the basis (1, w) of O_d.
static KElem overorder_generator(const Int& d, const Int& p) {
    Int dp = d / (p * p);
    // (dp + sqrt(d)/p)/2 with sqrt d = 2w - d
    Rat u = (Rat(dp) - Rat(d) / Rat(p)) / 2;
    return {u, Rat(1) / Rat(p)};
}

static std::vector<Int> overorder_primes(const Int& d) {
    std::vector<Int> out;
    for (const auto& [p, e] : factor(d))
        if (e >= 2 && is_discriminant(d / (p * p))) out.push_back(p);
    return out;
}

bool is_proper(const OIdeal& I) {
    QuadOrder O(I.d);
    for (const Int& p : overorder_primes(I.d)) {
        KElem lam = overorder_generator(I.d, p);
        if (contains(I, O.mul(lam, I.alpha())) && contains(I, O.mul(lam, I.beta()))) return false;
    }
    return true;
}

OIdeal principal_ideal(const Int& d, const KElem& lambda) {
    QuadOrder O(d);
    return ideal_from_generators(d, {lambda, O.mul(lambda, O.omega())});
}

std::array<Rat, 4> Embedding::ring_map(const KElem& x) const {
    Rat h = x.v / 2;
    return {x.u + h * Rat(d + m.m[0]), h * Rat(m.m[1]), h * Rat(m.m[2]), x.u + h * Rat(d + m.m[3])};
}

bool Embedding::squares_to_d() const {
    Mat2Z sq = m * m;
    return sq == Mat2Z(d, 0, 0, d);
}

bool Embedding::optimal() const {
    for (const Int& p : overorder_primes(d)) {
        auto img = ring_map(overorder_generator(d, p));
        bool integral = true;
        for (const auto& r : img) integral = integral && r.get_den() == 1;
        if (integral) return false;
    }
    return true;
}

Embedding form_to_embedding(const QuadForm& q) {
    if (!q.primitive()) throw std::invalid_argument("form_to_embedding: form is not primitive");
    Int d = q.disc();
    if (d <= 0 || is_square(d)) throw std::invalid_argument("form_to_embedding: need positive non-square discriminant");
    return Embedding{d, Mat2Z(q.b, -2 * q.a, 2 * q.c, -q.b)};
}

QuadForm embedding_to_form(const Embedding& e) { return {-e.m.m[1] / 2, e.m.m[0], e.m.m[2] / 2}; }

OIdeal embedding_to_ideal(const Embedding& e) {
    QuadForm q = embedding_to_form(e);
    // first row of iota(u + v w) is (u + v (d + b)/2, -v a)
    Rat inv_a = Rat(1) / Rat(q.a);
    KElem g2{-Rat(e.d + q.b) * inv_a / 2, inv_a};
    return ideal_from_generators(e.d, {KElem{Rat(1), Rat(0)}, g2});
}

OIdeal form_to_ideal(const QuadForm& q) {
    if (!q.primitive()) throw std::invalid_argument("form_to_ideal: form is not primitive");
    if (q.a == 0) throw std::invalid_argument("form_to_ideal: a = 0");
    Int d = q.disc();
    // Z + Z (-b + sqrt d)/(2a)
    Rat inv2a = Rat(1) / Rat(2 * q.a);
    KElem g2{Rat(-q.b - d) * inv2a, Rat(2) * inv2a};
    return ideal_from_generators(d, {KElem{Rat(1), Rat(0)}, g2});
}

QuadForm ideal_to_form(const OIdeal& I) {
    Int B = 2 * I.m + I.d;
    Int num = B * B - I.d;
    if (num % (4 * I.n) != 0) throw std::logic_error("ideal_to_form: inconsistent standard form");
    return {I.n, -B, num / (4 * I.n)};
}

std::vector<TaggedIdeal> ideals_of_norm_up_to(const ClassTable& table, double B) {
    std::vector<TaggedIdeal> out;
    if (B < 1) return out;
    const Int& d = table.d();
    Int Bi = Int(std::floor(B + 1e-12));
    Int c0 = (d * d - d) / 4;
    for (Int n = 1; n <= Bi; ++n) {
        for (Int m = 0; m < n; ++m) {
            Int nw = m * m + d * m + c0;
            if (nw % n != 0) continue;
            OIdeal P;
            P.d = d;
            P.n = n;
            P.m = m;
            QuadForm f = ideal_to_form(P);
            if (!f.primitive()) continue;  // not proper
            int cls = table.index_of(f);
            for (Int k = 1; k * k * n <= Bi; ++k) {
                TaggedIdeal t;
                t.ideal = P;
                t.ideal.scale = Rat(k);
                t.norm = k * k * n;
                t.primitive = (k == 1);
                t.class_index = cls;
                out.push_back(t);
            }
        }
    }
    return out;
}

PicardTable picard_table(const ClassTable& table) {
    PicardTable pt;
    std::size_t h = table.h();
    std::vector<OIdeal> reps;
    for (const auto& fc : table.classes()) reps.push_back(form_to_ideal(fc.canonical));
    pt.mul.assign(h, std::vector<int>(h, -1));
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) {
            int k = table.index_of(ideal_to_form(multiply(reps[i], reps[j])));
            pt.mul[i][j] = k;
            if (k < 0) pt.closed = false;
        }
    pt.identity = table.index_of(ideal_to_form(unit_ideal(table.d())));
    if (!pt.closed || pt.identity < 0) {
        pt.associative = pt.commutative = pt.has_inverses = false;
        return pt;
    }
    for (std::size_t i = 0; i < h; ++i) {
        bool inv = false;
        for (std::size_t j = 0; j < h; ++j) {
            if (pt.mul[i][j] != pt.mul[j][i]) pt.commutative = false;
            if (pt.mul[i][j] == pt.identity) inv = true;
            for (std::size_t k = 0; k < h; ++k)
                if (pt.mul[pt.mul[i][j]][k] != pt.mul[i][pt.mul[j][k]]) pt.associative = false;
        }
        if (!inv) pt.has_inverses = false;
        if (pt.mul[pt.identity][i] != static_cast<int>(i)) pt.has_inverses = false;
    }
    return pt;
}

std::size_t class_count_from_ideals(const ClassTable& table) {
    double B = std::sqrt(to_double(table.d())) / 2 + 1;
    std::vector<bool> hit(table.h(), false);
    for (const auto& t : ideals_of_norm_up_to(table, B))
        if (t.primitive && t.class_index >= 0) hit[t.class_index] = true;
    std::size_t c = 0;
    for (bool b : hit) c += b;
    return c;
}

}  // namespace geolab
