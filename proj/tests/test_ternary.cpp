#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "geolab/geodesic.hpp"
#include "geolab/ternary.hpp"

using namespace geolab;

namespace {

using F3 = std::array<std::int64_t, 3>;

TernaryForm gram(double a11, double a22, double a33, double a12, double a13, double a23) {
    return TernaryForm::from_gram({{{a11, a12, a13}, {a12, a22, a23}, {a13, a23, a33}}});
}

std::uint64_t brute_shell(const TernaryForm& Q, std::int64_t n, std::int64_t R) {
    std::uint64_t k = 0;
    for (std::int64_t x = -R; x <= R; ++x)
        for (std::int64_t y = -R; y <= R; ++y)
            for (std::int64_t z = -R; z <= R; ++z)
                if (Q.Q({x, y, z}) == n) ++k;
    return k;
}

// SO_Q(Z) among matrices with entries in {-1, 0, 1}.
std::set<M3> brute_isometries(const TernaryForm& Q) {
    std::set<M3> out;
    M3 g{};
    for (int code = 0; code < 19683; ++code) {
        int c = code;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                g[i][j] = c % 3 - 1;
                c /= 3;
            }
        if (det(g) != 1) continue;
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i)
            for (int j = 0; j < 3 && ok; ++j) {
                std::int64_t s = 0;
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) s += g[k][i] * Q.B[k][l] * g[l][j];
                ok = s == Q.B[i][j];
            }
        if (ok) out.insert(g);
    }
    return out;
}

bool parallel(const V3& v, const V3& w) {
    return v[1] * w[2] == v[2] * w[1] && v[2] * w[0] == v[0] * w[2] && v[0] * w[1] == v[1] * w[0];
}

// Orbits of embedded pairs of x^2 + y^2 + z^2 under the 24 rotations, by marking.
std::pair<std::uint64_t, std::uint64_t> brute_three_squares(const F3& q) {
    TernaryForm S = TernaryForm::sum_of_squares();
    std::int64_t R = static_cast<std::int64_t>(std::sqrt(static_cast<double>(std::max(q[0], q[2])))) + 1;
    std::vector<V3> pts;
    for (std::int64_t x = -R; x <= R; ++x)
        for (std::int64_t y = -R; y <= R; ++y)
            for (std::int64_t z = -R; z <= R; ++z) pts.push_back({x, y, z});
    std::set<std::pair<V3, V3>> pairs;
    for (const auto& v : pts) {
        if (S.Q(v) != q[0]) continue;
        for (const auto& w : pts)
            if (S.Q(w) == q[2] && S.bilinear(v, w) == q[1] && !parallel(v, w)) pairs.insert({v, w});
    }
    std::vector<M3> rot;
    for (const auto& g : brute_isometries(S)) rot.push_back(g);
    std::set<std::pair<V3, V3>> seen;
    std::uint64_t orbits = 0;
    for (const auto& p : pairs) {
        if (seen.count(p)) continue;
        ++orbits;
        for (const auto& g : rot) seen.insert({apply(g, p.first), apply(g, p.second)});
    }
    return {pairs.size(), orbits};
}

int vp(std::int64_t n, std::int64_t p) {
    if (n == 0) return 1000;
    int v = 0;
    while (n % p == 0) n /= p, ++v;
    return v;
}

Mat2Z random_gl2(std::mt19937_64& rng, int len) {
    const Mat2Z gens[] = {Mat2Z(0, -1, 1, 0), Mat2Z(1, 1, 0, 1), Mat2Z(1, -1, 0, 1), Mat2Z(1, 0, 0, -1)};
    std::uniform_int_distribution<int> U(0, 3);
    Mat2Z g;
    for (int i = 0; i < len; ++i) g = gens[U(rng)] * g;
    return g;
}

F3 arr(const QuadForm& q) { return {q.a.get_si(), q.b.get_si(), q.c.get_si()}; }
QuadForm form(const F3& r) { return QuadForm(Int(static_cast<long>(r[0])), Int(static_cast<long>(r[1])), Int(static_cast<long>(r[2]))); }

Mat2Z power(const Mat2Z& A, long k) {
    Mat2Z base = k < 0 ? inverse_unimodular(A) : A, out;
    for (long i = 0; i < std::labs(k); ++i) out = base * out;
    return out;
}

// Generator of the stabiliser of q under gl2_act: among the matrices attached to the
// smallest u > 0 with t^2 - d u^2 = +-4, the first one that fixes q.
Mat2Z brute_stabiliser(const QuadForm& q) {
    long d = q.disc().get_si(), a = q.a.get_si(), b = q.b.get_si(), c = q.c.get_si();
    for (long u = 1; u < 100000; ++u)
        for (long s : {-4L, 4L}) {
            long v = d * u * u + s;
            if (v < 0) continue;
            long t = std::lround(std::sqrt(static_cast<double>(v)));
            if (t * t != v) continue;
            for (long tt : {t, -t}) {
                if ((tt - b * u) % 2 != 0) continue;
                Mat2Z cands[] = {Mat2Z(Int((tt - b * u) / 2), Int(-c * u), Int(a * u), Int((tt + b * u) / 2)),
                                 Mat2Z(Int((tt - b * u) / 2), Int(a * u), Int(-c * u), Int((tt + b * u) / 2)),
                                 Mat2Z(Int((tt + b * u) / 2), Int(-c * u), Int(a * u), Int((tt - b * u) / 2)),
                                 Mat2Z(Int((tt + b * u) / 2), Int(a * u), Int(-c * u), Int((tt - b * u) / 2))};
                for (const auto& M : cands)
                    if (std::abs(M.det().get_si()) == 1 && gl2_act(M, q) == q) return M;
            }
        }
    throw std::runtime_error("no stabiliser found");
}

// Pairs in the box grouped into orbits by testing every candidate gamma = g2^-1 A^k g1,
// A a stabiliser generator of the canonical form in the class of the first form.
std::uint64_t brute_pair_orbits(std::int64_t d, std::int64_t ell, std::int64_t box) {
    auto forms = forms_in_box(d, box);
    std::vector<std::pair<F3, F3>> pairs;
    for (const auto& r : forms)
        for (const auto& s : forms)
            if (polarization(r, s) == ell) pairs.push_back({r, s});
    struct Info {
        std::int64_t f;
        int cls;
        Mat2Z g;
    };
    std::map<std::int64_t, std::pair<ClassTable, std::vector<Mat2Z>>> tables;
    auto info = [&](const F3& r) {
        std::int64_t f = std::gcd(std::gcd(std::llabs(r[0]), std::llabs(r[1])), std::llabs(r[2]));
        Int d0(static_cast<long>(d / (f * f)));
        auto it = tables.find(f);
        if (it == tables.end()) {
            ClassTable T(d0);
            std::vector<Mat2Z> gens;
            for (const auto& fc : T.classes()) gens.push_back(brute_stabiliser(fc.canonical));
            it = tables.emplace(f, std::make_pair(std::move(T), std::move(gens))).first;
        }
        auto [idx, g] = it->second.first.locate(form({r[0] / f, r[1] / f, r[2] / f}));
        return Info{f, idx, g};
    };
    std::vector<int> parent(pairs.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    std::vector<Info> inf;
    for (const auto& p : pairs) inf.push_back(info(p.first));
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = i + 1; j < pairs.size(); ++j) {
            if (find(static_cast<int>(i)) == find(static_cast<int>(j))) continue;
            if (inf[i].f != inf[j].f || inf[i].cls != inf[j].cls) continue;
            const Mat2Z& A = tables.at(inf[i].f).second[static_cast<std::size_t>(inf[i].cls)];
            Mat2Z g2inv = inverse_unimodular(inf[j].g);
            for (long k = -12; k <= 12; ++k) {
                Mat2Z gamma = g2inv * power(A, k) * inf[i].g;
                if (arr(gl2_act(gamma, form(pairs[i].first))) != pairs[j].first) continue;
                if (arr(gl2_act(gamma, form(pairs[i].second))) == pairs[j].second) {
                    parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
                    break;
                }
            }
        }
    std::set<int> roots;
    for (std::size_t i = 0; i < pairs.size(); ++i) roots.insert(find(static_cast<int>(i)));
    return roots.size();
}

}  // namespace

TEST_CASE("ternary forms from Gram matrices") {
    TernaryForm S = TernaryForm::sum_of_squares();
    CHECK(S.Q({1, 2, 3}) == 14);
    CHECK(S.bilinear({1, 0, 1}, {1, 1, 0}) == 2);
    CHECK(S.disc() == 8);
    CHECK(S.positive_definite());
    CHECK(S.min_eigenvalue() == doctest::Approx(1));
    TernaryForm A = gram(1, 1, 1, 0.5, 0, 0);
    CHECK(A.Q({1, -1, 0}) == 1);
    CHECK(A.min_eigenvalue() == doctest::Approx(0.5));
    CHECK_THROWS(gram(1, 1, 1, 0.25, 0, 0));
    CHECK_FALSE(gram(1, 1, -1, 0, 0, 0).positive_definite());
    CHECK(polarization({1, 0, -1}, {1, 0, -1}) == 8);  // <r, r> = 2 disc r
}

TEST_CASE("shells against a full box search") {
    for (TernaryForm Q : {TernaryForm::sum_of_squares(), gram(1, 1, 2, 0, 0, 0), gram(2, 1, 3, 0.5, 0.5, 0.5)}) {
        ShellTable T = make_shells(Q, 40);
        CHECK(T.verified);
        for (std::int64_t n = 1; n <= 40; ++n) {
            CAPTURE(n);
            CHECK(T.shell(n).size() == brute_shell(Q, n, 9));
            for (const auto& v : T.shell(n)) CHECK(Q.Q(v) == n);
        }
    }
    ShellTable S = make_shells(TernaryForm::sum_of_squares(), 30);
    CHECK(S.shell(7).empty());
    CHECK(S.shell(3).size() == 8);
}

TEST_CASE("integral isometries against the small-entry search") {
    for (TernaryForm Q : {TernaryForm::sum_of_squares(), gram(1, 1, 2, 0, 0, 0), gram(1, 1, 1, 0.5, 0, 0), gram(1, 1, 1, 0.5, 0.5, 0.5)}) {
        auto G = integral_isometries(Q);
        std::set<M3> mine(G.begin(), G.end());
        CHECK(mine.size() == G.size());
        CHECK(mine == brute_isometries(Q));
        CHECK(is_group(G));
    }
    CHECK(integral_isometries(TernaryForm::sum_of_squares()).size() == 24);
    CHECK(integral_isometries(gram(1, 1, 2, 0, 0, 0)).size() == 8);
}

TEST_CASE("embedding and orbit counts of x^2 + y^2 + z^2") {
    TernaryForm S = TernaryForm::sum_of_squares();
    for (std::int64_t a1 = 1; a1 <= 6; ++a1)
        for (std::int64_t a3 = 1; a3 <= 6; ++a3)
            for (std::int64_t a2 = -6; a2 <= 6; ++a2) {
                F3 q{a1, a2, a3};
                auto [raw, orbits] = brute_three_squares(q);
                CAPTURE(a1);
                CAPTURE(a2);
                CAPTURE(a3);
                EmbeddingCount e = count_embeddings(q, S);
                CHECK(e.complete);
                CHECK(e.raw == raw);
                OrbitCount oc = orbit_count(q, S);
                CHECK(oc.raw == raw);
                CHECK(oc.orbits == orbits);
                CHECK(oc.group_order == 24);
            }
    OrbitSweep sw = orbit_sweep(S, 6);
    for (const auto& [q, oc] : sw.counts) CHECK(oc.orbits == brute_three_squares(q).second);
    CHECK(square_part_root(72) == 6);
    CHECK(square_part_root(7) == 1);
    // an indefinite target only gives a partial count from a box
    CHECK_FALSE(count_embeddings({1, 0, 1}, gram(1, 1, -1, 0, 0, 0), 4).complete);
    CHECK_THROWS(count_embeddings({1, 0, 1}, gram(1, 1, -1, 0, 0, 0)));
}

TEST_CASE("local invariants at odd primes") {
    std::mt19937_64 rng(31);
    for (F3 r : {F3{1, 1, -1}, F3{3, 3, -6}, F3{5, 5, 0}, F3{9, 0, -25}, F3{2, 7, 3}, F3{7, 0, 14}}) {
        for (std::int64_t p : {3L, 5L, 7L}) {
            LocalInvariants L = local_invariants(form(r), Int(static_cast<long>(p)));
            std::int64_t content = std::gcd(std::gcd(std::llabs(r[0]), std::llabs(r[1])), std::llabs(r[2]));
            int a = vp(content, p), b = vp(r[1] * r[1] - 4 * r[0] * r[2], p) - a;
            CAPTURE(p);
            CHECK(L.a == a);
            CHECK(L.b == b);
            CHECK(L.diagonal);
            for (int it = 0; it < 10; ++it) {
                LocalInvariants M = local_invariants(gl2_act(random_gl2(rng, 9), form(r)), Int(static_cast<long>(p)));
                CHECK(M.a == L.a);
                CHECK(M.b == L.b);
            }
            LocalInvariants S = local_invariants(form({p * r[0], p * r[1], p * r[2]}), Int(static_cast<long>(p)));
            CHECK(S.a == L.a + 1);
            CHECK(S.b == L.b + 1);
        }
    }
}

TEST_CASE("local invariants at 2") {
    std::mt19937_64 rng(32);
    auto at2 = [](const F3& r) { return local_invariants(form(r), Int(2)); };
    // x^2 + y^2 splits diagonally, xy and x^2 + xy + y^2 do not
    CHECK(at2({1, 0, 1}).diagonal);
    CHECK(at2({1, 0, 1}).a == 0);
    CHECK(at2({1, 0, 1}).b == 0);
    CHECK_FALSE(at2({0, 1, 0}).diagonal);
    CHECK(at2({0, 1, 0}).b == 1);
    CHECK_FALSE(at2({1, 1, 1}).diagonal);
    CHECK(at2({1, 1, 1}).b == 0);
    for (F3 r : {F3{1, 0, 1}, F3{1, 1, -1}, F3{2, 2, -3}, F3{4, 4, -1}, F3{1, 2, -4}, F3{3, 0, -2}}) {
        LocalInvariants L = at2(r);
        for (int it = 0; it < 15; ++it) {
            LocalInvariants M = local_invariants(gl2_act(random_gl2(rng, 9), form(r)), Int(2));
            CHECK(M.a == L.a);
            CHECK(M.b == L.b);
            CHECK(M.diagonal == L.diagonal);
        }
        LocalInvariants S = at2({2 * r[0], 2 * r[1], 2 * r[2]});
        CHECK(S.a == L.a + 1);
        CHECK(S.b == L.b + 1);
        CHECK(S.diagonal == L.diagonal);
    }
}

TEST_CASE("pair orbits against explicit equivalence testing") {
    struct Case {
        std::int64_t d, ell, box;
    };
    for (Case c : {Case{5, 6, 8}, Case{5, -6, 8}, Case{5, 26, 8}, Case{5, -54, 10}, Case{8, 12, 8}, Case{8, 0, 8}, Case{13, 10, 9}, Case{12, 8, 8}, Case{20, 4, 10}, Case{20, 24, 10}, Case{229, 26, 16}, Case{229, -58, 16}}) {
        CAPTURE(c.d);
        CAPTURE(c.ell);
        PairOrbitCount P = pair_orbit_count(Int(static_cast<long>(c.d)), c.ell, c.box);
        CHECK(P.pairs_in_box > 0);
        CHECK(P.orbits == brute_pair_orbits(c.d, c.ell, c.box));
        CHECK(P.representatives.size() == P.orbits);
    }
    CHECK_THROWS(pair_orbit_count(Int(5), 10, 5));
    CHECK_THROWS(pair_orbit_count(Int(7), 1, 5));
}

TEST_CASE("pair orbit counts stop growing past the exhaust bound") {
    for (std::int64_t ell : {6L, -26L, 54L}) {
        PairOrbitCount P = pair_orbit_count(Int(5), ell, 4);
        std::int64_t B = P.exhaust_bound;
        REQUIRE(B < 200);
        PairOrbitCount full = pair_orbit_count(Int(5), ell, B);
        PairOrbitCount wider = pair_orbit_count(Int(5), ell, B + 6);
        CHECK(full.complete);
        CHECK(wider.orbits == full.orbits);
    }
}
