#include "geolab/ternary.hpp"

#include "geolab/geodesic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace geolab {

TernaryForm TernaryForm::sum_of_squares() {
    TernaryForm t;
    t.B = {{{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}};
    return t;
}

TernaryForm TernaryForm::from_gram(const std::array<std::array<double, 3>, 3>& g) {
    TernaryForm t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (g[i][j] != g[j][i]) throw std::invalid_argument("TernaryForm: Gram matrix is not symmetric");
            double v = 2 * g[i][j];
            if (v != std::round(v) || (i == j && g[i][i] != std::round(g[i][i])))
                throw std::invalid_argument("TernaryForm: Gram matrix must have integral diagonal and half-integral off-diagonal entries");
            t.B[i][j] = static_cast<std::int64_t>(std::llround(v));
        }
    if (t.disc() == 0) throw std::invalid_argument("TernaryForm: degenerate form");
    return t;
}

std::int64_t TernaryForm::bilinear(const V3& v, const V3& w) const {
    std::int64_t s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += v[i] * B[i][j] * w[j];
    return s;
}

std::int64_t TernaryForm::Q(const V3& v) const { return bilinear(v, v) / 2; }

std::int64_t det(const M3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::int64_t TernaryForm::disc() const { return det(B); }

bool TernaryForm::positive_definite() const {
    return B[0][0] > 0 && B[0][0] * B[1][1] - B[0][1] * B[1][0] > 0 && det(B) > 0;
}

double TernaryForm::min_eigenvalue() const {
    Eigen::Matrix3d G;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G(i, j) = static_cast<double>(B[i][j]) / 2;
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(G, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

std::int64_t polarization(const std::array<std::int64_t, 3>& r, const std::array<std::int64_t, 3>& s) {
    return 2 * r[1] * s[1] - 4 * r[0] * s[2] - 4 * s[0] * r[2];
}

const std::vector<V3>& ShellTable::shell(std::int64_t n) const {
    static const std::vector<V3> empty;
    if (n > max_value) throw std::out_of_range("ShellTable: value beyond the tabulated range");
    auto it = shells.find(n);
    return it == shells.end() ? empty : it->second;
}

ShellTable make_shells(const TernaryForm& Q, std::int64_t max_value) {
    if (!Q.positive_definite()) throw std::invalid_argument("make_shells: form is not positive definite");
    ShellTable T;
    T.max_value = max_value;
    if (max_value <= 0) {
        T.verified = true;
        return T;
    }
    double lam = Q.min_eigenvalue();
    auto r = static_cast<std::int64_t>(std::floor(std::sqrt(1.1 * static_cast<double>(max_value) / lam)));
    T.radius = r;
    for (std::int64_t x = -r; x <= r; ++x)
        for (std::int64_t y = -r; y <= r; ++y)
            for (std::int64_t z = -r; z <= r; ++z) {
                V3 v{x, y, z};
                std::int64_t q = Q.Q(v);
                if (q > 0 && q <= max_value) T.shells[q].push_back(v);
            }
    // the ellipsoid Q <= N has coordinate extents sqrt(N (G^-1)_ii) = sqrt(2 N adj(B)_ii / det B)
    const auto& B = Q.B;
    std::int64_t D = det(B);
    std::int64_t adj[3] = {B[1][1] * B[2][2] - B[1][2] * B[2][1], B[0][0] * B[2][2] - B[0][2] * B[2][0],
                           B[0][0] * B[1][1] - B[0][1] * B[1][0]};
    T.verified = true;
    for (auto a : adj)
        if (!((r + 1) * (r + 1) * D > 2 * max_value * a)) T.verified = false;
    if (!T.verified) throw std::logic_error("make_shells: search box does not cover the ellipsoid");
    return T;
}

static bool positive_definite_binary(const std::array<std::int64_t, 3>& q) { return q[0] > 0 && q[1] * q[1] - 4 * q[0] * q[2] < 0; }

std::vector<EmbeddingPair> enumerate_embeddings(const std::array<std::int64_t, 3>& q, const TernaryForm& Q, const ShellTable& S) {
    std::vector<EmbeddingPair> out;
    if (!positive_definite_binary(q)) return out;
    for (const auto& v1 : S.shell(q[0]))
        for (const auto& v2 : S.shell(q[2]))
            if (Q.bilinear(v1, v2) == q[1]) out.push_back({v1, v2});
    return out;
}

EmbeddingCount count_embeddings(const std::array<std::int64_t, 3>& q, const TernaryForm& Q, std::optional<std::int64_t> box) {
    EmbeddingCount c;
    if (Q.positive_definite()) {
        c.complete = true;
        if (!positive_definite_binary(q)) return c;
        ShellTable S = make_shells(Q, std::max(q[0], q[2]));
        c.radius = S.radius;
        c.raw = enumerate_embeddings(q, Q, S).size();
        return c;
    }
    if (!box) throw std::invalid_argument("count_embeddings: indefinite ternary form needs a coefficient box");
    std::int64_t r = *box;
    c.radius = r;
    std::vector<V3> s1, s3;
    for (std::int64_t x = -r; x <= r; ++x)
        for (std::int64_t y = -r; y <= r; ++y)
            for (std::int64_t z = -r; z <= r; ++z) {
                V3 v{x, y, z};
                std::int64_t val = Q.Q(v);
                if (val == q[0]) s1.push_back(v);
                if (val == q[2]) s3.push_back(v);
            }
    for (const auto& v1 : s1)
        for (const auto& v2 : s3) {
            if (Q.bilinear(v1, v2) != q[1]) continue;
            // rank 2 image only
            V3 cr{v1[1] * v2[2] - v1[2] * v2[1], v1[2] * v2[0] - v1[0] * v2[2], v1[0] * v2[1] - v1[1] * v2[0]};
            if (cr == V3{0, 0, 0}) continue;
            ++c.raw;
        }
    return c;
}

M3 mul(const M3& x, const M3& y) {
    M3 z{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) z[i][j] += x[i][k] * y[k][j];
    return z;
}

V3 apply(const M3& g, const V3& v) {
    return {g[0][0] * v[0] + g[0][1] * v[1] + g[0][2] * v[2], g[1][0] * v[0] + g[1][1] * v[1] + g[1][2] * v[2],
            g[2][0] * v[0] + g[2][1] * v[1] + g[2][2] * v[2]};
}

std::vector<M3> integral_isometries(const TernaryForm& Q) {
    if (!Q.positive_definite()) throw std::invalid_argument("integral_isometries: only definite forms have a finite isometry group");
    std::int64_t diag[3] = {Q.B[0][0] / 2, Q.B[1][1] / 2, Q.B[2][2] / 2};
    ShellTable S = make_shells(Q, *std::max_element(diag, diag + 3));
    std::vector<M3> out;
    for (const auto& c0 : S.shell(diag[0]))
        for (const auto& c1 : S.shell(diag[1])) {
            if (Q.bilinear(c0, c1) != Q.B[0][1]) continue;
            for (const auto& c2 : S.shell(diag[2])) {
                if (Q.bilinear(c0, c2) != Q.B[0][2] || Q.bilinear(c1, c2) != Q.B[1][2]) continue;
                M3 g{{{c0[0], c1[0], c2[0]}, {c0[1], c1[1], c2[1]}, {c0[2], c1[2], c2[2]}}};
                if (det(g) == 1) out.push_back(g);
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_group(const std::vector<M3>& G) {
    std::set<M3> s(G.begin(), G.end());
    M3 id{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    if (!s.count(id)) return false;
    for (const auto& x : G)
        for (const auto& y : G)
            if (!s.count(mul(x, y))) return false;
    return true;
}

using Key6 = std::array<std::int64_t, 6>;

static Key6 embedding_key(const std::vector<M3>& G, const V3& v1, const V3& v2) {
    Key6 best{};
    bool first = true;
    for (const auto& g : G) {
        V3 a = apply(g, v1), b = apply(g, v2);
        Key6 k{a[0], a[1], a[2], b[0], b[1], b[2]};
        if (first || k < best) best = k;
        first = false;
    }
    return best;
}

OrbitCount orbit_count(const std::array<std::int64_t, 3>& q, const TernaryForm& Q) {
    OrbitCount oc;
    auto G = integral_isometries(Q);
    oc.group_order = G.size();
    if (!positive_definite_binary(q)) return oc;
    ShellTable S = make_shells(Q, std::max(q[0], q[2]));
    std::set<Key6> keys;
    for (const auto& e : enumerate_embeddings(q, Q, S)) {
        ++oc.raw;
        keys.insert(embedding_key(G, e.v1, e.v2));
    }
    oc.orbits = keys.size();
    return oc;
}

std::int64_t square_part_root(std::int64_t g) {
    g = std::llabs(g);
    if (g == 0) return 0;
    std::int64_t f = 1;
    for (std::int64_t p = 2; p * p <= g; ++p) {
        while (g % (p * p) == 0) {
            f *= p;
            g /= p * p;
        }
        while (g % p == 0) g /= p;
    }
    return f;
}

OrbitSweep orbit_sweep(const TernaryForm& Q, std::int64_t max_coef) {
    OrbitSweep sw;
    sw.max_coef = max_coef;
    auto G = integral_isometries(Q);
    ShellTable S = make_shells(Q, max_coef);
    for (std::int64_t a1 = 1; a1 <= max_coef; ++a1) {
        // orbit representatives of the first vector with their orbit sizes and stabilisers
        struct Rep {
            V3 v;
            std::size_t orbit_size;
            std::vector<M3> stab;
        };
        std::vector<Rep> reps;
        std::set<V3> seen;
        for (const auto& v : S.shell(a1)) {
            if (seen.count(v)) continue;
            Rep r{v, 0, {}};
            std::set<V3> orb;
            for (const auto& g : G) {
                V3 w = apply(g, v);
                orb.insert(w);
                if (w == v) r.stab.push_back(g);
            }
            r.orbit_size = orb.size();
            seen.insert(orb.begin(), orb.end());
            reps.push_back(std::move(r));
        }
        for (std::int64_t a3 = 1; a3 <= max_coef; ++a3) {
            std::map<std::int64_t, std::set<V3>> fibre_keys;
            std::map<std::int64_t, std::uint64_t> raw;
            for (const auto& r : reps) {
                std::map<std::int64_t, std::set<V3>> local;
                for (const auto& v2 : S.shell(a3)) {
                    std::int64_t a2 = Q.bilinear(r.v, v2);
                    if (std::llabs(a2) > max_coef || a2 * a2 - 4 * a1 * a3 >= 0) continue;
                    V3 best = v2;
                    for (const auto& s : r.stab) best = std::min(best, apply(s, v2));
                    local[a2].insert(best);
                    raw[a2] += r.orbit_size;
                }
                for (auto& [a2, ks] : local) {
                    auto& tgt = sw.counts[{a1, a2, a3}];
                    tgt.orbits += ks.size();
                }
            }
            for (auto& [a2, n] : raw) {
                auto& tgt = sw.counts[{a1, a2, a3}];
                tgt.raw = n;
                tgt.group_order = G.size();
                std::int64_t f = square_part_root(std::gcd(std::gcd(a1, a2), a3));
                double ratio = static_cast<double>(tgt.orbits) / static_cast<double>(f);
                if (ratio > sw.max_ratio) {
                    sw.max_ratio = ratio;
                    sw.argmax = {a1, a2, a3};
                }
            }
        }
    }
    return sw;
}

LocalInvariants local_invariants(const QuadForm& q, const Int& p) {
    if (!is_probable_prime(p)) throw std::invalid_argument("local_invariants: p must be prime");
    Int disc = q.disc();
    if (disc == 0) throw std::invalid_argument("local_invariants: degenerate form");
    LocalInvariants li;
    li.p = p;
    if (p == 2) {
        int m1 = valuation(q.a, p), m2 = valuation(q.b, p), m3 = valuation(q.c, p);
        int mn = std::min(m1, m3);
        if (m2 >= mn + 1) {
            // e with minimal valuation of q(e), then its orthogonal complement
            li.diagonal = true;
            li.a = mn;
            li.b = valuation(disc, p) - 2 - mn;
        } else {
            li.diagonal = false;
            li.a = m2;
            Int D = disc;
            for (int i = 0; i < m2; ++i) D /= 4;
            li.b = mod_pos(D, 8) == 5 ? m2 : m2 + 1;
        }
        return li;
    }
    // B-matrix [[2a, b], [b, 2c]]; candidate vectors e1, e2, e1 + e2
    const std::array<std::pair<Int, Int>, 3> cand{{{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(1), Int(1)}}};
    int best = kInfiniteValuation;
    std::pair<Int, Int> v;
    for (const auto& [x, y] : cand) {
        int val = valuation(q.eval(x, y), p);
        if (val < best) {
            best = val;
            v = {x, y};
        }
    }
    Int b1 = 2 * q.a * v.first + q.b * v.second, b2 = q.b * v.first + 2 * q.c * v.second;
    Int w1 = b2, w2 = -b1;
    int k = std::min(valuation(w1, p), valuation(w2, p));
    for (int i = 0; i < k; ++i) {
        w1 /= p;
        w2 /= p;
    }
    li.a = best;
    li.b = valuation(q.eval(w1, w2), p);
    return li;
}

std::vector<std::array<std::int64_t, 3>> forms_in_box(std::int64_t d, std::int64_t box) {
    std::vector<std::array<std::int64_t, 3>> out;
    for (std::int64_t a = -box; a <= box; ++a) {
        if (a == 0) continue;
        for (std::int64_t b = -box; b <= box; ++b) {
            std::int64_t n = b * b - d;
            if (n % (4 * a) != 0) continue;
            std::int64_t c = n / (4 * a);
            if (std::llabs(c) <= box) out.push_back({a, b, c});
        }
    }
    return out;
}

namespace {

std::array<std::int64_t, 3> to_arr(const QuadForm& q) { return {to_i64(q.a), to_i64(q.b), to_i64(q.c)}; }
QuadForm to_form(const std::array<std::int64_t, 3>& r) {
    return QuadForm(Int(static_cast<long>(r[0])), Int(static_cast<long>(r[1])), Int(static_cast<long>(r[2])));
}

Mat2Z mat_pow(Mat2Z g, long k) {
    if (k < 0) {
        g = inverse_unimodular(g);
        k = -k;
    }
    Mat2Z r;
    while (k) {
        if (k & 1) r = r * g;
        g = g * g;
        k >>= 1;
    }
    return r;
}

// Data for one primitive stratum: the class table of d/f^2 and, per class, the stabiliser
// generator of the canonical form together with its light-cone step.
struct Stratum {
    std::int64_t f = 1;
    ClassTable table;
    std::vector<Mat2Z> gen;
    std::vector<std::pair<double, double>> roots;  // xi_+, xi_- of the canonical form
    std::vector<double> step;                      // change of log|P/Q| under gen
    explicit Stratum(std::int64_t f_, const Int& d0) : f(f_), table(d0) {}
};

double eval_at(const std::array<std::int64_t, 3>& r, double xi) {
    return static_cast<double>(r[0]) * xi * xi + static_cast<double>(r[1]) * xi + static_cast<double>(r[2]);
}

Mat2Z stabiliser_generator(const QuadForm& q, const PellData& P) {
    // automorph attached to the fundamental unit (t1 + u1 sqrt d)/2; try both orientations
    const Int &t = P.t1, &u = P.u1;
    Mat2Z cands[2] = {Mat2Z((t - q.b * u) / 2, -q.c * u, q.a * u, (t + q.b * u) / 2),
                      Mat2Z((t - q.b * u) / 2, q.a * u, -q.c * u, (t + q.b * u) / 2)};
    for (const auto& M : cands)
        if (gl2_act(M, q) == q) return M;
    throw std::logic_error("stabiliser_generator: no automorph found for " + q.str());
}

}  // namespace

PairOrbitCount pair_orbit_count(const Int& dZ, std::int64_t ell, std::int64_t box) {
    if (dZ <= 0 || is_square(dZ) || !is_discriminant(dZ)) throw std::invalid_argument("pair_orbit_count: need a positive non-square discriminant");
    const std::int64_t d = to_i64(dZ);
    if (ell == 2 * d || ell == -2 * d) throw std::invalid_argument("pair_orbit_count: degenerate pairing ell = +-2d");
    PairOrbitCount res;
    res.d = d;
    res.ell = ell;
    res.box = box;

    std::map<std::int64_t, Stratum> strata;
    auto stratum = [&](std::int64_t f) -> Stratum& {
        auto it = strata.find(f);
        if (it != strata.end()) return it->second;
        Int d0 = dZ / Int(static_cast<long>(f * f));
        Stratum S(f, d0);
        PellData P = pell_fundamental(d0);
        for (const auto& fc : S.table.classes()) {
            Mat2Z A = stabiliser_generator(fc.canonical, P);
            auto e = endpoints(fc.canonical);
            double xp = e.second.to_double(), xm = e.first.to_double();
            S.gen.push_back(A);
            S.roots.push_back({xp, xm});
            // probe with y^2: P = Q = 1 before the step
            QuadForm probe = gl2_act(A, QuadForm(0, 0, 1));
            auto pr = to_arr(probe);
            S.step.push_back(std::log(std::fabs(eval_at(pr, xp) / eval_at(pr, xm))));
        }
        return strata.emplace(f, std::move(S)).first->second;
    };

    auto canonical = [&](const std::array<std::int64_t, 3>& r, const std::array<std::int64_t, 3>& s) {
        std::int64_t f = std::gcd(std::gcd(std::llabs(r[0]), std::llabs(r[1])), std::llabs(r[2]));
        Stratum& S = stratum(f);
        auto [idx, g] = S.table.locate(QuadForm(to_form({r[0] / f, r[1] / f, r[2] / f})));
        auto s1 = to_arr(gl2_act(g, to_form(s)));
        const auto k = static_cast<std::size_t>(idx);
        auto [xp, xm] = S.roots[k];
        double u = std::log(std::fabs(eval_at(s1, xp) / eval_at(s1, xm)));
        double x = u / S.step[k];
        double fl = std::floor(x);
        std::vector<long> ks;
        if (std::fabs(x - fl - 0.5) < 1e-9 * (1 + std::fabs(x))) ks = {static_cast<long>(fl), static_cast<long>(fl) + 1};
        else ks = {static_cast<long>(std::llround(x))};
        std::array<std::int64_t, 3> best{};
        bool first = true;
        for (long kk : ks) {
            auto cand = to_arr(gl2_act(mat_pow(S.gen[k], -kk), to_form(s1)));
            if (first || cand < best) best = cand;
            first = false;
        }
        // key: content, class, normalised second form
        return std::make_tuple(f, idx, best);
    };

    auto forms = forms_in_box(d, box);
    res.forms_in_box = forms.size();
    std::set<std::tuple<std::int64_t, int, std::array<std::int64_t, 3>>> keys;
    for (const auto& r : forms)
        for (const auto& s : forms) {
            if (polarization(r, s) != ell) continue;
            ++res.pairs_in_box;
            keys.insert(canonical(r, s));
        }
    res.orbits = keys.size();
    for (const auto& [f, idx, s] : keys) res.representatives.push_back({idx, s});

    // bound on the coefficients of the canonical representatives of every orbit
    double bound = 0;
    for (std::int64_t f = 1; f * f <= d; ++f) {
        if (d % (f * f) != 0 || !is_discriminant(Int(static_cast<long>(d / (f * f)))) || is_square(Int(static_cast<long>(d / (f * f))))) continue;
        Stratum& S = stratum(f);
        for (std::size_t k = 0; k < S.table.classes().size(); ++k) {
            auto r0 = to_arr(S.table.classes()[k].canonical);
            for (auto& x : r0) x *= f;
            for (auto x : r0) bound = std::max(bound, static_cast<double>(std::llabs(x)));
            auto [xp, xm] = S.roots[k];
            // solve a xi^2 + b xi + c = P, Q at xi_+, xi_-; <r0, (a,b,c)> = ell
            Eigen::Matrix3d M;
            M << xp * xp, xp, 1, xm * xm, xm, 1, -4.0 * static_cast<double>(r0[2]), 2.0 * static_cast<double>(r0[1]),
                -4.0 * static_cast<double>(r0[0]);
            auto solve = [&](double P, double Qv) {
                Eigen::Vector3d rhs(P, Qv, static_cast<double>(ell));
                return Eigen::Vector3d(M.partialPivLu().solve(rhs));
            };
            auto discv = [](const Eigen::Vector3d& v) { return v(1) * v(1) - 4 * v(0) * v(2); };
            Eigen::Vector3d base = solve(0, 0);
            Eigen::Vector3d eP = solve(1, 0) - base, eQ = solve(0, 1) - base;
            double kappa_coef = discv(solve(1, 1)) - discv(base);  // disc is linear in the product PQ
            double PQ = (static_cast<double>(d) - discv(base)) / kappa_coef;
            double half = std::fabs(S.step[k]) / 2;
            double rt = std::sqrt(std::fabs(PQ));
            for (int sgn : {1, -1}) {
                double sp = sgn, sq = PQ >= 0 ? sgn : -sgn;
                for (int i = 0; i < 3; ++i) {
                    double alpha = eP(i) * sp * rt, beta = eQ(i) * sq * rt;
                    std::vector<double> us{-half, half};
                    if (alpha != 0 && beta / alpha > 0) {
                        double uc = std::log(beta / alpha);
                        if (std::fabs(uc) <= half) us.push_back(uc);
                    }
                    for (double uu : us) bound = std::max(bound, std::fabs(base(i) + alpha * std::exp(uu / 2) + beta * std::exp(-uu / 2)));
                }
            }
        }
    }
    res.exhaust_bound = static_cast<std::int64_t>(std::ceil(bound * (1 + 1e-9) + 1e-6));
    res.complete = box >= res.exhaust_bound;
    return res;
}

}  // namespace geolab
