#include "geolab/arith.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace geolab {

Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt of negative integer");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Int abs(const Int& a) { return a < 0 ? Int(-a) : a; }

int sgn(const Int& a) { return mpz_sgn(a.get_mpz_t()); }

Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

int valuation(const Int& n, const Int& p) {
    if (n == 0) return kInfiniteValuation;
    Int t = abs(n);
    int v = 0;
    while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

int kronecker(const Int& a, const Int& n) { return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t()); }

bool is_probable_prime(const Int& n) { return n > 1 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

std::vector<std::pair<Int, int>> factor(const Int& n) {
    std::vector<std::pair<Int, int>> out;
    Int m = abs(n);
    if (m == 0) return out;
    for (Int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
        if (p > 2) ++p;  // after 2, step through odd numbers only
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}

bool is_squarefree(const Int& n) {
    for (const auto& [p, e] : factor(n))
        if (e > 1) return false;
    return n != 0;
}

std::int64_t to_i64(const Int& n) {
    if (!n.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
    return n.get_si();
}

double to_double(const Int& n) { return n.get_d(); }

double log_abs(const Int& n) {
    if (n == 0) return -std::numeric_limits<double>::infinity();
    long e = 0;
    double m = mpz_get_d_2exp(&e, n.get_mpz_t());
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

QuadIrr::QuadIrr(Int p_, Int q_, Int r_, Int d_) : p(std::move(p_)), q(std::move(q_)), r(std::move(r_)), d(std::move(d_)) {
    normalize();
}

void QuadIrr::normalize() {
    if (r == 0) throw std::domain_error("QuadIrr with zero denominator");
    if (r < 0) {
        p = -p;
        q = -q;
        r = -r;
    }
    Int g = gcd(gcd(p, q), r);
    if (g > 1) {
        p /= g;
        q /= g;
        r /= g;
    }
}

QuadIrr QuadIrr::conj() const { return QuadIrr(p, -q, r, d); }

std::pair<Int, Int> QuadIrr::norm() const {
    Int num = p * p - q * q * d;
    Int den = r * r;
    Int g = gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den};
}

int QuadIrr::sign() const {
    int sp = sgn(p), sq = sgn(q);
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    // opposite signs: compare p^2 with q^2 d
    Int diff = p * p - q * q * d;
    return sgn(diff) * sp;
}

// log(|x| + |y| sqrt(d)) for non-negative parts, robust to huge integers.
static double log_abs_sum(const Int& x, const Int& y, const Int& d) {
    double lx = log_abs(x);
    double ly = log_abs(y) + 0.5 * log_abs(d);
    double hi = std::max(lx, ly), lo = std::min(lx, ly);
    if (!std::isfinite(lo)) return hi;
    return hi + std::log1p(std::exp(lo - hi));
}

double QuadIrr::log_abs() const {
    int sp = sgn(p), sq = sgn(q);
    if (sp == 0 && sq == 0) return -std::numeric_limits<double>::infinity();
    double lr = geolab::log_abs(r);
    if (sp == 0 || sq == 0 || sp == sq) return log_abs_sum(p, q, d) - lr;
    // |p + q sqrt d| = |p^2 - q^2 d| / (|p| + |q| sqrt d)
    Int num = p * p - q * q * d;
    return geolab::log_abs(num) - log_abs_sum(p, q, d) - lr;
}

double QuadIrr::to_double() const {
    int s = sign();
    if (s == 0) return 0.0;
    return s * std::exp(log_abs());
}

bool QuadIrr::operator==(const QuadIrr& o) const { return p == o.p && q == o.q && r == o.r && d == o.d; }

std::string QuadIrr::str() const {
    std::ostringstream os;
    os << "(" << p.get_str() << (q < 0 ? "-" : "+") << abs(q).get_str() << "*sqrt(" << d.get_str() << "))/" << r.get_str();
    return os.str();
}

static void check_same_field(const QuadIrr& x, const QuadIrr& y) {
    if (x.d != y.d) throw std::invalid_argument("QuadIrr operands from different fields");
}

QuadIrr operator+(const QuadIrr& x, const QuadIrr& y) {
    check_same_field(x, y);
    return QuadIrr(x.p * y.r + y.p * x.r, x.q * y.r + y.q * x.r, x.r * y.r, x.d);
}

QuadIrr operator-(const QuadIrr& x, const QuadIrr& y) {
    check_same_field(x, y);
    return QuadIrr(x.p * y.r - y.p * x.r, x.q * y.r - y.q * x.r, x.r * y.r, x.d);
}

QuadIrr operator*(const QuadIrr& x, const QuadIrr& y) {
    check_same_field(x, y);
    return QuadIrr(x.p * y.p + x.q * y.q * x.d, x.p * y.q + x.q * y.p, x.r * y.r, x.d);
}

QuadIrr inverse(const QuadIrr& x) {
    // 1/x = r (p - q sqrt d) / (p^2 - q^2 d)
    Int n = x.p * x.p - x.q * x.q * x.d;
    if (n == 0) throw std::domain_error("inverse of zero");
    return QuadIrr(x.r * x.p, -x.r * x.q, n, x.d);
}

std::string Mat2Z::str() const {
    return "[[" + m[0].get_str() + "," + m[1].get_str() + "],[" + m[2].get_str() + "," + m[3].get_str() + "]]";
}

Mat2Z operator*(const Mat2Z& x, const Mat2Z& y) {
    return Mat2Z(x.m[0] * y.m[0] + x.m[1] * y.m[2], x.m[0] * y.m[1] + x.m[1] * y.m[3],
                 x.m[2] * y.m[0] + x.m[3] * y.m[2], x.m[2] * y.m[1] + x.m[3] * y.m[3]);
}

Mat2Z inverse_unimodular(const Mat2Z& g) {
    Int det = g.det();
    if (det != 1 && det != -1) throw std::invalid_argument("matrix is not unimodular");
    return Mat2Z(g.m[3] * det, -g.m[1] * det, -g.m[2] * det, g.m[0] * det);
}

Mat2d operator*(const Mat2d& x, const Mat2d& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2d inverse(const Mat2d& g) { return {g.d, -g.b, -g.c, g.a}; }

Mat2d to_real(const Mat2Z& g) { return {to_double(g.m[0]), to_double(g.m[1]), to_double(g.m[2]), to_double(g.m[3])}; }

}  // namespace geolab
