// Exact integer helpers, elements of Q(sqrt d) and small integer matrices.
#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace geolab {

using Int = mpz_class;

Int isqrt(const Int& n);  // floor(sqrt(n)), n >= 0
bool is_square(const Int& n);
Int gcd(const Int& a, const Int& b);
Int abs(const Int& a);
int sgn(const Int& a);
// Floor division and non-negative remainder for a positive modulus.
Int floor_div(const Int& a, const Int& b);
Int mod_pos(const Int& a, const Int& m);
// p-adic valuation; v(0) is reported as a large sentinel.
int valuation(const Int& n, const Int& p);
constexpr int kInfiniteValuation = 1 << 28;
int kronecker(const Int& a, const Int& n);
bool is_probable_prime(const Int& n);
bool is_squarefree(const Int& n);
// Trial division factorisation (fine for the conductor-sized inputs used here).
std::vector<std::pair<Int, int>> factor(const Int& n);
std::int64_t to_i64(const Int& n);  // throws if out of range
double to_double(const Int& n);
// log(|n|) for possibly huge n, accurate to double precision.
double log_abs(const Int& n);

// Element (p + q sqrt(d)) / r of Q(sqrt d), r > 0, kept in lowest terms.
struct QuadIrr {
    Int p, q, r{1}, d;
    QuadIrr() = default;
    QuadIrr(Int p_, Int q_, Int r_, Int d_);
    void normalize();
    QuadIrr conj() const;
    // Field norm, as a reduced fraction num/den.
    std::pair<Int, Int> norm() const;
    int sign() const;  // exact sign of the real number
    double to_double() const;  // no catastrophic cancellation
    double log_abs() const;    // log |x| for huge entries
    bool operator==(const QuadIrr& o) const;
    std::string str() const;
};
QuadIrr operator+(const QuadIrr& x, const QuadIrr& y);
QuadIrr operator-(const QuadIrr& x, const QuadIrr& y);
QuadIrr operator*(const QuadIrr& x, const QuadIrr& y);
QuadIrr inverse(const QuadIrr& x);

// 2x2 integer matrix in row-major order [[m[0], m[1]], [m[2], m[3]]].
struct Mat2Z {
    std::array<Int, 4> m{Int(1), Int(0), Int(0), Int(1)};
    Mat2Z() = default;
    Mat2Z(Int a, Int b, Int c, Int d) : m{std::move(a), std::move(b), std::move(c), std::move(d)} {}
    Int det() const { return m[0] * m[3] - m[1] * m[2]; }
    Int trace() const { return m[0] + m[3]; }
    bool operator==(const Mat2Z& o) const { return m == o.m; }
    static Mat2Z identity() { return {}; }
    std::string str() const;
};
Mat2Z operator*(const Mat2Z& x, const Mat2Z& y);
Mat2Z inverse_unimodular(const Mat2Z& g);  // exact inverse, |det| = 1

// 2x2 real matrix, row-major.
struct Mat2d {
    double a = 1, b = 0, c = 0, d = 1;
    double det() const { return a * d - b * c; }
};
Mat2d operator*(const Mat2d& x, const Mat2d& y);
Mat2d inverse(const Mat2d& g);  // assumes det = 1
Mat2d to_real(const Mat2Z& g);

}  // namespace geolab
