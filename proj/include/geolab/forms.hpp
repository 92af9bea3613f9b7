// Integral binary quadratic forms of positive non-square discriminant:
// the GL2(Z) action, reduction cycles, class enumeration and Pell data.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "geolab/arith.hpp"

namespace geolab {

struct QuadForm {
    Int a, b, c;
    QuadForm() = default;
    QuadForm(Int a_, Int b_, Int c_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {}
    Int disc() const { return b * b - 4 * a * c; }
    Int content() const { return gcd(gcd(a, b), c); }
    bool primitive() const { return content() == 1; }
    QuadForm negated_twist() const { return {-a, b, -c}; }  // image under diag(1,-1)
    Int eval(const Int& x, const Int& y) const { return a * x * x + b * x * y + c * y * y; }
    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator!=(const QuadForm& o) const { return !(*this == o); }
    bool operator<(const QuadForm& o) const;
    std::string str() const;
};

struct Discriminant {
    Int d;
    bool is_square = false;
    bool is_fundamental = false;
    Int conductor{1};    // largest f with f^2 | d and d/f^2 a discriminant
    Int fundamental{0};  // d / conductor^2
};

// Throws std::invalid_argument unless d = 0 or 1 mod 4.
Discriminant make_discriminant(const Int& d);
bool is_discriminant(const Int& d);
bool is_fundamental_discriminant(const Int& d);
// Smallest fundamental discriminant >= lo.
Int next_fundamental(const Int& lo);

struct FormClass {
    QuadForm canonical;               // lexicographic minimum over the GL2 class
    std::vector<QuadForm> cycle;      // SL2 cycle of reduced forms, starting at canonical
    std::vector<Mat2Z> steps;         // steps[i] . cycle[i] = cycle[i+1] (indices mod length)
    std::vector<QuadForm> twin_cycle; // the other SL2 cycle of the GL2 class, empty if the same
    int index = -1;
    Int content{1};
};

Int discriminant(const QuadForm& q);
// g.q (x,y) = q((x,y) g) / det g. Rejects |det g| != 1.
QuadForm gl2_act(const Mat2Z& g, const QuadForm& q);
bool is_reduced(const QuadForm& q);
// Right-neighbour step; returns the new form and the unimodular matrix with step.q = result.
std::pair<QuadForm, Mat2Z> rho_step(const QuadForm& q, const Int& sqrt_floor);
// Reduced form in the SL2 class of q together with g such that g.q equals it.
std::pair<QuadForm, Mat2Z> reduce_form(const QuadForm& q);
FormClass reduce(const QuadForm& q);
std::vector<FormClass> enumerate_classes(const Int& d);

// Class lookup for a fixed discriminant: maps every reduced primitive form to its GL2 class.
class ClassTable {
public:
    explicit ClassTable(const Int& d);
    const Int& d() const { return d_; }
    const std::vector<FormClass>& classes() const { return classes_; }
    std::size_t h() const { return classes_.size(); }
    int index_of(const QuadForm& q) const;  // -1 if not primitive of this discriminant
    // Class index and a unimodular g with g.q equal to the canonical representative.
    std::pair<int, Mat2Z> locate(const QuadForm& q) const;
private:
    Int d_;
    std::vector<FormClass> classes_;
    std::map<QuadForm, int> lookup_;
};

struct PellData {
    Int d;
    Int t, u;        // minimal positive solution of t^2 - d u^2 = 4
    QuadIrr eps;     // (t + u sqrt d)/2
    Int t1, u1;      // fundamental unit (t1 + u1 sqrt d)/2 of either norm
    int unit_norm = 1;
    double log_eps_plus = 0;   // log eps
    double regulator = 0;      // log of the fundamental unit, from the exact unit
    double regulator_cycle = 0;  // same quantity from the principal reduction cycle
};

PellData pell_fundamental(const Int& d);
// Flow time between consecutive reduced forms in the cycle: log((sqrt d + b)/(sqrt d - b)).
double cycle_step_time(const Int& d, const Int& b);
double cycle_period(const Int& d, const std::vector<QuadForm>& cycle);

}  // namespace geolab
