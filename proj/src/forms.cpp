#include "geolab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

namespace geolab {

bool QuadForm::operator<(const QuadForm& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
}

std::string QuadForm::str() const { return "(" + a.get_str() + "," + b.get_str() + "," + c.get_str() + ")"; }

bool is_discriminant(const Int& d) {
    Int r = mod_pos(d, 4);
    return r == 0 || r == 1;
}

bool is_fundamental_discriminant(const Int& d) {
    if (d == 0 || d == 1 || is_square(d)) return false;
    Int r = mod_pos(d, 4);
    if (r == 1) return is_squarefree(d);
    if (r != 0) return false;
    Int m = d / 4;
    Int r4 = mod_pos(m, 4);
    return (r4 == 2 || r4 == 3) && is_squarefree(m);
}

Discriminant make_discriminant(const Int& d) {
    if (!is_discriminant(d)) throw std::invalid_argument("not a discriminant (must be 0 or 1 mod 4): " + d.get_str());
    Discriminant D;
    D.d = d;
    D.is_square = is_square(d);
    D.is_fundamental = is_fundamental_discriminant(d);
    if (d == 0 || D.is_square) {
        D.conductor = 1;
        D.fundamental = d;
        return D;
    }
    // largest f with f^2 | d and d/f^2 = 0,1 mod 4
    Int f = 1;
    for (const auto& [p, e] : factor(d)) {
        Int pk = 1;
        for (int k = 0; k < e / 2; ++k) pk *= p;
        f *= pk;
    }
    while (f > 1) {
        if (d % (f * f) == 0 && is_discriminant(d / (f * f))) break;
        // drop one factor of 2 (the only prime that can spoil the congruence)
        if (f % 2 == 0)
            f /= 2;
        else
            break;
    }
    D.conductor = f;
    D.fundamental = d / (f * f);
    return D;
}

Int next_fundamental(const Int& lo) {
    Int d = lo;
    while (!is_fundamental_discriminant(d)) ++d;
    return d;
}

Int discriminant(const QuadForm& q) { return q.disc(); }

QuadForm gl2_act(const Mat2Z& g, const QuadForm& q) {
    Int det = g.det();
    if (det != 1 && det != -1) throw std::invalid_argument("gl2_act: matrix " + g.str() + " is not unimodular");
    // (x, y) g = (g0 x + g2 y, g1 x + g3 y)
    const Int &p = g.m[0], &r = g.m[1], &s = g.m[2], &t = g.m[3];
    // q(p x + s y, r x + t y)
    Int A = q.a * p * p + q.b * p * r + q.c * r * r;
    Int B = 2 * q.a * p * s + q.b * (p * t + r * s) + 2 * q.c * r * t;
    Int C = q.a * s * s + q.b * s * t + q.c * t * t;
    if (det < 0) return {-A, -B, -C};
    return {A, B, C};
}

bool is_reduced(const QuadForm& q) {
    Int d = q.disc();
    if (q.b <= 0 || q.b * q.b >= d) return false;
    Int two_a = 2 * abs(q.a);
    Int lo = two_a + q.b;  // need sqrt d < 2|a| + b
    if (lo * lo <= d) return false;
    Int hi = two_a - q.b;  // need 2|a| - b < sqrt d
    if (hi > 0 && hi * hi >= d) return false;
    return true;
}

std::pair<QuadForm, Mat2Z> rho_step(const QuadForm& q, const Int& s) {
    if (q.c == 0) throw std::domain_error("rho_step: c = 0 (square discriminant?)");
    Int d = q.disc();
    Int ac = abs(q.c);
    Int m = 2 * ac;
    Int bp;
    if (q.c * q.c < d) {
        bp = s - mod_pos(s + q.b, m);
    } else {
        bp = mod_pos(-q.b, m);
        if (bp > ac) bp -= m;
    }
    Int num = bp * bp - d;
    QuadForm out(q.c, bp, num / (4 * q.c));
    Int k = (bp + q.b) / (2 * q.c);
    Mat2Z g(0, -1, 1, -k);
    return {out, g};
}

std::pair<QuadForm, Mat2Z> reduce_form(const QuadForm& q) {
    Int d = q.disc();
    if (d <= 0 || is_square(d)) throw std::invalid_argument("reduce: discriminant must be positive and non-square");
    Int s = isqrt(d);
    QuadForm cur = q;
    Mat2Z acc;
    for (int it = 0; it < 1000000; ++it) {
        if (is_reduced(cur)) return {cur, acc};
        auto [nxt, g] = rho_step(cur, s);
        cur = nxt;
        acc = g * acc;
    }
    throw std::runtime_error("reduce: no reduced form reached");
}

static void sl2_cycle(const QuadForm& start, const Int& s, std::vector<QuadForm>& forms, std::vector<Mat2Z>& steps) {
    forms.clear();
    steps.clear();
    QuadForm cur = start;
    do {
        forms.push_back(cur);
        auto [nxt, g] = rho_step(cur, s);
        steps.push_back(g);
        cur = nxt;
        if (forms.size() > 100000000) throw std::runtime_error("reduction cycle too long");
    } while (cur != start);
}

static FormClass class_from_reduced(const QuadForm& qr) {
    Int s = isqrt(qr.disc());
    std::vector<QuadForm> c1, c2;
    std::vector<Mat2Z> s1, s2;
    sl2_cycle(qr, s, c1, s1);
    QuadForm tw = qr.negated_twist();
    bool same = std::find(c1.begin(), c1.end(), tw) != c1.end();
    if (!same) sl2_cycle(tw, s, c2, s2);
    auto m1 = std::min_element(c1.begin(), c1.end());
    FormClass fc;
    fc.content = qr.content();
    const std::vector<QuadForm>* home = &c1;
    const std::vector<Mat2Z>* home_steps = &s1;
    const std::vector<QuadForm>* other = &c2;
    QuadForm canon = *m1;
    if (!same) {
        auto m2 = std::min_element(c2.begin(), c2.end());
        if (*m2 < canon) {
            canon = *m2;
            home = &c2;
            home_steps = &s2;
            other = &c1;
        }
    }
    auto pos = std::find(home->begin(), home->end(), canon) - home->begin();
    std::size_t n = home->size();
    for (std::size_t i = 0; i < n; ++i) {
        fc.cycle.push_back((*home)[(pos + i) % n]);
        fc.steps.push_back((*home_steps)[(pos + i) % n]);
    }
    fc.canonical = canon;
    if (!same) fc.twin_cycle = *other;
    return fc;
}

FormClass reduce(const QuadForm& q) { return class_from_reduced(reduce_form(q).first); }

std::vector<FormClass> enumerate_classes(const Int& d) {
    if (d <= 0 || is_square(d)) throw std::invalid_argument("enumerate_classes: discriminant must be positive and non-square");
    if (!is_discriminant(d)) throw std::invalid_argument("enumerate_classes: not a discriminant");
    Int s = isqrt(d);
    std::set<QuadForm> reduced;
    // 0 < b < sqrt d, b = d mod 2, (sqrt d - b)/2 < |a| < (sqrt d + b)/2, a | (d - b^2)/4
    for (Int b = (d % 2 == 0) ? 2 : 1; b <= s; b += 2) {
        Int N = (d - b * b) / 4;
        Int lo = (s - b) / 2;  // |a| > (sqrt d - b)/2 handled by is_reduced below
        if (lo < 1) lo = 1;
        Int hi = (s + b) / 2 + 1;
        for (Int a = lo; a <= hi; ++a) {
            if (N % a != 0) continue;
            for (int sg : {1, -1}) {
                QuadForm q(sg * a, b, -sg * (N / a));
                if (is_reduced(q) && q.primitive()) reduced.insert(q);
            }
        }
    }
    std::vector<FormClass> out;
    std::set<QuadForm> seen;
    for (const auto& q : reduced) {
        if (seen.count(q)) continue;
        FormClass fc = class_from_reduced(q);
        for (const auto& f : fc.cycle) seen.insert(f);
        for (const auto& f : fc.twin_cycle) seen.insert(f);
        out.push_back(std::move(fc));
    }
    std::sort(out.begin(), out.end(), [](const FormClass& x, const FormClass& y) { return x.canonical < y.canonical; });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = static_cast<int>(i);
    return out;
}

ClassTable::ClassTable(const Int& d) : d_(d), classes_(enumerate_classes(d)) {
    for (const auto& fc : classes_) {
        for (const auto& f : fc.cycle) lookup_[f] = fc.index;
        for (const auto& f : fc.twin_cycle) lookup_[f] = fc.index;
    }
}

int ClassTable::index_of(const QuadForm& q) const {
    if (q.disc() != d_ || !q.primitive()) return -1;
    auto it = lookup_.find(reduce_form(q).first);
    return it == lookup_.end() ? -1 : it->second;
}

std::pair<int, Mat2Z> ClassTable::locate(const QuadForm& q) const {
    int idx = index_of(q);
    if (idx < 0) throw std::invalid_argument("locate: form " + q.str() + " is not a primitive form of discriminant " + d_.get_str());
    auto [cur, g] = reduce_form(q);
    const FormClass& fc = classes_[static_cast<std::size_t>(idx)];
    const QuadForm& target = fc.canonical;
    if (std::find(fc.cycle.begin(), fc.cycle.end(), cur) == fc.cycle.end()) {
        // the reduced form lies in the twin cycle; diag(1,-1) maps it into the home cycle
        Mat2Z tw(1, 0, 0, -1);
        cur = gl2_act(tw, cur);
        g = tw * g;
    }
    Int s = isqrt(d_);
    for (std::size_t i = 0; cur != target; ++i) {
        if (i > fc.cycle.size()) throw std::logic_error("locate: canonical form not reached");
        auto [nxt, step] = rho_step(cur, s);
        cur = nxt;
        g = step * g;
    }
    return {idx, g};
}

double cycle_step_time(const Int& d, const Int& b) {
    // log((sqrt d + b)/(sqrt d - b)) = 2 log(sqrt d + b) - log(d - b^2)
    double sd = std::sqrt(to_double(d));
    return 2.0 * std::log(sd + to_double(b)) - std::log(to_double(d - b * b));
}

double cycle_period(const Int& d, const std::vector<QuadForm>& cycle) {
    double sum = 0;
    for (const auto& f : cycle) sum += cycle_step_time(d, f.b);
    return sum;
}

PellData pell_fundamental(const Int& d) {
    if (d <= 0 || is_square(d)) throw std::invalid_argument("pell_fundamental: discriminant must be positive and non-square");
    PellData pd;
    pd.d = d;
    // Continued fraction of (P0 + sqrt d)/2 with P0 = d mod 2; the first return of Q to 2
    // yields the fundamental unit (G + B sqrt d)/2 of the order.
    Int sd = isqrt(d);
    Int P = (d % 2 == 0) ? Int(0) : Int(1);
    Int Q = 2;
    Int P0 = P;
    Int Gm2 = -P0, Gm1 = 2, Bm2 = 1, Bm1 = 0;
    for (long i = 0;; ++i) {
        Int a = floor_div(P + sd, Q);
        Int G = a * Gm1 + Gm2;
        Int B = a * Bm1 + Bm2;
        Int Pn = a * Q - P;
        Int Qn = (d - Pn * Pn) / Q;
        Gm2 = Gm1;
        Gm1 = G;
        Bm2 = Bm1;
        Bm1 = B;
        P = Pn;
        Q = Qn;
        if (Q == 2 || Q == -2) {
            Int n = G * G - d * B * B;
            if ((n == 4 || n == -4) && B > 0) {
                pd.t1 = abs(G);
                pd.u1 = B;
                pd.unit_norm = n == 4 ? 1 : -1;
                break;
            }
        }
        if (i > 100000000) throw std::runtime_error("pell_fundamental: no period found");
    }
    if (pd.unit_norm == 1) {
        pd.t = pd.t1;
        pd.u = pd.u1;
    } else {
        // eps1^2 = ((t1^2 + d u1^2)/2 + t1 u1 sqrt d)/2
        pd.t = (pd.t1 * pd.t1 + d * pd.u1 * pd.u1) / 2;
        pd.u = pd.t1 * pd.u1;
    }
    pd.eps = QuadIrr(pd.t, pd.u, 2, d);
    pd.log_eps_plus = pd.eps.log_abs();
    pd.regulator = QuadIrr(pd.t1, pd.u1, 2, d).log_abs();
    // geometric route: period of the principal cycle
    QuadForm principal = (d % 2 == 0) ? QuadForm(1, 0, -d / 4) : QuadForm(1, 1, -(d - 1) / 4);
    FormClass pc = reduce(principal);
    std::vector<QuadForm> own = pc.cycle;
    QuadForm pr = reduce_form(principal).first;
    if (std::find(own.begin(), own.end(), pr) == own.end()) own = pc.twin_cycle;
    double ell = cycle_period(d, own);
    bool norm_minus = pc.twin_cycle.empty();
    pd.regulator_cycle = norm_minus ? ell / 4.0 : ell / 2.0;
    return pd;
}

}  // namespace geolab
