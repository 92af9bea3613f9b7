#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "geolab/acceptance.hpp"
#include "geolab/classgroup.hpp"
#include "geolab/dynamics.hpp"
#include "geolab/parallel.hpp"
#include "geolab/stats.hpp"
#include "geolab/ternary.hpp"
#include "report.hpp"

using namespace geolab;
using geolab::cli::json;
using geolab::cli::Report;

namespace {

constexpr int kExitOk = 0, kExitUsage = 1, kExitCheck = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string disc;
    bool fundamental_only = false;
    std::size_t samples = 100000;
    std::size_t per_class = 0;  // overrides samples when set
    std::uint64_t seed = 0;
    std::string out, format = "json";
    std::string H;
    std::string layout = "independent";
    int per_octave = 4;
    std::string R = "1,2";
    std::size_t mc_samples = 1000000;
    std::string q = "1,0,1";
    std::string gram;
    std::string gram_file;
    std::int64_t box = 0, max_coef = 20, ell = 0;
    long p = 5;
    std::string N = "4,8";
    std::string M = "3";
    double eta = 0.02, height_cap = 0, slack = 0, step = 0.01;
    std::string source = "mu_d";
    std::string suite = "primary";
    std::string criteria;
    std::size_t threads = 0;
    bool verbose = false;
};

json echo(const RunConfig& c) {
    json j;
    j["disc"] = c.disc;
    j["fundamental_only"] = c.fundamental_only;
    j["samples"] = c.samples;
    j["per_class"] = c.per_class;
    j["seed"] = c.seed;
    j["H"] = c.H;
    j["layout"] = c.layout;
    j["per_octave"] = c.per_octave;
    j["R"] = c.R;
    j["mc_samples"] = c.mc_samples;
    j["q"] = c.q;
    j["gram"] = c.gram;
    j["Q"] = c.gram_file;
    j["box"] = c.box;
    j["max_coef"] = c.max_coef;
    j["ell"] = c.ell;
    j["p"] = c.p;
    j["N"] = c.N;
    j["M"] = c.M;
    j["eta"] = c.eta;
    j["height_cap"] = c.height_cap;
    j["slack"] = c.slack;
    j["step"] = c.step;
    j["source"] = c.source;
    j["suite"] = c.suite;
    j["criteria"] = c.criteria;
    return j;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

template <class T>
T parse_number(const std::string& s, const std::string& what) {
    std::istringstream in(s);
    T v;
    if (!(in >> v) || !(in >> std::ws).eof()) throw UsageError("invalid " + what + ": '" + s + "'");
    return v;
}

std::vector<double> doubles(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& t : split(s, ',')) out.push_back(parse_number<double>(t, what));
    return out;
}

std::vector<std::int64_t> ints(const std::string& s, const std::string& what) {
    std::vector<std::int64_t> out;
    for (const auto& t : split(s, ',')) out.push_back(parse_number<std::int64_t>(t, what));
    return out;
}

// "5,8,12" or "lo..hi"; non-discriminants inside a range are skipped, listed ones are rejected.
std::vector<Int> discriminants(const RunConfig& c) {
    if (c.disc.empty()) throw UsageError("--disc is required for this command");
    std::vector<Int> out;
    for (const auto& item : split(c.disc, ',')) {
        auto dots = item.find("..");
        if (dots != std::string::npos) {
            auto lo = parse_number<long>(item.substr(0, dots), "discriminant range"), hi = parse_number<long>(item.substr(dots + 2), "discriminant range");
            if (lo > hi) throw UsageError("empty discriminant range " + item);
            for (long d = lo; d <= hi; ++d) {
                Int D(d);
                if (d <= 0 || !is_discriminant(D) || is_square(D)) continue;
                if (c.fundamental_only && !is_fundamental_discriminant(D)) continue;
                out.push_back(D);
            }
        } else {
            Int D(item);
            if (D <= 0 || !is_discriminant(D) || is_square(D)) throw UsageError("not a positive non-square discriminant: " + item);
            if (c.fundamental_only && !is_fundamental_discriminant(D)) continue;
            out.push_back(D);
        }
    }
    if (out.empty()) throw UsageError("no discriminant selected by --disc " + c.disc);
    return out;
}

SampleLayout layout_of(const RunConfig& c) {
    if (c.layout == "independent") return SampleLayout::Independent;
    if (c.layout == "stratified") return SampleLayout::Stratified;
    throw UsageError("--layout must be independent or stratified");
}

std::size_t per_class(const RunConfig& c, const GeodesicSet& G) {
    if (c.per_class > 0) return c.per_class;
    if (c.samples == 0) throw UsageError("--samples must be positive");
    return (c.samples + G.table.h() - 1) / G.table.h();
}

std::array<std::int64_t, 3> binary_form(const std::string& s) {
    auto v = ints(s, "binary form");
    if (v.size() != 3) throw UsageError("--q needs three coefficients a,b,c");
    return {v[0], v[1], v[2]};
}

// Gram file: a 3x3 array of numbers, bare or under the key "gram"; off-diagonal
// entries are half-integers, e.g. [[1, 0.5, 0], [0.5, 1, 0], [0, 0, 1]].
TernaryForm gram_from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read Gram file " + path);
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw UsageError("Gram file " + path + " is not valid JSON: " + e.what());
    }
    const json& m = doc.is_object() ? doc.value("gram", json()) : doc;
    std::array<std::array<double, 3>, 3> g{};
    if (!m.is_array() || m.size() != 3) throw UsageError("Gram file " + path + " needs a 3x3 array");
    for (int i = 0; i < 3; ++i) {
        if (!m[i].is_array() || m[i].size() != 3) throw UsageError("Gram file " + path + " needs a 3x3 array");
        for (int j = 0; j < 3; ++j) {
            if (!m[i][j].is_number()) throw UsageError("Gram file " + path + ": non-numeric entry");
            g[i][j] = m[i][j].get<double>();
        }
    }
    return TernaryForm::from_gram(g);
}

TernaryForm ternary_form(const RunConfig& c) {
    if (!c.gram_file.empty() && !c.gram.empty()) throw UsageError("give either --gram or --Q, not both");
    if (!c.gram_file.empty()) return gram_from_file(c.gram_file);
    if (c.gram.empty()) return TernaryForm::sum_of_squares();
    auto v = doubles(c.gram, "Gram matrix");
    if (v.size() != 9) throw UsageError("--gram needs nine entries, row by row");
    std::array<std::array<double, 3>, 3> g{};
    for (int i = 0; i < 9; ++i) g[i / 3][i % 3] = v[static_cast<std::size_t>(i)];
    return TernaryForm::from_gram(g);
}

std::string dstr(const Int& d) { return d.get_str(); }

// ---- forms, classgroup, geodesics ----

void forms_enumerate(const RunConfig& c, Report& r) {
    r.columns = {"disc", "class", "a", "b", "c", "cycle_length", "twin_cycle_length"};
    json hs = json::object();
    for (const Int& d : discriminants(c)) {
        ClassTable T(d);
        for (const auto& fc : T.classes())
            r.add_row({dstr(d), fc.index, fc.canonical.a.get_str(), fc.canonical.b.get_str(), fc.canonical.c.get_str(), fc.cycle.size(),
                       fc.twin_cycle.size()});
        hs[dstr(d)] = T.h();
    }
    r.summary["class_number"] = hs;
}

void classgroup_table(const RunConfig& c, Report& r) {
    r.columns = {"disc", "i", "j", "product"};
    json s = json::object();
    for (const Int& d : discriminants(c)) {
        ClassTable T(d);
        PicardTable P = picard_table(T);
        for (std::size_t i = 0; i < P.mul.size(); ++i)
            for (std::size_t j = 0; j < P.mul[i].size(); ++j) r.add_row({dstr(d), i, j, P.mul[i][j]});
        std::size_t from_ideals = class_count_from_ideals(T);
        bool ok = P.closed && P.associative && P.commutative && P.has_inverses && P.identity >= 0 && from_ideals == T.h();
        json classes = json::array();
        for (const auto& fc : T.classes()) {
            const QuadForm& q = fc.canonical;
            OIdeal I = form_to_ideal(q);
            classes.push_back({{"index", fc.index},
                               {"rep_form", {q.a.get_str(), q.b.get_str(), q.c.get_str()}},
                               {"ideal_std_form", I.str()}});
        }
        s[dstr(d)] = {{"d", dstr(d)},
                      {"h", T.h()},
                      {"regulator", pell_fundamental(d).regulator},
                      {"classes", classes},
                      {"identity", P.identity},
                      {"closed", P.closed},
                      {"associative", P.associative},
                      {"commutative", P.commutative},
                      {"inverses", P.has_inverses},
                      {"classes_from_ideals", from_ideals},
                      {"ok", ok}};
        if (!ok) r.check_failed = true;
    }
    r.summary = s;
}

void geodesics_list(const RunConfig& c, Report& r) {
    r.columns = {"disc", "class", "a", "b", "c", "period", "height_period", "max_height"};
    for (const Int& d : discriminants(c)) {
        GeodesicSet G = make_geodesic_set(d);
        HeightProfile prof = height_profile(G, c.step);
        for (std::size_t k = 0; k < G.orbits.size(); ++k) {
            const auto& o = G.orbits[k];
            double mx = 0;
            for (double x : prof.log_height[k]) mx = std::max(mx, x);
            r.add_row({dstr(d), k, o.cls.canonical.a.get_str(), o.cls.canonical.b.get_str(), o.cls.canonical.c.get_str(), o.period, o.height_period,
                       std::exp(mx)});
        }
    }
}

void geodesics_sample(const RunConfig& c, Report& r) {
    r.columns = {"disc", "class", "t", "x", "y", "theta", "height"};
    for (const Int& d : discriminants(c)) {
        GeodesicSet G = make_geodesic_set(d);
        for (const auto& s : mu_d_sample(G, per_class(c, G), c.seed, layout_of(c)))
            r.add_row({dstr(d), s.class_index, s.t, s.p.x, s.p.y, s.p.theta, s.p.height});
    }
}

// ---- stats ----

std::vector<double> heights_or_default(const RunConfig& c, double d) {
    if (!c.H.empty()) return doubles(c.H, "--H");
    double top = std::pow(d, 0.25);
    std::vector<double> out;
    for (int k = 0; k <= 8; ++k) out.push_back(1.2 * std::pow(std::max(top, 1.2) / 1.2, k / 8.0));
    return out;
}

void stats_cuspmass(const RunConfig& c, Report& r) {
    r.columns = {"disc", "H", "mass", "mass_times_H2"};
    for (const Int& d : discriminants(c)) {
        GeodesicSet G = make_geodesic_set(d);
        auto S = mu_d_sample(G, per_class(c, G), c.seed, layout_of(c));
        for (const auto& row : cusp_mass_profile(S, heights_or_default(c, to_double(d)))) r.add_row({dstr(d), row.H, row.mass, row.scaled});
    }
}

void stats_components(const RunConfig& c, Report& r) {
    r.columns = {"disc", "H", "norm_bound", "components", "ideals", "match", "match_by_class", "inconclusive"};
    for (const Int& d : discriminants(c)) {
        GeodesicSet G = make_geodesic_set(d);
        HeightProfile prof = height_profile(G, c.step);
        std::vector<double> Hs;
        if (!c.H.empty()) Hs = doubles(c.H, "--H");
        else {
            double top = std::pow(to_double(d), 0.25);
            for (int k = 0; k < 5; ++k) Hs.push_back(1 + (top - 1) * (k + 0.5) / 5);
        }
        for (double H : Hs) {
            auto rep = cusp_components(G, prof, H);
            r.add_row({dstr(d), H, rep.norm_bound, rep.components, rep.ideals, rep.match(), rep.match_by_class(), rep.inconclusive});
            if (!rep.match() && !rep.inconclusive) r.check_failed = true;
        }
    }
}

void stats_paircorr(const RunConfig& c, Report& r) {
    r.columns = {"disc", "delta", "cross_pairs", "diag_pairs", "cross_freq", "diag_freq", "cross_err", "diag_err"};
    json s = json::object();
    double H = c.H.empty() ? 2.0 : doubles(c.H, "--H").at(0);
    for (const Int& d : discriminants(c)) {
        GeodesicSet G = make_geodesic_set(d);
        auto S = mu_d_sample(G, per_class(c, G), c.seed, layout_of(c));
        PairCorrStat st = pair_correlation(G, S, H, delta_grid(to_double(d), H, c.per_octave));
        for (std::size_t k = 0; k < st.delta.size(); ++k)
            r.add_row({dstr(d), st.delta[k], st.cross_pairs[k], st.diag_pairs[k], st.cross_freq[k], st.diag_freq[k], st.cross_err[k], st.diag_err[k]});
        s[dstr(d)] = {{"samples", st.samples}, {"used", st.used}, {"cross_slope", st.cross_slope}, {"diag_slope", st.diag_slope}, {"images", st.images}};
    }
    r.summary = s;
}

void stats_skubenko(const RunConfig& c, Report& r) {
    r.columns = {"disc", "R", "count", "cone_measure", "cone_stderr"};
    auto Rs = doubles(c.R, "--R");
    json s = json::object();
    for (const Int& d : discriminants(c)) {
        std::vector<double> counts, cones;
        for (std::size_t i = 0; i < Rs.size(); ++i) {
            auto box = CoefBox::max_norm(Rs[i]);
            auto n = count_hyperboloid_points(d, box);
            auto mc = cone_measure(box, c.mc_samples, c.seed + i);
            r.add_row({dstr(d), Rs[i], n, mc.value, mc.stderr_});
            counts.push_back(static_cast<double>(n));
            cones.push_back(mc.value);
        }
        if (Rs.size() >= 2 && counts[1] > 0 && cones[1] > 0) {
            double cr = counts[0] / counts[1], vr = cones[0] / cones[1];
            s[dstr(d)] = {{"count_ratio", cr}, {"cone_ratio", vr}, {"relative_difference", std::fabs(cr / vr - 1)}};
        }
    }
    r.summary = s;
}

void stats_volume(const RunConfig& c, Report& r) {
    r.columns = {"disc", "fundamental", "conductor", "h", "unit_norm", "regulator_unit", "regulator_cycle", "volume_unit", "volume_cycle", "exponent",
                 "ratio_formula", "ratio_observed"};
    for (const Int& d : discriminants(c)) {
        VolumeReport v = volume_identity(d);
        r.add_row({dstr(d), dstr(v.fundamental), dstr(v.conductor), v.h, v.unit_norm, v.regulator_unit, v.regulator_cycle, v.volume_unit, v.volume_cycle,
                   v.exponent, v.ratio_formula, v.ratio_observed});
        if (std::fabs(v.volume_unit - v.volume_cycle) > 1e-9 * std::max(1.0, v.volume_unit) ||
            std::fabs(v.ratio_formula - v.ratio_observed) > 1e-6 * std::max(1.0, v.ratio_formula))
            r.check_failed = true;
    }
}

void stats_duke(const RunConfig& c, Report& r) {
    r.columns = {"disc", "h", "frequency", "liouville", "abs_error"};
    TestRegion box;
    box.y0 = 1;
    box.y1 = 2;
    if (!c.H.empty()) {
        auto hs = doubles(c.H, "--H");
        if (hs.size() != 2) throw UsageError("stats duke: --H takes the two heights y0,y1 of the box");
        box.y0 = hs[0];
        box.y1 = hs[1];
    }
    double lv = liouville_measure(box);
    std::vector<double> ds, es;
    for (const Int& d : discriminants(c)) {
        GeodesicSet G = make_geodesic_set(d);
        auto S = mu_d_sample(G, per_class(c, G), c.seed, layout_of(c));
        double f = region_frequency(S, box);
        r.add_row({dstr(d), G.table.h(), f, lv, std::fabs(f - lv)});
        ds.push_back(to_double(d));
        es.push_back(std::fabs(f - lv));
    }
    r.summary["region"] = box.str();
    if (ds.size() >= 2) r.summary["spearman"] = spearman(ds, es);
}

// ---- ternary ----

void ternary_count(const RunConfig& c, Report& r) {
    TernaryForm Q = ternary_form(c);
    auto q = binary_form(c.q);
    if (Q.positive_definite()) {
        r.columns = {"a1", "a2", "a3", "raw", "orbits", "group_order"};
        OrbitCount oc = orbit_count(q, Q);
        r.add_row({q[0], q[1], q[2], oc.raw, oc.orbits, oc.group_order});
    } else {
        if (c.box <= 0) throw UsageError("an indefinite form needs --box");
        r.columns = {"a1", "a2", "a3", "raw_in_box", "box"};
        EmbeddingCount ec = count_embeddings(q, Q, c.box);
        r.add_row({q[0], q[1], q[2], ec.raw, c.box});
        r.summary["complete"] = false;
    }
}

void ternary_sweep(const RunConfig& c, Report& r) {
    TernaryForm Q = ternary_form(c);
    r.columns = {"a1", "a2", "a3", "raw", "orbits", "f"};
    OrbitSweep sw = orbit_sweep(Q, c.max_coef);
    for (const auto& [q, oc] : sw.counts) r.add_row({q[0], q[1], q[2], oc.raw, oc.orbits, square_part_root(std::gcd(std::gcd(q[0], q[1]), q[2]))});
    r.summary["max_ratio"] = sw.max_ratio;
    r.summary["argmax"] = sw.argmax;
}

void ternary_local(const RunConfig& c, Report& r) {
    auto q = binary_form(c.q);
    r.columns = {"a", "b", "c", "p", "a_p", "b_p", "diagonal", "v_p_disc"};
    QuadForm f(Int(static_cast<long>(q[0])), Int(static_cast<long>(q[1])), Int(static_cast<long>(q[2])));
    auto L = local_invariants(f, Int(c.p));
    r.add_row({q[0], q[1], q[2], c.p, L.a, L.b, L.diagonal, valuation(f.disc(), Int(c.p))});
}

void ternary_pairs(const RunConfig& c, Report& r) {
    r.columns = {"disc", "ell", "box", "forms_in_box", "pairs_in_box", "orbits", "exhaust_bound", "complete"};
    if (c.box <= 0) throw UsageError("ternary pairs needs --box");
    for (const Int& d : discriminants(c)) {
        auto P = pair_orbit_count(d, c.ell, c.box);
        r.add_row({dstr(d), c.ell, c.box, P.forms_in_box, P.pairs_in_box, P.orbits, P.exhaust_bound, P.complete});
    }
}

// ---- dynamics ----

std::vector<SurfacePoint> dynamics_points(const RunConfig& c, const GeodesicSet& G) {
    if (c.source == "mu_d") {
        auto pts = surface_points(mu_d_sample(G, per_class(c, G), c.seed, layout_of(c)));
        pts.resize(std::min(pts.size(), c.samples));
        return pts;
    }
    if (c.source == "single") return single_orbit_points(G.orbits.front(), c.samples, c.seed);
    throw UsageError("--source must be mu_d or single");
}

std::vector<int> Ns_of(const RunConfig& c) {
    std::vector<int> out;
    for (auto v : ints(c.N, "--N")) out.push_back(static_cast<int>(v));
    if (out.empty()) throw UsageError("--N is empty");
    return out;
}

void dynamics_census(const RunConfig& c, Report& r) {
    r.columns = {"disc", "M", "N", "distinct", "bound"};
    json s = json::object();
    for (const Int& d : discriminants(c)) {
        GeodesicSet G = make_geodesic_set(d);
        auto pts = dynamics_points(c, G);
        for (double M : doubles(c.M, "--M")) {
            PatternCensus pc = pattern_census(pts, Ns_of(c), M);
            for (const auto& row : pc.rows) r.add_row({dstr(d), M, row.N, row.distinct, row.bound});
            s[dstr(d) + "/M=" + std::to_string(M)] = {{"trajectories", pc.checks.trajectories},
                                                       {"separation_violations", pc.checks.separation_violations},
                                                       {"height_step_violations", pc.checks.height_step_violations},
                                                       {"climb_violations", pc.checks.climb_violations},
                                                       {"C", pc.C},
                                                       {"rate", pc.rate}};
            if (pc.checks.separation_violations || pc.checks.height_step_violations || pc.checks.climb_violations) r.check_failed = true;
        }
    }
    r.summary = s;
}

void dynamics_cover(const RunConfig& c, Report& r) {
    r.columns = {"disc", "N", "eta", "height_cap", "samples", "balls", "log_balls_over_2N"};
    for (const Int& d : discriminants(c)) {
        GeodesicSet G = make_geodesic_set(d);
        auto pts = dynamics_points(c, G);
        double cap = c.height_cap > 0 ? c.height_cap : max_height_for_eta(c.eta);
        std::vector<SurfacePoint> kept;
        for (const auto& p : pts)
            if (p.height <= cap) kept.push_back(p);
        for (int N : Ns_of(c)) {
            auto bc = bowen_cover(kept, N, c.eta, cap);
            r.add_row({dstr(d), N, c.eta, cap, bc.samples, bc.balls, N > 0 ? std::log(static_cast<double>(bc.balls)) / (2.0 * N) : 0.0});
        }
    }
}

void dynamics_entropy(const RunConfig& c, Report& r) {
    r.columns = {"disc", "M", "cusp_mass", "bound", "entropy", "margin"};
    json s = json::object();
    for (const Int& d : discriminants(c)) {
        GeodesicSet G = make_geodesic_set(d);
        auto pts = dynamics_points(c, G);
        auto rep = entropy_report(pts, Ns_of(c), c.eta, doubles(c.M, "--M"), c.slack, c.height_cap);
        for (const auto& row : rep.rows) r.add_row({dstr(d), row.M, row.cusp_mass, row.bound, rep.entropy, row.margin});
        s[dstr(d)] = {{"Ns", rep.Ns}, {"covers", rep.cover}, {"ratio", rep.ratio}, {"slope", rep.slope}, {"capped_samples", rep.capped_samples},
                      {"height_cap", rep.height_cap}, {"inequality_holds", rep.inequality_holds()}};
        if (!rep.inequality_holds()) r.check_failed = true;
    }
    r.summary = s;
}

// ---- plots ----

std::string svg_header(double w, double h) {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return s.str();
}

std::string plot_domain(const RunConfig& c) {
    Int d = discriminants(c).front();
    GeodesicSet G = make_geodesic_set(d);
    auto S = mu_d_sample(G, per_class(c, G), c.seed, layout_of(c));
    const double W = 600, Hh = 600, ymax = 4;
    auto X = [&](double x) { return (x + 0.6) / 1.2 * W; };
    auto Y = [&](double y) { return Hh - (y - 0.8) / (ymax - 0.8) * Hh; };
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << svg_header(W, Hh);
    s << "<path d=\"M" << X(-0.5) << " " << Y(ymax) << " L" << X(-0.5) << " " << Y(std::sqrt(0.75));
    for (int i = 0; i <= 60; ++i) {
        double a = M_PI * (2.0 / 3 - static_cast<double>(i) / 60 / 3);
        s << " L" << X(std::cos(a)) << " " << Y(std::sin(a));
    }
    s << " L" << X(0.5) << " " << Y(ymax) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (const auto& p : S)
        if (p.p.y <= ymax) s << "<circle cx=\"" << X(p.p.x) << "\" cy=\"" << Y(p.p.y) << "\" r=\"1\" fill=\"steelblue\"/>\n";
    s << "</svg>\n";
    return s.str();
}

std::string plot_hyperboloid(const RunConfig& c) {
    Int d = discriminants(c).front();
    double R = doubles(c.R, "--R").back();
    auto pts = hyperboloid_points(d, CoefBox::max_norm(R));
    const double W = 600;
    auto P = [&](double v) { return (v + R) / (2 * R) * W; };
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << svg_header(W, W);
    for (const auto& p : pts) s << "<circle cx=\"" << P(p.x[0]) << "\" cy=\"" << W - P(p.x[2]) << "\" r=\"1.2\" fill=\"darkred\"/>\n";
    s << "</svg>\n";
    return s.str();
}

// ---- acceptance ----

void accept(const RunConfig& c, Report& r) {
    if (c.suite != "primary") throw UsageError("unknown suite " + c.suite + " (only primary exists)");
    AcceptOptions opt;
    opt.seed = c.seed;
    std::vector<int> ids;
    for (auto v : ints(c.criteria, "--criteria")) {
        if (v < 1 || v > kCriteria) throw UsageError("criterion numbers run from 1 to " + std::to_string(kCriteria));
        ids.push_back(static_cast<int>(v));
    }
    r.columns = {"criterion", "name", "pass", "detail", "seconds"};
    for (const auto& res : run_suite(opt, ids)) {
        std::cerr << format_line(res) << "\n";
        if (c.verbose)
            for (const auto& n : res.notes) std::cerr << "    " << n << "\n";
        r.add_row({res.id, res.name, res.pass, res.detail, res.seconds});
        if (!res.pass) r.check_failed = true;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geolab: closed geodesics of discriminant d on the modular surface"};
    app.set_config("--config", "", "plain key = value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig c;
    app.add_option("--disc", c.disc, "discriminants: comma list and/or lo..hi ranges")->multi_option_policy(CLI::MultiOptionPolicy::Join)->delimiter(',');
    app.add_flag("--fundamental-only", c.fundamental_only, "keep only fundamental discriminants");
    app.add_option("--samples", c.samples, "sample count (total over all classes)");
    app.add_option("--per-class", c.per_class, "samples per class (overrides --samples)");
    app.add_option("--seed", c.seed, "random seed");
    app.add_option("--out", c.out, "output path (default stdout)");
    app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--H", c.H, "height threshold(s), comma separated")->multi_option_policy(CLI::MultiOptionPolicy::Join)->delimiter(',');
    app.add_option("--layout", c.layout, "independent or stratified sampling of mu_d");
    app.add_option("--per-octave", c.per_octave, "delta grid points per factor 2");
    app.add_option("--R", c.R, "max-norm radii of the coefficient boxes")->multi_option_policy(CLI::MultiOptionPolicy::Join)->delimiter(',');
    app.add_option("--mc-samples", c.mc_samples, "Monte Carlo samples for cone measures");
    app.add_option("--q", c.q, "binary form a,b,c")->multi_option_policy(CLI::MultiOptionPolicy::Join)->delimiter(',');
    app.add_option("--gram", c.gram, "ternary Gram matrix, nine entries (default: sum of three squares)")->multi_option_policy(CLI::MultiOptionPolicy::Join)->delimiter(',');
    app.add_option("--Q", c.gram_file, "JSON file with the ternary Gram matrix");
    app.add_option("--box", c.box, "coefficient box radius");
    app.add_option("--max-coef", c.max_coef, "largest coefficient in ternary sweeps");
    app.add_option("--ell", c.ell, "pairing value <r, r'>");
    app.add_option("--p", c.p, "prime for local invariants");
    app.add_option("--N", c.N, "Bowen / pattern window half-lengths, comma separated")->multi_option_policy(CLI::MultiOptionPolicy::Join)->delimiter(',');
    app.add_option("--M", c.M, "excursion heights, comma separated")->multi_option_policy(CLI::MultiOptionPolicy::Join)->delimiter(',');
    app.add_option("--eta", c.eta, "Bowen ball radius");
    app.add_option("--height-cap", c.height_cap, "largest admitted sample height for covers (default from eta)");
    app.add_option("--slack", c.slack, "constant added to the entropy-cusp bound");
    app.add_option("--step", c.step, "flow-time step of height profiles");
    app.add_option("--source", c.source, "mu_d or single (first closed geodesic only)");
    app.add_option("--suite", c.suite, "acceptance suite");
    app.add_option("--criteria", c.criteria, "acceptance criteria to run, comma separated (default all)")->multi_option_policy(CLI::MultiOptionPolicy::Join)->delimiter(',');
    app.add_option("--threads", c.threads, "worker threads (overrides GEODESIC_LAB_THREADS)");
    app.add_flag("-v,--verbose", c.verbose, "extra diagnostics on stderr");

    std::map<std::string, std::function<void(const RunConfig&, Report&)>> table;
    std::map<std::string, std::function<std::string(const RunConfig&)>> plots;
    auto group = [&](const std::string& name, const std::string& help) {
        auto* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        g->fallthrough();
        return g;
    };
    auto leaf = [&](CLI::App* g, const std::string& name, const std::string& help, std::function<void(const RunConfig&, Report&)> fn) {
        g->add_subcommand(name, help)->fallthrough();
        table[g->get_name() + " " + name] = std::move(fn);
    };
    auto* forms = group("forms", "binary quadratic forms");
    leaf(forms, "enumerate", "GL2(Z) classes of primitive forms", forms_enumerate);
    auto* cg = group("classgroup", "ideal classes");
    leaf(cg, "table", "multiplication table of the class group", classgroup_table);
    auto* geo = group("geodesics", "closed geodesics");
    leaf(geo, "list", "one row per closed geodesic", geodesics_list);
    leaf(geo, "sample", "points of mu_d", geodesics_sample);
    auto* st = group("stats", "statistics of mu_d");
    leaf(st, "cuspmass", "mass above height H", stats_cuspmass);
    leaf(st, "components", "excursion components against ideal counts", stats_components);
    leaf(st, "paircorr", "near-pair counts split into cross and diagonal", stats_paircorr);
    leaf(st, "skubenko", "hyperboloid point counts against cone measures", stats_skubenko);
    leaf(st, "volume", "h Reg by two routes and the conductor ratio", stats_volume);
    leaf(st, "duke", "box frequency against the Liouville measure", stats_duke);
    auto* tr = group("ternary", "binary lattices in ternary ones");
    leaf(tr, "count", "embedding count and orbits", ternary_count);
    leaf(tr, "sweep", "orbit counts over a coefficient range", ternary_sweep);
    leaf(tr, "local", "local invariants of a binary form", ternary_local);
    leaf(tr, "pairs", "orbits of pairs of forms of one discriminant", ternary_pairs);
    auto* dy = group("dynamics", "time-one map, excursions and Bowen covers");
    leaf(dy, "census", "excursion pattern census", dynamics_census);
    leaf(dy, "cover", "greedy Bowen covers", dynamics_cover);
    leaf(dy, "entropy", "entropy estimate and the entropy-cusp inequality", dynamics_entropy);
    auto* pl = group("plot", "SVG plots");
    pl->add_subcommand("domain", "mu_d sample in the fundamental domain")->fallthrough();
    pl->add_subcommand("hyperboloid", "integer points on disc = d, scaled")->fallthrough();
    plots["plot domain"] = plot_domain;
    plots["plot hyperboloid"] = plot_hyperboloid;
    app.add_subcommand("accept", "acceptance suite")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    std::string command;
    for (CLI::App* s = app.get_subcommands().front();; s = s->get_subcommands().front()) {
        command += (command.empty() ? "" : " ") + s->get_name();
        if (s->get_subcommands().empty()) break;
    }
    c.command = command;
    if (c.threads) set_thread_count(c.threads);

    Report r;
    r.command = command;
    r.parameters = echo(c);
    try {
        if (auto it = plots.find(command); it != plots.end()) {
            cli::write_text(c.out, it->second(c));
            return kExitOk;
        }
        if (command == "accept") accept(c, r);
        else table.at(command)(c, r);
        cli::write_text(c.out, c.format == "csv" ? cli::to_csv_text(r) : cli::to_json_text(r));
    } catch (const UsageError& e) {
        std::cerr << "geolab " << command << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "geolab " << command << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "geolab " << command << ": " << e.what() << "\n";
        return kExitUsage;
    }
    return r.check_failed ? kExitCheck : kExitOk;
}
