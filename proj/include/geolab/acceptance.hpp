// The acceptance suite: eleven end-to-end checks over all modules, each reporting a
// pass/fail verdict together with the measured quantities behind it.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "geolab/ternary.hpp"

namespace geolab {

struct AcceptOptions {
    std::uint64_t seed = 20240601;
    std::size_t paircorr_samples = 100000;
    std::size_t trajectories = 10000;
    std::size_t entropy_samples = 100000;
    std::size_t duke_samples = 200000;
    std::size_t random_instances = 1000;
    bool verbose = false;  // extra measurement lines after the verdict
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;                // one-line summary of the measured quantities
    std::vector<std::string> notes;    // further measurements, printed in verbose mode
    std::map<std::string, double> values;
    double seconds = 0;
};

constexpr int kCriteria = 11;
CriterionResult run_criterion(int id, const AcceptOptions& opt);
std::vector<CriterionResult> run_suite(const AcceptOptions& opt, const std::vector<int>& ids = {});
std::string format_line(const CriterionResult& r);

// Brute-force reference for orbit counts under the signed permutations of determinant 1:
// vectors from a coordinate box, pairs from a double loop, orbits by marking.
struct NaiveOrbitEntry {
    std::uint64_t raw = 0, orbits = 0;
};
std::map<std::array<std::int64_t, 3>, NaiveOrbitEntry> naive_three_squares_orbits(std::int64_t max_coef);
std::vector<M3> signed_permutations_det1();

// Fixed d sequence used by the equidistribution and volume checks.
std::vector<Int> duke_sequence();

}  // namespace geolab
