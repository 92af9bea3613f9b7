#include <CLI11.hpp>

#include <iostream>

#include "geolab/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Acceptance suite: one PASS/FAIL line per criterion"};
    std::vector<int> ids;
    geolab::AcceptOptions opt;
    app.add_option("-c,--criterion", ids, "criterion numbers to run (default: all)")->check(CLI::Range(1, geolab::kCriteria));
    app.add_option("--seed", opt.seed, "base seed");
    app.add_flag("-v,--verbose", opt.verbose, "print the measurements behind each verdict");
    CLI11_PARSE(app, argc, argv);
    bool all = true;
    try {
        for (int id : ids.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11} : ids) {
            auto r = geolab::run_criterion(id, opt);
            std::cout << geolab::format_line(r) << std::endl;
            if (opt.verbose)
                for (const auto& n : r.notes) std::cout << "    " << n << "\n";
            all = all && r.pass;
        }
    } catch (const std::exception& e) {
        std::cerr << "acceptance: " << e.what() << "\n";
        return 1;
    }
    return all ? 0 : 2;
}
