// Neighbour search among group elements: a uniform grid on the four matrix entries,
// together with the test deciding which Gamma-translates of a point need to be stored.
#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "geolab/arith.hpp"

namespace geolab {

// Can a point of the half-plane, given by M.i, lie within hyperbolic distance r of the part
// of the fundamental domain below height y_cap?
inline bool near_domain(const Mat2d& M, double y_cap, double r) {
    double w2 = M.c * M.c + M.d * M.d;
    double x = (M.b * M.d + M.a * M.c) / w2, y = 1.0 / w2;
    if (y > y_cap * std::exp(r) || y < 0.8660254037844386 * std::exp(-r)) return false;
    if (std::fabs(x) > 0.5 + y_cap * std::sinh(r) * std::exp(r)) return false;
    double z2 = x * x + y * y;
    if (z2 < 1 && (1 - z2) / (2 * y) > std::sinh(r)) return false;
    return true;
}

struct CellKey {
    std::int64_t k[4];
    bool operator==(const CellKey& o) const { return k[0] == o.k[0] && k[1] == o.k[1] && k[2] == o.k[2] && k[3] == o.k[3]; }
};
struct CellHash {
    std::size_t operator()(const CellKey& c) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto v : c.k) {
            h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

// Cell width W must satisfy W >= ||g||_F (e^rho - 1) for the largest centre g and search
// radius rho; then every h with ||log(g^-1 h)||_F <= rho lies in the 3^4 cells around g.
class MatrixGrid {
public:
    explicit MatrixGrid(double width) : W_(width) {}
    double width() const { return W_; }
    CellKey cell(const Mat2d& M) const {
        return CellKey{{static_cast<std::int64_t>(std::floor(M.a / W_)), static_cast<std::int64_t>(std::floor(M.b / W_)),
                        static_cast<std::int64_t>(std::floor(M.c / W_)), static_cast<std::int64_t>(std::floor(M.d / W_))}};
    }
    void insert(const Mat2d& M, std::uint32_t id) { cells_[cell(M)].push_back(id); }
    template <class Visit>
    void for_neighbours(const Mat2d& M, Visit&& visit) const {
        CellKey base = cell(M);
        for (int i0 = -1; i0 <= 1; ++i0)
            for (int i1 = -1; i1 <= 1; ++i1)
                for (int i2 = -1; i2 <= 1; ++i2)
                    for (int i3 = -1; i3 <= 1; ++i3) {
                        auto it = cells_.find(CellKey{{base.k[0] + i0, base.k[1] + i1, base.k[2] + i2, base.k[3] + i3}});
                        if (it == cells_.end()) continue;
                        for (std::uint32_t id : it->second) visit(id);
                    }
    }
    void reserve(std::size_t n) { cells_.reserve(n); }

private:
    double W_;
    std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
};

inline double frobenius(const Mat2d& g) { return std::sqrt(g.a * g.a + g.b * g.b + g.c * g.c + g.d * g.d); }

}  // namespace geolab
