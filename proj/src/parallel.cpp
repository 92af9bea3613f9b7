#include "geolab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace geolab {

namespace {
std::atomic<std::size_t> g_override{0};
}

std::size_t thread_count() {
    if (std::size_t o = g_override.load()) return o;
    if (const char* env = std::getenv("GEODESIC_LAB_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

void set_thread_count(std::size_t n) { g_override.store(n); }

}  // namespace geolab
