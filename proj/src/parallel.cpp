#include "spectrakit/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace spectrakit {

namespace {

int g_override = 0;

int env_threads() {
    int n = omp_get_max_threads();
    if (const char* s = std::getenv("SPECTRAKIT_THREADS")) {
        try {
            int cap = std::stoi(s);
            if (cap > 0 && cap < n) n = cap;
        } catch (...) {
        }
    }
    return n < 1 ? 1 : n;
}

}  // namespace

int thread_count() { return g_override > 0 ? g_override : env_threads(); }

void set_thread_count(int n) { g_override = n > 0 ? n : 0; }

}  // namespace spectrakit
