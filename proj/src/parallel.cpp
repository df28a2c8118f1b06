#include "doblab/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace doblab {

int sweep_threads() {
    int n = omp_get_max_threads();
    if (const char* cap = std::getenv("DOB_LAB_THREADS")) {
        try {
            const int v = std::stoi(cap);
            if (v > 0) n = std::min(n, v);
        } catch (...) {
            // unparsable cap: ignored
        }
    }
    return std::max(n, 1);
}

}  // namespace doblab
