#pragma once

#include <mutex>

namespace tomo::detail {

// FFTW plan creation/destruction is not thread safe; every translation unit
// that plans must hold this one lock.
inline std::mutex& fftw_planning_mutex() {
    static std::mutex m;
    return m;
}

} // namespace tomo::detail
