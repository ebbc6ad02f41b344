#include "gl3twist/parallel.hpp"

#include <cstdlib>
#include <string>

namespace gl3twist {

unsigned workers_from_env(unsigned fallback) {
    const char* raw = std::getenv("GL3TWIST_WORKERS");
    if (!raw || !*raw) return fallback;
    try {
        const long v = std::stol(raw);
        return v > 0 ? static_cast<unsigned>(v) : fallback;
    } catch (const std::exception&) {
        return fallback;
    }
}

}  // namespace gl3twist
