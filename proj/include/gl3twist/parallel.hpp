#pragma once

/**
 * @file parallel.hpp
 * @brief Fixed-size worker pool for independent grid points. Results are
 *        stored by index, so the output order never depends on scheduling.
 */

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace gl3twist {

/// Worker count from GL3TWIST_WORKERS when set and positive, else the fallback.
unsigned workers_from_env(unsigned fallback = 1);

/// fn(0), ..., fn(n-1) on up to `workers` threads. The first exception in
/// index order is rethrown after all workers have joined.
template <class F>
auto parallel_map(std::size_t n, unsigned workers, F&& fn) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    if (count == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(count);
        for (unsigned w = 0; w < count; ++w) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace gl3twist
