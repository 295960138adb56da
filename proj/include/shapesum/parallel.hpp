#pragma once

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace shapesum {

// Worker count: SHAPESUM_THREADS if set to a positive integer, otherwise the
// hardware concurrency. The value only controls how work is partitioned;
// results are identical for every setting.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("SHAPESUM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) {
            return static_cast<unsigned>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs f(i) for i in [0, n) across the thread budget in contiguous blocks.
// Each worker writes only to indices it owns, so callers get deterministic
// output by storing per-index results and reducing sequentially afterwards.
// If several workers throw, the exception with the lowest index wins.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
    if (n == 0) return;

    const std::size_t workers =
        std::min<std::size_t>(thread_budget(), n);

    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }

    struct Failure {
        std::size_t index;
        std::exception_ptr what;
    };
    std::vector<Failure> failures(workers);
    for (auto& fl : failures) fl.what = nullptr;

    std::vector<std::thread> pool;
    pool.reserve(workers);

    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, w, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) {
                try {
                    f(i);
                } catch (...) {
                    failures[w] = {i, std::current_exception()};
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();

    const Failure* first = nullptr;
    for (const auto& fl : failures) {
        if (fl.what && (!first || fl.index < first->index)) {
            first = &fl;
        }
    }
    if (first) std::rethrow_exception(first->what);
}

}  // namespace shapesum
