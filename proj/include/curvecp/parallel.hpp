#pragma once
// Static-schedule parallel loop. Results are written by index, so output
// does not depend on the worker count.

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace curvecp {

inline int default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Calls f(i) for i in [0, n). Rethrows the exception of the lowest failing index.
template <class F>
void parallel_for(int n, int jobs, F&& f) {
    jobs = std::max(1, std::min(jobs, n));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(n, 0)));
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) {
            try {
                f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                for (int i; (i = next.fetch_add(1)) < n;) {
                    try {
                        f(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace curvecp
