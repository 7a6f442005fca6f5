#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace radv {

/// Evaluates f(0), ..., f(n-1) on a small thread pool and returns the results
/// in index order. If any call throws, the exception from the lowest index is
/// rethrown after all workers finish.
template <class F>
auto parallel_map(std::size_t n, F&& f, std::size_t workers = 0) {
    using R = std::decay_t<std::invoke_result_t<F&, std::size_t>>;
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(n, 1));

    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

} // namespace radv
