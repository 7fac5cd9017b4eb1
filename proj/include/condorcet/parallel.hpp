#pragma once

#include "condorcet/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace condorcet {

/// Splits [0, count) into contiguous chunks, one per worker, and sums the
/// integer results of fn(begin, end). The sum does not depend on the split.
template <class Fn>
std::uint64_t parallel_sum(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1) return fn(std::size_t{0}, count);

    std::vector<std::uint64_t> partial(workers, 0);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = count * w / workers;
        const std::size_t end = count * (w + 1) / workers;
        threads.emplace_back([&, w, begin, end] {
            try {
                partial[w] = fn(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::uint64_t total = 0;
    for (auto p : partial) total += p;
    return total;
}

/// Runs fn(i) for every i in [0, count) across workers; fn must only write
/// to slot i of its own output.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    parallel_sum(count, [&](std::size_t begin, std::size_t end) -> std::uint64_t {
        for (std::size_t i = begin; i < end; ++i) fn(i);
        return 0;
    });
}

}  // namespace condorcet
