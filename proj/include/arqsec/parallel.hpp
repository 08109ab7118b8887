#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace arqsec {

/// Splits [0, count) into contiguous chunks, one per worker, and runs
/// body(index, acc) with a private accumulator per chunk. Callers reduce the
/// returned accumulators; results are independent of the worker count as
/// long as the reduction is exact (integer counts).
template <typename Acc, typename Body>
std::vector<Acc> parallel_map_reduce(std::uint64_t count, unsigned workers, Body body)
{
    if (workers == 0) {
        workers = std::max(1U, std::thread::hardware_concurrency());
    }
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
    std::vector<Acc> accs(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto run_chunk = [&](unsigned w) {
        const std::uint64_t begin = count * w / workers;
        const std::uint64_t end = count * (w + 1) / workers;
        try {
            for (std::uint64_t i = begin; i < end; ++i) {
                body(i, accs[w]);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run_chunk(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            threads.emplace_back(run_chunk, w);
        }
        for (auto& t : threads) {
            t.join();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return accs;
}

}  // namespace arqsec
