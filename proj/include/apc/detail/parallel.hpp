#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace apc::detail {

/// Runs fn(i) for i in [0, count) on a small pool. Chunk boundaries are fixed
/// by the caller's data, never by the worker count, so any reduction the
/// caller performs over per-chunk slots in index order is deterministic.
template <class Fn>
void run_chunks(std::uint64_t count, Fn&& fn) {
    if (count == 0) return;
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers > 8) workers = 8;
    if (static_cast<std::uint64_t>(workers) > count) workers = static_cast<unsigned>(count);
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto body = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace apc::detail
