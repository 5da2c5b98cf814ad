#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace icrm {

/// Calls body(first, last, chunk_index) for consecutive chunks of [0, count).
/// Chunk boundaries depend only on `count` and `chunk_size`, so results that
/// are stored per chunk and merged in chunk order do not depend on `workers`.
template <class Body>
void parallel_chunks(std::uint64_t count, std::uint64_t chunk_size, unsigned workers, Body&& body) {
    if (count == 0) return;
    chunk_size = std::max<std::uint64_t>(1, chunk_size);
    const std::uint64_t chunks = (count + chunk_size - 1) / chunk_size;
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                const std::uint64_t first = c * chunk_size;
                body(first, std::min(count, first + chunk_size), c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
            }
        }
    };

    const unsigned threads =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), chunks));
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace icrm
