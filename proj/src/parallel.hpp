#pragma once

// Deterministic fork-join over indexed chunks: workers pull indices from an
// atomic counter and write results into per-index slots owned by the caller,
// so the final reduction order never depends on scheduling.

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sascal {

inline void parallel_chunks(long long n, const std::function<void(long long)>& work,
                            int threads = 0) {
    if (n <= 0) return;
    long long hw = threads > 0 ? threads : (long long)std::thread::hardware_concurrency();
    if (hw <= 0) hw = 4;
    int nt = (int)std::min<long long>({hw, n, 32});
    if (nt <= 1) {
        for (long long i = 0; i < n; ++i) work(i);
        return;
    }

    std::atomic<long long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                long long i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    work(i);
                } catch (...) {
                    {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                    next.store(n);  // drain remaining indices
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sascal
