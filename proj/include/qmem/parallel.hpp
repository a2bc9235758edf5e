#pragma once

// Sample-parallel fan-out. Workers pull sample indices from a shared counter;
// per-sample RNG streams come from (master seed, index), so results do not
// depend on the thread a sample lands on and aggregation can stay ordered.

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qmem {

template <class Fn>
inline void parallel_samples(uint64_t n, int threads, Fn&& fn) {
    if (threads <= 1) {
        for (uint64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<uint64_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
        for (;;) {
            uint64_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// Variant with a per-worker context built once per thread (scratch buffers,
// decoders): fn(ctx, sample_index).
template <class MakeCtx, class Fn>
inline void parallel_samples_ctx(uint64_t n, int threads, MakeCtx&& make_ctx, Fn&& fn) {
    if (threads <= 1) {
        auto ctx = make_ctx();
        for (uint64_t i = 0; i < n; ++i) fn(ctx, i);
        return;
    }
    std::atomic<uint64_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
        auto ctx = make_ctx();
        for (;;) {
            uint64_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(ctx, i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

inline int default_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : int(hc);
}

}  // namespace qmem
