#pragma once

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace adaptmap {

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index owns its
/// output slot, so results are identical for any worker count. The first
/// exception thrown by any worker is rethrown on the caller.
template <class Fn>
void parallel_for(long n, int workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    const int nw = static_cast<int>(std::min<long>(workers, n));
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int t = 0; t < nw; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (long i = t; i < n; i += nw) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace adaptmap
