#ifndef FILIPPOV_PARALLEL_HPP
#define FILIPPOV_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace filippov
{

// Worker count used by the exhaustive loops; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

namespace detail
{

template <class Work>
void run_workers(std::size_t n, Work work)
{
    unsigned t = std::min<std::size_t>(thread_count(), n);
    if (t <= 1) {
        work();
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned i = 0; i < t; ++i)
        pool.emplace_back([&] {
            try {
                work();
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        });
    for (auto &th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace detail

// Calls f(i) for i in [0, n). Each index is visited exactly once; f must only
// write to per-index state.
template <class F>
void parallel_for(std::size_t n, F &&f)
{
    std::atomic<std::size_t> next{0};
    detail::run_workers(n, [&] {
        for (std::size_t i = next++; i < n; i = next++)
            f(i);
    });
}

// Smallest i in [0, n) with pred(i), independent of scheduling.
template <class F>
std::optional<std::size_t> parallel_find_first(std::size_t n, F &&pred)
{
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{n};
    detail::run_workers(n, [&] {
        for (std::size_t i = next++; i < n && i < best.load(); i = next++) {
            if (!pred(i))
                continue;
            std::size_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
        }
    });
    if (best.load() == n)
        return std::nullopt;
    return best.load();
}

} // namespace filippov

#endif
