#ifndef APX_PARALLEL_HPP
#define APX_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace apx {

/// Worker count used by parallel_map. Defaults to APX_THREADS, else 1.
int thread_count() noexcept;
void set_thread_count(int n) noexcept;

namespace detail {
/// True on parallel_map worker threads; nested maps then run inline.
bool& in_worker() noexcept;
} // namespace detail

/*
 * Evaluates fn(i) for i in [0, n) on up to thread_count() threads and returns the
 * results in index order. Callers reduce the returned vector sequentially, so the
 * outcome never depends on the thread count. The first exception (lowest index)
 * is rethrown after all workers finish.
 */
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
    using R = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<R> out(n);
    const auto workers = static_cast<std::size_t>(thread_count());
    if (workers <= 1 || n <= 1 || detail::in_worker()) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = fn(i);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::size_t error_index = n;
    auto work = [&] {
        detail::in_worker() = true;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t spawn = std::min(workers, n);
    pool.reserve(spawn);
    for (std::size_t t = 0; t < spawn; ++t)
        pool.emplace_back(work);
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}

} // namespace apx

#endif
