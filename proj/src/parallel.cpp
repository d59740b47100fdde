#include "apx/parallel.hpp"

#include <cstdlib>
#include <string>

namespace apx {

namespace {

int initial_thread_count() noexcept {
    if (const char* env = std::getenv("APX_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0)
                return n;
        } catch (...) {
        }
    }
    return 1;
}

std::atomic<int> g_threads{initial_thread_count()};

} // namespace

int thread_count() noexcept { return g_threads.load(); }

void set_thread_count(int n) noexcept { g_threads.store(n > 0 ? n : 1); }

bool& detail::in_worker() noexcept {
    thread_local bool flag = false;
    return flag;
}

} // namespace apx
