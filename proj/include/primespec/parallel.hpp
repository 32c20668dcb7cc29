#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace primespec {

// Runs fn(task_index) for task_index in [0, n_tasks) on up to n_threads
// workers. Work is handed out by atomic counter; callers that need
// deterministic output must write results into per-task slots (the task
// decomposition, not the thread schedule, defines the result).
inline void parallel_for_tasks(std::size_t n_tasks, unsigned n_threads,
                               const std::function<void(std::size_t)>& fn) {
    if (n_tasks == 0) return;
    if (n_threads <= 1 || n_tasks == 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    n_threads = static_cast<unsigned>(
        std::min<std::size_t>(n_threads, n_tasks));
    std::mutex mu;
    std::size_t next = 0;
    std::exception_ptr first_error;
    auto worker = [&]() {
        for (;;) {
            std::size_t idx;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= n_tasks || first_error) return;
                idx = next++;
            }
            try {
                fn(idx);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace primespec
