#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace uncpdf::detail
{
inline int execution_threads(int n_workers)
{
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0)
        hw = 1;
    return std::max(1, std::min(n_workers, static_cast<int>(hw)));
}

//! Run fn(worker) for every worker index, spread over a few threads
template<class F>
void run_workers(int n_workers, F&& fn)
{
    int const n_threads = execution_threads(n_workers);
    if (n_threads == 1)
    {
        for (int w = 0; w < n_workers; ++w)
            fn(w);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
    {
        pool.emplace_back([&, t] {
            for (int w = t; w < n_workers; w += n_threads)
                fn(w);
        });
    }
    for (auto& th : pool)
        th.join();
}

}  // namespace uncpdf::detail
