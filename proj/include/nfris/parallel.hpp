// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS channel modelling and beamforming simulations

#ifndef NFRIS_PARALLEL_HPP
#define NFRIS_PARALLEL_HPP

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace nfris
{
    // Worker cap: NFRIS_THREADS env var, else hardware concurrency.
    inline unsigned worker_count()
    {
        if (const char *env = std::getenv("NFRIS_THREADS"))
        {
            long n = std::atol(env);
            if (n >= 1)
                return static_cast<unsigned>(n);
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw ? hw : 1;
    }

    // Static-partition parallel loop; results are index-addressed so the
    // schedule does not affect outputs.
    template <typename Fn>
    void parallel_for(size_t n, Fn &&fn)
    {
        unsigned workers = worker_count();
        if (workers <= 1 || n < 2)
        {
            for (size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }
        if (workers > n)
            workers = static_cast<unsigned>(n);
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            threads.emplace_back([&, w] {
                for (size_t i = w; i < n; i += workers)
                    fn(i);
            });
        for (auto &t : threads)
            t.join();
    }
}

#endif
