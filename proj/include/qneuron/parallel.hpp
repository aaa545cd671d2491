#pragma once

#include <cstdint>
#include <functional>

#include "qneuron/densities.hpp"

namespace qneuron {

struct sampling_options {
    std::uint64_t seed = 1;
    int threads = 1;
};

struct sample_summary {
    double mean = 0.0;
    double stderr_mean = 0.0;
    long count = 0;
};

// Thread count from QNEURON_THREADS when set, otherwise the fallback.
int default_threads(int fallback = 1);

// Runs trial(r, i) for i in [0, count), each with its own stream rng(seed, i),
// and reduces the results in index order.
sample_summary run_trials(long count, const sampling_options& opt,
                          const std::function<double(rng&, long)>& trial);

// Applies body(i) for i in [0, count) across worker threads.
void parallel_for(long count, int threads, const std::function<void(long)>& body);

}  // namespace qneuron
