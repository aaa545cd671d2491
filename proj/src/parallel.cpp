#include "qneuron/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "qneuron/errors.hpp"

namespace qneuron {

int default_threads(int fallback) {
    if (const char* env = std::getenv("QNEURON_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return fallback;
}

void parallel_for(long count, int threads, const std::function<void(long)>& body) {
    if (count <= 0) return;
    int workers = static_cast<int>(std::max<long>(1, std::min<long>(threads, count)));
    if (workers == 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (long i = w; i < count; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

sample_summary run_trials(long count, const sampling_options& opt,
                          const std::function<double(rng&, long)>& trial) {
    if (count <= 0) throw config_error("trial count must be positive");
    std::vector<double> values(static_cast<size_t>(count));
    const long block = 4096;
    const long blocks = (count + block - 1) / block;
    const std::uint64_t trial_seed = mix64(opt.seed ^ 0x747269616c73ULL);
    parallel_for(blocks, opt.threads, [&](long b) {
        long end = std::min(count, (b + 1) * block);
        for (long i = b * block; i < end; ++i) {
            rng r(trial_seed, static_cast<std::uint64_t>(i));
            values[static_cast<size_t>(i)] = trial(r, i);
        }
    });
    double sum = 0.0;
    for (double v : values) sum += v;
    double mean = sum / count;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    sample_summary s;
    s.mean = mean;
    s.count = count;
    s.stderr_mean = count > 1 ? std::sqrt(ss / (count - 1) / count) : 0.0;
    return s;
}

}  // namespace qneuron
