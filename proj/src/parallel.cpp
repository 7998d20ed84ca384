#include "gpvw/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

namespace gpvw {

namespace {
std::atomic<int> g_threads{1};
}

int num_threads() { return g_threads.load(); }

void set_num_threads(int n) { g_threads.store(std::max(1, n)); }

int threads_from_env(int fallback) {
    const char* env = std::getenv("GPVW_THREADS");
    if (env == nullptr) return fallback;
    try {
        const int n = std::stoi(env);
        return n >= 1 ? n : fallback;
    } catch (...) {
        return fallback;
    }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(num_threads());
    if (workers <= 1 || n < 2) {
        body(0, n);
        return;
    }
    const std::size_t chunks = std::min(workers, n);
    const std::size_t step = (n + chunks - 1) / chunks;
    std::vector<std::thread> pool;
    pool.reserve(chunks - 1);
    for (std::size_t c = 1; c < chunks; ++c) {
        const std::size_t b = c * step;
        const std::size_t e = std::min(n, b + step);
        if (b < e) pool.emplace_back([&body, b, e] { body(b, e); });
    }
    body(0, std::min(n, step));
    for (auto& t : pool) t.join();
}

double row_reduce(std::size_t rows, const std::function<double(std::size_t)>& row_sum) {
    std::vector<double> partial(rows, 0.0);
    parallel_for(rows, [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) partial[j] = row_sum(j);
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

double row_max(std::size_t rows, const std::function<double(std::size_t)>& row_value) {
    std::vector<double> partial(rows, 0.0);
    parallel_for(rows, [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) partial[j] = row_value(j);
    });
    double m = 0.0;
    for (double v : partial) m = std::max(m, v);
    return m;
}

}  // namespace gpvw
