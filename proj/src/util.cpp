#include "seglab/util.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace seglab {

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("SEGLAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) hw = std::min<long>(hw, v);
    }
    return std::max(hw, 1);
}

void parallel_rows(int nrows, const std::function<void(int, int)>& fn) {
    int workers = std::min(worker_count(), std::max(nrows / 16, 1));
    if (workers <= 1) {
        fn(0, nrows);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    int chunk = (nrows + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int j0 = w * chunk, j1 = std::min(nrows, j0 + chunk);
        if (j0 >= j1) break;
        pool.emplace_back(fn, j0, j1);
    }
    for (auto& t : pool) t.join();
}

}  // namespace seglab
