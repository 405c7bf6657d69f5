#pragma once

#include <functional>

namespace seglab {

// Worker cap: min(hardware threads, SEGLAB_THREADS when set). Never below 1.
int worker_count();

// Runs fn(j0, j1) over contiguous row bands covering [0, nrows). Bands are
// only a partition of the index space, so results must not depend on the
// banding; reductions stay serial elsewhere to keep runs bit-identical.
void parallel_rows(int nrows, const std::function<void(int, int)>& fn);

}  // namespace seglab
