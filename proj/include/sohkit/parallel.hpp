#pragma once

#include <cstdint>
#include <exception>
#include <functional>

namespace sohkit::par {

// Execution mode for the data-parallel kernels. The serial path is the
// reference: every kernel must produce byte-identical results in both modes
// and for any thread count, which is why parallel loops only ever write to
// per-index slots and all reductions happen serially afterwards.
enum class Mode { serial, openmp };

Mode mode();
void set_mode(Mode m);
bool openmp_available();
int max_threads();

namespace detail {
void run_indexed(std::int64_t n, const std::function<void(std::int64_t)>& fn);
}

// fn(i) for i in [0, n). fn must only touch state owned by index i.
template <class F>
void for_each_index(std::int64_t n, F&& fn) {
  detail::run_indexed(n, std::function<void(std::int64_t)>(std::forward<F>(fn)));
}

}  // namespace sohkit::par
