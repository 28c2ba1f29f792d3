#include "gsq/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace gsq {

void parallel_chunks(std::uint64_t n, unsigned workers,
                     const std::function<void(unsigned, std::uint64_t, std::uint64_t)>& fn) {
  if (n == 0) return;
  workers = std::max(1u, std::min<unsigned>(workers, unsigned(std::min<std::uint64_t>(n, 256))));
  if (workers == 1) {
    fn(0, 0, n);
    return;
  }
  const std::uint64_t base = n / workers;
  const std::uint64_t rem = n % workers;
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  std::uint64_t begin = 0;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t len = base + (w < rem ? 1 : 0);
    std::uint64_t end = begin + len;
    if (w + 1 == workers) {
      try {
        fn(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    } else {
      threads.emplace_back([&, w, begin, end] {
        try {
          fn(w, begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    begin = end;
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace gsq
