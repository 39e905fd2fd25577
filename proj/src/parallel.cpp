#include "autoconv/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace autoconv {
namespace {

std::atomic<unsigned> override_count{0};

unsigned default_count() {
  static const unsigned count = [] {
    if (const char* env = std::getenv("AUTOCONV_THREADS")) {
      try {
        const long n = std::stol(env);
        if (n > 0) return static_cast<unsigned>(n);
      } catch (...) {
      }
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }();
  return count;
}

}  // namespace

unsigned thread_count() {
  const unsigned n = override_count.load(std::memory_order_relaxed);
  return n != 0 ? n : default_count();
}

void set_thread_count(unsigned n) { override_count.store(n, std::memory_order_relaxed); }

}  // namespace autoconv
