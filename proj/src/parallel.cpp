#include "film/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

namespace film {

namespace {
std::atomic<unsigned> g_limit{0};

unsigned env_limit()
{
  const char* s = std::getenv("FILM_BOUNDS_THREADS");
  if (!s || !*s)
    return 0;
  try {
    const long v = std::stol(s);
    return v > 0 ? static_cast<unsigned>(v) : 0;
  } catch (...) {
    return 0;
  }
}
}  // namespace

unsigned worker_count()
{
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const unsigned e = env_limit())
    n = std::min(n, e);
  if (const unsigned l = g_limit.load())
    n = std::min(n, l);
  return n;
}

void set_worker_limit(unsigned n) { g_limit.store(n); }

}  // namespace film
