#include "mchit/parallel.hpp"

namespace mchit {
namespace {
std::atomic<unsigned> g_default_workers{0};
}

void set_default_workers(unsigned workers) { g_default_workers.store(workers); }

unsigned resolve_workers(unsigned requested) {
  unsigned w = requested != 0 ? requested : g_default_workers.load();
  if (w == 0) w = std::thread::hardware_concurrency();
  return w == 0 ? 1 : w;
}

}  // namespace mchit
