#include "fractime/parallel.hpp"

#include <cstdlib>
#include <string>

namespace fractime {

unsigned effective_workers(unsigned requested) {
  unsigned w = requested == 0 ? 1u : requested;
  if (const char* cap = std::getenv("FRACTIME_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && v >= 1 && static_cast<unsigned long>(v) < w) w = static_cast<unsigned>(v);
  }
  return w;
}

}  // namespace fractime
