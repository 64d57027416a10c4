#include "mr_isolator/parallel.hpp"

#include <cstdlib>
#include <string>

#include "mr_isolator/errors.hpp"

namespace mr_isolator {

std::size_t WorkerCount() {
  if (const char* env = std::getenv("MR_ISOLATOR_THREADS")) {
    const std::string value(env);
    std::size_t pos = 0;
    long long n = 0;
    try {
      n = std::stoll(value, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != value.size() || value.empty() || n < 1) {
      throw ConfigError("MR_ISOLATOR_THREADS: must be a positive integer, got '" + value + "'");
    }
    return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace mr_isolator
