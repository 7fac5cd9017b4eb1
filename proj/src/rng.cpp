#include "condorcet/rng.hpp"

#include "condorcet/detail/parse.hpp"

#include <cstdlib>
#include <thread>

namespace condorcet {

unsigned worker_count() {
    if (const char* env = std::getenv("CONDORCET_WORKERS")) {
        if (auto v = detail::parse_uint(env); v && *v > 0 && *v <= 1024)
            return static_cast<unsigned>(*v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace condorcet
