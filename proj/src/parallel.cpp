#include "arps/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace arps {

unsigned resolve_workers(unsigned requested) {
    unsigned workers = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ARPS_SDE_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) workers = std::min<unsigned>(workers, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
            // unparsable cap: ignored
        }
    }
    return workers;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::size_t>(n, 1024))));
    if (workers == 1) {
        body(0, n);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace arps
