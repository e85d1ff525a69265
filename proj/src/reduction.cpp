#include "magicfwht/reduction.hpp"

#include "magicfwht/errors.hpp"

#include <exception>
#include <string>
#include <thread>

#include <unistd.h>

namespace mfwht {

namespace {

double pairwise_sum_range(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_range(v, half) + pairwise_sum_range(v + half, n - half);
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_range(values.data(), values.size());
}

int resolve_workers(int requested) {
    if (requested < 0)
        throw InvalidInputError("workers must be >= 0 (0 selects the detected core count), got " +
                                std::to_string(requested));
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for_chunks(std::uint64_t begin, std::uint64_t end, int workers,
                         const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
    if (end <= begin) return;
    const std::uint64_t total = end - begin;
    auto w = static_cast<std::uint64_t>(workers < 1 ? 1 : workers);
    if (w > total) w = total;

    // chunk i covers [begin + i*total/w, begin + (i+1)*total/w)
    auto chunk_lo = [&](std::uint64_t i) { return begin + total * i / w; };

    if (w == 1) {
        fn(0, begin, end);
        return;
    }

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(w);
    pool.reserve(w - 1);
    for (std::uint64_t i = 1; i < w; ++i) {
        pool.emplace_back([&, i] {
            try {
                fn(static_cast<int>(i), chunk_lo(i), chunk_lo(i + 1));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    try {
        fn(0, chunk_lo(0), chunk_lo(1));
    } catch (...) {
        errors[0] = std::current_exception();
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::uint64_t detected_memory_bytes() {
    const long pages = sysconf(_SC_PHYS_PAGES);
    const long page_size = sysconf(_SC_PAGE_SIZE);
    if (pages <= 0 || page_size <= 0) return 0;
    return static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page_size);
}

} // namespace mfwht
