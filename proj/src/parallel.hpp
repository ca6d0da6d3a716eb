#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

#include "gsparse/types.hpp"

namespace gsparse::detail {

inline constexpr std::size_t kReductionBlock = 1024;

inline unsigned worker_count(const ExecPolicy& policy) {
    unsigned n = policy.threads;
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

/// Splits [0, n) into blocks. In deterministic mode the block size is fixed,
/// so the partition (and any reduction over it) does not depend on the
/// worker count.
inline std::size_t block_count(std::size_t n, const ExecPolicy& policy) {
    if (n == 0) return 0;
    if (policy.deterministic) return (n + kReductionBlock - 1) / kReductionBlock;
    return std::min<std::size_t>(n, worker_count(policy));
}

/// Calls body(block, begin, end) for every block, spreading blocks over workers.
template <class Body>
void for_each_block(std::size_t n, const ExecPolicy& policy, Body&& body) {
    const std::size_t blocks = block_count(n, policy);
    if (blocks == 0) return;
    const std::size_t per = (n + blocks - 1) / blocks;
    auto run = [&](std::size_t b) {
        const std::size_t begin = b * per;
        const std::size_t end = std::min(n, begin + per);
        if (begin < end) body(b, begin, end);
    };
    const unsigned workers = std::min<std::size_t>(worker_count(policy), blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) run(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    auto drain = [&] {
        for (std::size_t b = next++; b < blocks; b = next++) run(b);
    };
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(drain);
    drain();
    for (auto& t : pool) t.join();
}

template <class Body>
void parallel_for(std::size_t n, const ExecPolicy& policy, Body&& body) {
    for_each_block(n, policy, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) body(i);
    });
}

/// Sum of partial(begin, end) over blocks, reduced in block order.
template <class Partial>
double parallel_sum(std::size_t n, const ExecPolicy& policy, Partial&& partial) {
    std::vector<double> sums(block_count(n, policy), 0.0);
    for_each_block(n, policy, [&](std::size_t b, std::size_t begin, std::size_t end) {
        sums[b] = partial(begin, end);
    });
    double total = 0.0;
    for (double s : sums) total += s;
    return total;
}

}  // namespace gsparse::detail
