#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace monge2 {

/// Worker count: hardware concurrency, capped by MONGE2_THREADS when set.
std::size_t worker_count();

/// Runs body(chunk_index, begin, end) for fixed-size chunks of [0, n).
/// Chunk boundaries depend only on n and chunk_size, never on the worker count.
void for_each_chunk(std::size_t n, std::size_t chunk_size,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Deterministic map-reduce: per-chunk partials are combined in chunk order.
template <class T, class Map, class Combine>
T chunked_reduce(std::size_t n, std::size_t chunk_size, T init, Map map, Combine combine) {
    if (n == 0) return init;
    const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
    std::vector<T> partial(chunks, init);
    for_each_chunk(n, chunk_size, [&](std::size_t c, std::size_t b, std::size_t e) { partial[c] = map(b, e); });
    T acc = std::move(init);
    for (auto& p : partial) acc = combine(std::move(acc), std::move(p));
    return acc;
}

} // namespace monge2
