#include "kgraph/random.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace kgraph {

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t count) {
    count = std::min(count, n);
    std::vector<std::size_t> out;
    out.reserve(count);
    if (count * 4 >= n) {
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t i = 0; i < count; ++i)
            std::swap(pool[i], pool[i + index(n - i)]);
        out.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    } else {
        // Sparse Fisher-Yates for small samples from large ranges.
        std::unordered_map<std::size_t, std::size_t> moved;
        auto at = [&](std::size_t i) {
            auto it = moved.find(i);
            return it == moved.end() ? i : it->second;
        };
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + index(n - i);
            const std::size_t vi = at(i);
            const std::size_t vj = at(j);
            out.push_back(vj);
            moved[j] = vi;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace kgraph
