#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace latgas {

/// Fenwick tree over integer site weights, used by the zero-range engine to
/// sample a site proportionally to its occupation number in O(log n).
class Fenwick {
public:
    Fenwick() = default;

    explicit Fenwick(std::span<const std::int64_t> values) { rebuild(values); }

    void rebuild(std::span<const std::int64_t> values) {
        n_ = values.size();
        tree_.assign(n_ + 1, 0);
        total_ = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            tree_[i + 1] += values[i];
            const std::size_t parent = (i + 1) + ((i + 1) & (0 - (i + 1)));
            if (parent <= n_) tree_[parent] += tree_[i + 1];
            total_ += values[i];
        }
        log_ = 0;
        while ((std::size_t{1} << (log_ + 1)) <= n_) ++log_;
    }

    void add(std::size_t i, std::int64_t delta) {
        total_ += delta;
        for (std::size_t j = i + 1; j <= n_; j += j & (0 - j)) tree_[j] += delta;
    }

    [[nodiscard]] std::int64_t total() const { return total_; }

    /// Smallest index i with prefix_sum(0..i) > r, for r in [0, total).
    [[nodiscard]] std::size_t find(std::int64_t r) const {
        std::size_t pos = 0;
        for (std::size_t step = std::size_t{1} << log_; step > 0; step >>= 1) {
            if (pos + step <= n_ && tree_[pos + step] <= r) {
                pos += step;
                r -= tree_[pos];
            }
        }
        return pos; // 0-based index
    }

private:
    std::vector<std::int64_t> tree_;
    std::size_t n_ = 0;
    std::size_t log_ = 0;
    std::int64_t total_ = 0;
};

} // namespace latgas
