#pragma once

#include <cstddef>
#include <list>
#include <span>
#include <vector>

namespace sigdt::detail {

/// LRU cache of RBF kernel rows K(i, .) over a fixed sample set.
class KernelCache {
public:
    KernelCache(const std::vector<std::vector<double>>& x, double gamma, std::size_t capacity_bytes);

    /// Row i. The span stays valid until two further rows are requested.
    std::span<const double> row(std::size_t i);

    std::size_t hits() const noexcept { return hits_; }
    std::size_t misses() const noexcept { return misses_; }

private:
    void compute(std::size_t i, std::vector<double>& out) const;

    const std::vector<std::vector<double>>& x_;
    double gamma_;
    std::size_t capacity_rows_;
    std::vector<std::vector<double>> rows_;
    std::list<std::size_t> lru_;  // front = most recent
    std::vector<std::list<std::size_t>::iterator> where_;
    std::vector<char> present_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

}  // namespace sigdt::detail
