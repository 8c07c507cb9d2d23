#include "kernel_cache.hpp"

#include <algorithm>
#include <cmath>

namespace sigdt::detail {

KernelCache::KernelCache(const std::vector<std::vector<double>>& x, double gamma, std::size_t capacity_bytes)
    : x_(x),
      gamma_(gamma),
      capacity_rows_(std::max<std::size_t>(2, capacity_bytes / (sizeof(double) * std::max<std::size_t>(1, x.size())))),
      rows_(x.size()),
      where_(x.size()),
      present_(x.size(), 0) {}

std::span<const double> KernelCache::row(std::size_t i) {
    if (present_[i]) {
        ++hits_;
        lru_.splice(lru_.begin(), lru_, where_[i]);
        return rows_[i];
    }
    ++misses_;
    std::vector<double> buffer;
    if (lru_.size() >= capacity_rows_) {
        const auto victim = lru_.back();
        lru_.pop_back();
        present_[victim] = 0;
        buffer = std::move(rows_[victim]);
        rows_[victim] = {};
    }
    buffer.resize(x_.size());
    compute(i, buffer);
    rows_[i] = std::move(buffer);
    lru_.push_front(i);
    where_[i] = lru_.begin();
    present_[i] = 1;
    return rows_[i];
}

void KernelCache::compute(std::size_t i, std::vector<double>& out) const {
    const auto& a = x_[i];
    for (std::size_t j = 0; j < x_.size(); ++j) {
        const auto& b = x_[j];
        double d2 = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = a[k] - b[k];
            d2 += d * d;
        }
        out[j] = std::exp(-gamma_ * d2);
    }
}

}  // namespace sigdt::detail
