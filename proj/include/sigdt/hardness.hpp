#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sigdt/dichotomy.hpp"

namespace sigdt {

struct Neighbor {
    std::size_t index = 0;    // position in the training collection
    double distance = 0.0;    // Euclidean
};

/// The k nearest points to `query`, sorted by (distance, index). Ties at
/// equal distance go to the lower index. Throws DataError if fewer than k
/// points are available.
std::vector<Neighbor> nearest_neighbors(std::span<const double> query,
                                        std::span<const std::vector<double>> points, std::size_t k);

/// kDN instance hardness: the fraction of the k nearest training
/// neighbours whose label disagrees with the query's label. Stored as an
/// exact count out of k.
struct HardnessScore {
    std::size_t disagreeing = 0;
    std::size_t k = 0;

    double value() const { return k == 0 ? 0.0 : static_cast<double>(disagreeing) / static_cast<double>(k); }

    friend bool operator==(const HardnessScore&, const HardnessScore&) = default;
};

/// `query_label` and `training.y` use +1 (positive) / -1 (negative).
HardnessScore kdn(std::span<const double> query, int query_label, const LabeledVectors& training, std::size_t k);

enum class ForgeryQuality { bad, good };

/// Bad when the hardness is at most one half, good otherwise. Compared
/// exactly on the integer count.
ForgeryQuality classify_forgery_quality(const HardnessScore& score);

}  // namespace sigdt
