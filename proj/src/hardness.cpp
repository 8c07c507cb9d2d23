#include "sigdt/hardness.hpp"

#include <algorithm>
#include <cmath>

#include "sigdt/error.hpp"

namespace sigdt {

std::vector<Neighbor> nearest_neighbors(std::span<const double> query,
                                        std::span<const std::vector<double>> points, std::size_t k) {
    if (k == 0) throw ConfigError("neighbour count k must be positive");
    if (points.size() < k) {
        throw DataError("training collection has " + std::to_string(points.size()) + " samples, k=" +
                        std::to_string(k));
    }
    struct Entry {
        double d2;
        std::size_t index;
    };
    std::vector<Entry> all;
    all.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (p.size() != query.size()) throw DimensionError("neighbour search: length mismatch");
        double d2 = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double d = p[j] - query[j];
            d2 += d * d;
        }
        all.push_back({d2, i});
    }
    auto before = [](const Entry& a, const Entry& b) { return a.d2 < b.d2 || (a.d2 == b.d2 && a.index < b.index); };
    std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k - 1), all.end(), before);
    std::sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), before);

    std::vector<Neighbor> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = {all[i].index, std::sqrt(all[i].d2)};
    return out;
}

HardnessScore kdn(std::span<const double> query, int query_label, const LabeledVectors& training, std::size_t k) {
    const auto nn = nearest_neighbors(query, training.x, k);
    HardnessScore score{0, k};
    for (const auto& n : nn) {
        if (training.y[n.index] != query_label) ++score.disagreeing;
    }
    return score;
}

ForgeryQuality classify_forgery_quality(const HardnessScore& score) {
    return 2 * score.disagreeing <= score.k ? ForgeryQuality::bad : ForgeryQuality::good;
}

}  // namespace sigdt
