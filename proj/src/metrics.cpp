#include "sigdt/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "sigdt/error.hpp"

namespace sigdt {

ThresholdEer user_threshold_eer(std::span<const double> genuine, std::span<const double> forgery) {
    if (genuine.empty() || forgery.empty()) throw DataError("EER needs non-empty genuine and forgery score sets");

    std::vector<double> g(genuine.begin(), genuine.end());
    std::vector<double> f(forgery.begin(), forgery.end());
    std::sort(g.begin(), g.end());
    std::sort(f.begin(), f.end());

    std::vector<double> values(g);
    values.insert(values.end(), f.begin(), f.end());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> candidates;
    candidates.reserve(2 * values.size() + 1);
    candidates.push_back(-inf);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) candidates.push_back(values[i - 1] + (values[i] - values[i - 1]) / 2.0);
        candidates.push_back(values[i]);
    }
    candidates.push_back(inf);

    const auto ng = static_cast<std::int64_t>(g.size());
    const auto nf = static_cast<std::int64_t>(f.size());
    ThresholdEer best;
    std::int64_t best_gap = std::numeric_limits<std::int64_t>::max();
    // candidates are ascending, so keeping the first minimum gives the smallest threshold
    for (const double t : candidates) {
        const auto rejected = static_cast<std::int64_t>(std::lower_bound(g.begin(), g.end(), t) - g.begin());
        const auto accepted = nf - static_cast<std::int64_t>(std::lower_bound(f.begin(), f.end(), t) - f.begin());
        // |FAR - FRR| scaled by ng*nf, compared exactly
        const std::int64_t gap = std::abs(accepted * ng - rejected * nf);
        if (gap < best_gap) {
            best_gap = gap;
            best.threshold = t;
            best.far = static_cast<double>(accepted) / static_cast<double>(nf);
            best.frr = static_cast<double>(rejected) / static_cast<double>(ng);
            best.eer = (best.far + best.frr) / 2.0;
        }
    }
    return best;
}

}  // namespace sigdt
