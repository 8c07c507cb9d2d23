#include "sigdt/prototype.hpp"

#include <algorithm>
#include <limits>

#include "sigdt/error.hpp"
#include "sigdt/random.hpp"

namespace sigdt {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

CondensationResult condense(const LabeledVectors& samples, std::uint64_t seed, std::size_t k) {
    if (k != 1) throw ConfigError("condense: only k = 1 is supported (got " + std::to_string(k) + ")");
    const std::size_t n = samples.x.size();
    if (n == 0) throw DataError("condense: empty input");
    for (const auto& v : samples.x) {
        if (v.size() != samples.x.front().size()) throw DimensionError("condense: ragged input");
    }

    Rng rng(seed);
    const auto order = rng.permutation(n);

    std::vector<std::size_t> store;
    std::vector<char> stored(n, 0);
    bool seen_pos = false, seen_neg = false;
    for (const auto i : order) {
        bool& seen = samples.y[i] > 0 ? seen_pos : seen_neg;
        if (!seen) {
            seen = true;
            store.push_back(i);
            stored[i] = 1;
        }
        if (seen_pos && seen_neg) break;
    }

    // Nearest store member per sample, updated incrementally: the store
    // only grows, so each sample only needs the members added since its
    // last visit.
    std::vector<double> best_d2(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> best_idx(n, n);
    std::vector<std::size_t> compared(n, 0);

    CondensationResult result;
    result.input_size = n;
    bool added = true;
    while (added) {
        added = false;
        ++result.passes;
        for (const auto i : order) {
            if (stored[i]) continue;
            for (std::size_t s = compared[i]; s < store.size(); ++s) {
                const auto j = store[s];
                const double d2 = squared_distance(samples.x[i], samples.x[j]);
                if (d2 < best_d2[i] || (d2 == best_d2[i] && j < best_idx[i])) {
                    best_d2[i] = d2;
                    best_idx[i] = j;
                }
            }
            compared[i] = store.size();
            if (samples.y[best_idx[i]] != samples.y[i]) {
                store.push_back(i);
                stored[i] = 1;
                added = true;
            }
        }
    }

    result.retained_indices = std::move(store);
    std::sort(result.retained_indices.begin(), result.retained_indices.end());
    return result;
}

CondensationResult condense(std::span<const DissimilaritySample> samples, std::uint64_t seed, std::size_t k) {
    return condense(to_labeled(samples), seed, k);
}

std::vector<DissimilaritySample> select(std::span<const DissimilaritySample> samples,
                                        const CondensationResult& result) {
    std::vector<DissimilaritySample> out;
    out.reserve(result.retained_indices.size());
    for (const auto i : result.retained_indices) out.push_back(samples[i]);
    return out;
}

}  // namespace sigdt
