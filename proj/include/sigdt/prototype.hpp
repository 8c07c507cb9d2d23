#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sigdt/dichotomy.hpp"

namespace sigdt {

struct CondensationResult {
    std::vector<std::size_t> retained_indices;  // ascending
    std::size_t passes = 0;                     // full sweeps executed, including the final silent one
    std::size_t input_size = 0;

    std::size_t retained_size() const noexcept { return retained_indices.size(); }
};

/// Hart's Condensed Nearest Neighbours with a 1-NN rule.
///
/// The store starts with the first sample of each class in a seeded scan
/// order. The remaining samples are swept in that same order; a sample the
/// current store misclassifies joins the store. Sweeps repeat until one adds
/// nothing. 1-NN distance ties go to the lower input index.
///
/// Only k = 1 is supported; other values raise ConfigError.
CondensationResult condense(const LabeledVectors& samples, std::uint64_t seed, std::size_t k = 1);
CondensationResult condense(std::span<const DissimilaritySample> samples, std::uint64_t seed, std::size_t k = 1);

/// The retained samples, in ascending input order.
std::vector<DissimilaritySample> select(std::span<const DissimilaritySample> samples,
                                        const CondensationResult& result);

}  // namespace sigdt
