#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sigdt/dataset.hpp"

namespace sigdt {

/// Class of a dissimilarity vector: within-writer (positive) or
/// between-writer (negative). `unknown` marks operational queries whose
/// ground truth is not available.
enum class Label { positive, negative, unknown };

/// What the questioned signature of a pair is.
enum class QueryKind { genuine, random, skilled, simple };

std::string_view to_string(Label label);
std::string_view to_string(QueryKind kind);
std::optional<Label> parse_label(std::string_view text);
std::optional<QueryKind> parse_query_kind(std::string_view text);

struct SignatureRef {
    std::int64_t writer_id = 0;
    std::int64_t signature_id = 0;

    friend bool operator==(const SignatureRef&, const SignatureRef&) = default;
};

struct DissimilaritySample {
    std::vector<double> u;
    Label label = Label::unknown;
    QueryKind query_kind = QueryKind::genuine;
    SignatureRef query;
    SignatureRef reference;
};

/// Coordinatewise absolute difference |x_q - x_r|.
std::vector<double> dt(std::span<const double> questioned, std::span<const double> reference);

struct PairingPlan {
    std::size_t genuines_per_writer = 14;     // R
    std::size_t random_forgery_writers = 7;   // F
    std::uint64_t seed = 0;
    /// Pick the R genuines at random (seeded) instead of the R lowest ids.
    bool random_selection = false;

    void validate() const;
};

/// Positive: all R(R-1)/2 pairs among each writer's R selected genuines.
/// Negative: the writer's R-1 lowest-id selected genuines (references)
/// against one genuine from each of F distinct other writers.
///
/// Output is ordered by writer id, positives before negatives, then pair
/// index. Randomness is drawn from a per-writer stream derived from
/// `plan.seed`, so the result does not depend on evaluation order.
std::vector<DissimilaritySample> build_training_set(const Dataset& dev, const PairingPlan& plan);

struct PairCounts {
    std::uint64_t total = 0;
    std::uint64_t positive = 0;
    std::uint64_t negative = 0;

    friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

/// Number of distinct dissimilarity vectors among M writers with R
/// signatures each: C(MR,2) in total, M*C(R,2) within writer and
/// C(M,2)*R^2 between writers.
PairCounts count_pairs(std::uint64_t writers, std::uint64_t per_writer);

/// One sample per reference, in reference order. When `with_ground_truth`
/// is false the labels are `unknown` (operational mode).
std::vector<DissimilaritySample> build_query_set(const SignatureRecord& questioned,
                                                 std::span<const SignatureRecord> references,
                                                 bool with_ground_truth = true);

/// Query kind of `questioned` against a reference set of `claimed_writer`.
QueryKind query_kind_for(const SignatureRecord& questioned, std::int64_t claimed_writer);

/// Splits a collection into vectors and +1/-1 labels. Throws DataError on
/// unknown labels.
struct LabeledVectors {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
};
LabeledVectors to_labeled(std::span<const DissimilaritySample> samples);

/// Delimiter-separated dissimilarity file: `dims=<n>` header, then
/// `u1,...,un,label,query_kind,query_writer,query_signature,reference_writer,reference_signature`.
std::vector<DissimilaritySample> read_dissimilarities(std::istream& in);
std::vector<DissimilaritySample> load_dissimilarities(const std::filesystem::path& path);
void write_dissimilarities(std::ostream& out, std::span<const DissimilaritySample> samples);
void save_dissimilarities(std::span<const DissimilaritySample> samples, const std::filesystem::path& path);

}  // namespace sigdt
