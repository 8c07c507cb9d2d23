#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigdt/dichotomy.hpp"
#include "sigdt/hardness.hpp"
#include "sigdt/metrics.hpp"

namespace sigdt {

/// Scores of one exploitation writer under one reference configuration and
/// the writer's own (user) threshold. Only genuine and skilled scores take
/// part in choosing the threshold.
struct WriterEvaluation {
    std::int64_t writer_id = 0;
    std::vector<double> genuine_scores;
    std::vector<double> skilled_scores;
    std::vector<double> random_scores;
    std::optional<std::vector<double>> simple_scores;
    double user_threshold = 0.0;
    double eer = 0.0;
    double far = 0.0;
    double frr = 0.0;
};

/// Fills threshold, eer, far and frr from genuine vs skilled scores.
void assign_user_threshold(WriterEvaluation& w);

struct GlobalEer {
    std::size_t writers = 0;
    double eer = 0.0;  // mean of per-writer EERs
};

GlobalEer global_report(std::span<const WriterEvaluation> per_writer);

/// Mean and sample standard deviation across replications.
struct ReplicationSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0;

    /// Percent with two decimals, e.g. "3.47 (0.15)".
    std::string formatted_percent() const;
};

ReplicationSummary summarize(std::span<const double> values);

enum class QueryCategory { positive, negative_random, negative_skilled, negative_simple };

std::string_view to_string(QueryCategory category);
QueryCategory category_of(QueryKind kind);

/// A questioned signature after verification: hardness of its first
/// reference pair and whether each reference configuration decided it
/// correctly at the writer's user threshold.
struct EvaluatedQuery {
    SignatureRef questioned;
    std::int64_t claimed_writer = 0;
    QueryCategory category = QueryCategory::positive;
    std::optional<HardnessScore> hardness;
    std::vector<char> correct;  // one flag per reference configuration
};

struct IhAccuracyRow {
    std::size_t disagreeing = 0;           // hardness = disagreeing / k
    std::size_t count = 0;
    std::vector<std::size_t> correct;      // per configuration

    /// Percentage, or nullopt for an empty bin.
    std::optional<double> accuracy(std::size_t config) const;
};

/// Accuracy per instance-hardness bin, one row per possible kDN value.
struct IhAccuracyTable {
    QueryCategory category = QueryCategory::positive;
    std::size_t k = 7;
    std::vector<std::string> configurations;
    std::vector<IhAccuracyRow> rows;

    std::size_t total() const;

    /// Adds counts of another table with the same shape (pooling replications).
    void merge(const IhAccuracyTable& other);
};

/// Throws DataError when a query of the category lacks a hardness score,
/// and when hardness scores use different k.
IhAccuracyTable ih_accuracy_table(std::span<const EvaluatedQuery> queries, QueryCategory category,
                                  std::span<const std::string> configurations);

/// Plain-text layout: IH, #Samples, then one accuracy column per
/// configuration; values truncated to two decimals, empty bins as "-".
std::string format_ih_table(const IhAccuracyTable& table);

/// Value truncated (not rounded) to two decimals, as printed in IH tables.
std::string truncate2(double value);

}  // namespace sigdt
