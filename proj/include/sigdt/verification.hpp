#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sigdt/dataset.hpp"
#include "sigdt/dichotomizer.hpp"

namespace sigdt {

enum class FusionKind { max, min, mean, median };

std::string_view to_string(FusionKind kind);
std::optional<FusionKind> parse_fusion_kind(std::string_view text);

struct FusedScore {
    double value = 0.0;
    /// Index of the extremal partial score (first occurrence); set for max
    /// and min only.
    std::optional<std::size_t> selected;
};

/// Combines per-reference scores. Median of an even count is the mean of
/// the two middle values. Throws DataError on an empty sequence.
FusedScore fuse(std::span<const double> scores, FusionKind kind);

enum class Decision { accept, reject };

struct VerificationOutcome {
    double fused_score = 0.0;
    std::vector<double> partial_scores;
    std::optional<std::size_t> selected_reference_index;
    Decision decision = Decision::reject;
};

/// Scores `questioned` against each reference through the model (its own
/// scaler included), fuses the partial scores and accepts iff the fused
/// score is at least `threshold`.
VerificationOutcome verify(const DichotomizerModel& model, const SignatureRecord& questioned,
                           std::span<const SignatureRecord> references, FusionKind kind, double threshold);

/// Partial scores only (one per reference, reference order).
std::vector<double> partial_scores(const DichotomizerModel& model, const SignatureRecord& questioned,
                                   std::span<const SignatureRecord> references);

/// One row of a batch verification manifest:
/// `questioned_writer,questioned_signature,questioned_kind,claimed_writer,ref_id ref_id ...`
/// (reference signature ids are genuine signatures of the claimed writer,
/// separated by spaces).
struct VerificationRequest {
    std::int64_t questioned_writer = 0;
    std::int64_t questioned_signature = 0;
    SignatureKind questioned_kind = SignatureKind::genuine;
    std::int64_t claimed_writer = 0;
    std::vector<std::int64_t> reference_ids;
};

std::vector<VerificationRequest> read_verification_manifest(std::istream& in);
std::vector<VerificationRequest> load_verification_manifest(const std::filesystem::path& path);

struct BatchRow {
    VerificationRequest request;
    VerificationOutcome outcome;
};

/// Resolves every request against `dataset` and verifies it. Throws
/// DataError when a referenced signature does not exist.
std::vector<BatchRow> verify_batch(const DichotomizerModel& model, const Dataset& dataset,
                                   std::span<const VerificationRequest> requests, FusionKind kind,
                                   double threshold);

/// `questioned_writer,questioned_signature,questioned_kind,claimed_writer,fused_score,selected_reference,decision,partial_scores`
void write_batch_outcomes(std::ostream& out, std::span<const BatchRow> rows);

}  // namespace sigdt
