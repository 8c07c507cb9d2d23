#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sigdt {

/// One signature in feature space.
using FeatureVector = std::vector<double>;

enum class SignatureKind { genuine, skilled, simple };

std::string_view to_string(SignatureKind kind);
std::optional<SignatureKind> parse_signature_kind(std::string_view text);

struct SignatureRecord {
    std::int64_t writer_id = 0;
    std::int64_t signature_id = 0;
    SignatureKind kind = SignatureKind::genuine;
    FeatureVector features;
};

enum class Split { development, exploitation };

/// A named collection of signature records sharing one dimensionality.
///
/// Records are kept in insertion (file) order. Writers are identified by
/// `writer_id`; `(writer_id, signature_id, kind)` is unique.
struct Dataset {
    std::string name;
    std::size_t dimensionality = 0;
    std::vector<SignatureRecord> records;
    Split split = Split::development;

    /// Distinct writer ids in ascending order.
    std::vector<std::int64_t> writers() const;

    /// Records of one writer and kind, sorted by signature_id.
    std::vector<const SignatureRecord*> of_writer(std::int64_t writer_id, SignatureKind kind) const;

    /// Throws DimensionError / DataError when a record breaks the dataset
    /// invariants (length, finiteness, duplicate key).
    void validate() const;

    /// Records whose writer is (or is not) in `writer_ids`, order preserved.
    Dataset subset(const std::vector<std::int64_t>& writer_ids, Split split, bool keep = true) const;
};

/// Development set = all writers except the first `exploitation_writers`
/// (ascending id); exploitation set = those first writers. The two are
/// disjoint by construction.
std::pair<Dataset, Dataset> split_by_writers(const Dataset& all, std::size_t exploitation_writers);

}  // namespace sigdt
