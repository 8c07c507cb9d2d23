#include "sigdt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "sigdt/error.hpp"

namespace sigdt {

std::string_view to_string(SignatureKind kind) {
    switch (kind) {
        case SignatureKind::genuine: return "genuine";
        case SignatureKind::skilled: return "skilled";
        case SignatureKind::simple: return "simple";
    }
    return "?";
}

std::optional<SignatureKind> parse_signature_kind(std::string_view text) {
    if (text == "genuine") return SignatureKind::genuine;
    if (text == "skilled") return SignatureKind::skilled;
    if (text == "simple") return SignatureKind::simple;
    return std::nullopt;
}

std::vector<std::int64_t> Dataset::writers() const {
    std::set<std::int64_t> ids;
    for (const auto& r : records) ids.insert(r.writer_id);
    return {ids.begin(), ids.end()};
}

std::vector<const SignatureRecord*> Dataset::of_writer(std::int64_t writer_id, SignatureKind kind) const {
    std::vector<const SignatureRecord*> out;
    for (const auto& r : records) {
        if (r.writer_id == writer_id && r.kind == kind) out.push_back(&r);
    }
    std::sort(out.begin(), out.end(), [](const SignatureRecord* a, const SignatureRecord* b) {
        return a->signature_id < b->signature_id;
    });
    return out;
}

void Dataset::validate() const {
    std::set<std::tuple<std::int64_t, std::int64_t, int>> keys;
    for (const auto& r : records) {
        if (r.features.size() != dimensionality) {
            throw DimensionError("record (" + std::to_string(r.writer_id) + "," +
                                 std::to_string(r.signature_id) + ") has " +
                                 std::to_string(r.features.size()) + " features, expected " +
                                 std::to_string(dimensionality));
        }
        for (double v : r.features) {
            if (!std::isfinite(v)) throw DataError("non-finite feature value");
        }
        if (!keys.emplace(r.writer_id, r.signature_id, static_cast<int>(r.kind)).second) {
            throw DataError("duplicate record (" + std::to_string(r.writer_id) + "," +
                            std::to_string(r.signature_id) + "," + std::string(to_string(r.kind)) + ")");
        }
    }
}

Dataset Dataset::subset(const std::vector<std::int64_t>& writer_ids, Split new_split, bool keep) const {
    const std::set<std::int64_t> wanted(writer_ids.begin(), writer_ids.end());
    Dataset out{name, dimensionality, {}, new_split};
    for (const auto& r : records) {
        if (wanted.contains(r.writer_id) == keep) out.records.push_back(r);
    }
    return out;
}

std::pair<Dataset, Dataset> split_by_writers(const Dataset& all, std::size_t exploitation_writers) {
    const auto ids = all.writers();
    if (exploitation_writers >= ids.size()) {
        throw ConfigError("exploitation writer count " + std::to_string(exploitation_writers) +
                          " leaves no development writers (dataset has " + std::to_string(ids.size()) + ")");
    }
    const std::vector<std::int64_t> first(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(exploitation_writers));
    auto dev = all.subset(first, Split::development, false);
    auto expl = all.subset(first, Split::exploitation, true);
    dev.name = all.name + ":development";
    expl.name = all.name + ":exploitation";
    return {std::move(dev), std::move(expl)};
}

}  // namespace sigdt
