#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sigdt/dichotomy.hpp"
#include "sigdt/hardness.hpp"

namespace sigdt {

struct NeighborRow {
    std::size_t index = 0;  // position in the training collection
    double distance = 0.0;
    Label label = Label::unknown;
    QueryKind query_kind = QueryKind::genuine;
    SignatureRef query;
    SignatureRef reference;
};

/// A questioned dissimilarity sample, its K nearest training samples and
/// the resulting kDN hardness.
struct NeighborhoodDump {
    SignatureRef query;
    SignatureRef reference;
    QueryKind query_kind = QueryKind::genuine;
    Label label = Label::unknown;
    HardnessScore hardness;
    std::vector<NeighborRow> neighbors;  // non-decreasing distance, ties by index

    /// kDN recomputed from the rows.
    HardnessScore recomputed_hardness() const;
};

/// Label the query is judged by: its own label, or, when unknown, positive
/// for genuine queries and negative for every forgery kind.
Label effective_label(const DissimilaritySample& sample);

/// `query.u` must be in the same (standardized) space as the training
/// vectors. Same neighbour selection and errors as kdn.
NeighborhoodDump dump_neighborhood(const DissimilaritySample& query,
                                   std::span<const DissimilaritySample> training, std::size_t k);

/// Plain-text dump, one neighbour per line.
std::string format_neighborhood(const NeighborhoodDump& dump);

/// e.g. "neighborhood_q12-3_r12-0_skilled.txt"
std::string neighborhood_file_name(const NeighborhoodDump& dump);

}  // namespace sigdt
