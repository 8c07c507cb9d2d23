#include "sigdt/neighborhood.hpp"

#include <cstdio>
#include <sstream>

#include "sigdt/error.hpp"

namespace sigdt {

namespace {

std::string id(const SignatureRef& r) { return std::to_string(r.writer_id) + "-" + std::to_string(r.signature_id); }

}  // namespace

Label effective_label(const DissimilaritySample& sample) {
    if (sample.label != Label::unknown) return sample.label;
    return sample.query_kind == QueryKind::genuine ? Label::positive : Label::negative;
}

HardnessScore NeighborhoodDump::recomputed_hardness() const {
    HardnessScore h{0, neighbors.size()};
    for (const auto& row : neighbors) h.disagreeing += row.label != label ? 1 : 0;
    return h;
}

NeighborhoodDump dump_neighborhood(const DissimilaritySample& query,
                                   std::span<const DissimilaritySample> training, std::size_t k) {
    std::vector<std::vector<double>> points;
    points.reserve(training.size());
    for (const auto& s : training) {
        if (s.label == Label::unknown) throw DataError("training sample without a label");
        points.push_back(s.u);
    }
    NeighborhoodDump dump;
    dump.query = query.query;
    dump.reference = query.reference;
    dump.query_kind = query.query_kind;
    dump.label = effective_label(query);
    for (const auto& n : nearest_neighbors(query.u, points, k)) {
        const auto& s = training[n.index];
        dump.neighbors.push_back({n.index, n.distance, s.label, s.query_kind, s.query, s.reference});
    }
    dump.hardness = dump.recomputed_hardness();
    return dump;
}

std::string format_neighborhood(const NeighborhoodDump& dump) {
    std::ostringstream out;
    out << "query " << id(dump.query) << " reference " << id(dump.reference) << " kind "
        << to_string(dump.query_kind) << " label " << to_string(dump.label) << "\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "kdn %zu/%zu = %.6f\n", dump.hardness.disagreeing, dump.hardness.k,
                  dump.hardness.value());
    out << buf;
    out << "rank\tindex\tdistance\tlabel\tquery_kind\tquery\treference\n";
    for (std::size_t i = 0; i < dump.neighbors.size(); ++i) {
        const auto& n = dump.neighbors[i];
        std::snprintf(buf, sizeof buf, "%zu\t%zu\t%.9g\t", i + 1, n.index, n.distance);
        out << buf << to_string(n.label) << "\t" << to_string(n.query_kind) << "\t" << id(n.query) << "\t"
            << id(n.reference) << "\n";
    }
    return out.str();
}

std::string neighborhood_file_name(const NeighborhoodDump& dump) {
    return "neighborhood_q" + id(dump.query) + "_r" + id(dump.reference) + "_" +
           std::string(to_string(dump.query_kind)) + ".txt";
}

}  // namespace sigdt
