#include "sigdt/feature_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "csv.hpp"
#include "sigdt/error.hpp"

namespace sigdt {

Dataset read_features(std::istream& in, std::string name) {
    Dataset ds;
    ds.name = std::move(name);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    ds.dimensionality = csv::parse_dims_header(line);

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (csv::trim(line).empty()) continue;
        const auto fields = csv::split(line);
        if (fields.size() != ds.dimensionality + 3) {
            throw ParseError("expected " + std::to_string(ds.dimensionality + 3) + " fields, found " +
                                 std::to_string(fields.size()),
                             lineno);
        }
        SignatureRecord rec;
        rec.writer_id = csv::parse_int(fields[0], lineno, "writer_id");
        rec.signature_id = csv::parse_int(fields[1], lineno, "signature_id");
        if (rec.writer_id < 0 || rec.signature_id < 0) throw ParseError("negative id", lineno);
        const auto kind = parse_signature_kind(fields[2]);
        if (!kind) throw ParseError("unknown kind '" + std::string(fields[2]) + "'", lineno);
        rec.kind = *kind;
        rec.features.reserve(ds.dimensionality);
        for (std::size_t i = 3; i < fields.size(); ++i) {
            rec.features.push_back(csv::parse_double(fields[i], lineno));
        }
        ds.records.push_back(std::move(rec));
    }
    try {
        ds.validate();
    } catch (const Error& e) {
        throw ParseError(e.what(), 0);
    }
    return ds;
}

Dataset load_features(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open feature file " + path.string());
    return read_features(in, path.stem().string());
}

void write_features(std::ostream& out, const Dataset& dataset) {
    out << "dims=" << dataset.dimensionality << '\n';
    std::string line;
    for (const auto& r : dataset.records) {
        line.clear();
        line += std::to_string(r.writer_id);
        line += ',';
        line += std::to_string(r.signature_id);
        line += ',';
        line += to_string(r.kind);
        for (double v : r.features) {
            line += ',';
            csv::append_double(line, v);
        }
        line += '\n';
        out << line;
    }
}

void save_features(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write feature file " + path.string());
    write_features(out, dataset);
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace sigdt
