#include "sigdt/verification.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "csv.hpp"
#include "sigdt/dichotomy.hpp"
#include "sigdt/error.hpp"

namespace sigdt {

std::string_view to_string(FusionKind kind) {
    switch (kind) {
        case FusionKind::max: return "max";
        case FusionKind::min: return "min";
        case FusionKind::mean: return "mean";
        case FusionKind::median: return "median";
    }
    return "?";
}

std::optional<FusionKind> parse_fusion_kind(std::string_view text) {
    if (text == "max") return FusionKind::max;
    if (text == "min") return FusionKind::min;
    if (text == "mean") return FusionKind::mean;
    if (text == "median") return FusionKind::median;
    return std::nullopt;
}

FusedScore fuse(std::span<const double> scores, FusionKind kind) {
    if (scores.empty()) throw DataError("fuse: empty score sequence");
    switch (kind) {
        case FusionKind::max: {
            const auto it = std::max_element(scores.begin(), scores.end());  // first of equal maxima
            return {*it, static_cast<std::size_t>(it - scores.begin())};
        }
        case FusionKind::min: {
            const auto it = std::min_element(scores.begin(), scores.end());
            return {*it, static_cast<std::size_t>(it - scores.begin())};
        }
        case FusionKind::mean: {
            double s = 0.0;
            for (double v : scores) s += v;
            return {s / static_cast<double>(scores.size()), std::nullopt};
        }
        case FusionKind::median: {
            std::vector<double> v(scores.begin(), scores.end());
            std::sort(v.begin(), v.end());
            const std::size_t m = v.size() / 2;
            const double med = v.size() % 2 == 1 ? v[m] : v[m - 1] + (v[m] - v[m - 1]) / 2.0;
            return {med, std::nullopt};
        }
    }
    return {};
}

std::vector<double> partial_scores(const DichotomizerModel& model, const SignatureRecord& questioned,
                                   std::span<const SignatureRecord> references) {
    const auto queries = build_query_set(questioned, references, false);
    std::vector<double> scores;
    scores.reserve(queries.size());
    for (const auto& q : queries) scores.push_back(model.score(q.u));
    return scores;
}

VerificationOutcome verify(const DichotomizerModel& model, const SignatureRecord& questioned,
                           std::span<const SignatureRecord> references, FusionKind kind, double threshold) {
    VerificationOutcome out;
    out.partial_scores = partial_scores(model, questioned, references);
    const auto fused = fuse(out.partial_scores, kind);
    out.fused_score = fused.value;
    out.selected_reference_index = fused.selected;
    out.decision = fused.value >= threshold ? Decision::accept : Decision::reject;
    return out;
}

std::vector<VerificationRequest> read_verification_manifest(std::istream& in) {
    std::vector<VerificationRequest> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = csv::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto f = csv::split(t);
        if (f.size() != 5) throw ParseError("expected 5 fields, found " + std::to_string(f.size()), lineno);
        VerificationRequest r;
        r.questioned_writer = csv::parse_int(f[0], lineno, "writer id");
        r.questioned_signature = csv::parse_int(f[1], lineno, "signature id");
        const auto kind = parse_signature_kind(f[2]);
        if (!kind) throw ParseError("unknown kind '" + std::string(f[2]) + "'", lineno);
        r.questioned_kind = *kind;
        r.claimed_writer = csv::parse_int(f[3], lineno, "writer id");
        std::istringstream ids{std::string(f[4])};
        std::string id;
        while (ids >> id) r.reference_ids.push_back(csv::parse_int(id, lineno, "reference id"));
        if (r.reference_ids.empty()) throw ParseError("no reference ids", lineno);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<VerificationRequest> load_verification_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open manifest " + path.string());
    return read_verification_manifest(in);
}

std::vector<BatchRow> verify_batch(const DichotomizerModel& model, const Dataset& dataset,
                                   std::span<const VerificationRequest> requests, FusionKind kind,
                                   double threshold) {
    std::map<std::tuple<std::int64_t, std::int64_t, SignatureKind>, const SignatureRecord*> index;
    for (const auto& r : dataset.records) index.emplace(std::tuple{r.writer_id, r.signature_id, r.kind}, &r);
    auto find = [&](std::int64_t w, std::int64_t s, SignatureKind k) -> const SignatureRecord& {
        const auto it = index.find({w, s, k});
        if (it == index.end()) {
            throw DataError("no " + std::string(to_string(k)) + " signature (" + std::to_string(w) + "," +
                            std::to_string(s) + ") in " + dataset.name);
        }
        return *it->second;
    };

    std::vector<BatchRow> rows;
    rows.reserve(requests.size());
    for (const auto& req : requests) {
        const auto& questioned = find(req.questioned_writer, req.questioned_signature, req.questioned_kind);
        std::vector<SignatureRecord> refs;
        for (const auto id : req.reference_ids) refs.push_back(find(req.claimed_writer, id, SignatureKind::genuine));
        rows.push_back({req, verify(model, questioned, refs, kind, threshold)});
    }
    return rows;
}

void write_batch_outcomes(std::ostream& out, std::span<const BatchRow> rows) {
    out << "questioned_writer,questioned_signature,questioned_kind,claimed_writer,fused_score,selected_reference,"
           "decision,partial_scores\n";
    std::string line;
    for (const auto& [req, o] : rows) {
        line.clear();
        line += std::to_string(req.questioned_writer) + ',' + std::to_string(req.questioned_signature) + ',';
        line += to_string(req.questioned_kind);
        line += ',' + std::to_string(req.claimed_writer) + ',';
        csv::append_double(line, o.fused_score);
        line += ',';
        if (o.selected_reference_index) line += std::to_string(req.reference_ids[*o.selected_reference_index]);
        line += ',';
        line += o.decision == Decision::accept ? "accept" : "reject";
        line += ',';
        for (std::size_t i = 0; i < o.partial_scores.size(); ++i) {
            if (i) line += ' ';
            csv::append_double(line, o.partial_scores[i]);
        }
        line += '\n';
        out << line;
    }
}

}  // namespace sigdt
