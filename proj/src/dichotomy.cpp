#include "sigdt/dichotomy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "csv.hpp"
#include "sigdt/error.hpp"
#include "sigdt/random.hpp"

namespace sigdt {

std::string_view to_string(Label label) {
    switch (label) {
        case Label::positive: return "positive";
        case Label::negative: return "negative";
        case Label::unknown: return "unknown";
    }
    return "?";
}

std::string_view to_string(QueryKind kind) {
    switch (kind) {
        case QueryKind::genuine: return "genuine";
        case QueryKind::random: return "random";
        case QueryKind::skilled: return "skilled";
        case QueryKind::simple: return "simple";
    }
    return "?";
}

std::optional<Label> parse_label(std::string_view text) {
    if (text == "positive") return Label::positive;
    if (text == "negative") return Label::negative;
    if (text == "unknown") return Label::unknown;
    return std::nullopt;
}

std::optional<QueryKind> parse_query_kind(std::string_view text) {
    if (text == "genuine") return QueryKind::genuine;
    if (text == "random") return QueryKind::random;
    if (text == "skilled") return QueryKind::skilled;
    if (text == "simple") return QueryKind::simple;
    return std::nullopt;
}

std::vector<double> dt(std::span<const double> questioned, std::span<const double> reference) {
    if (questioned.size() != reference.size()) {
        throw DimensionError("dt: length mismatch (" + std::to_string(questioned.size()) + " vs " +
                             std::to_string(reference.size()) + ")");
    }
    std::vector<double> u(questioned.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::abs(questioned[i] - reference[i]);
    return u;
}

void PairingPlan::validate() const {
    if (genuines_per_writer < 2) throw ConfigError("pairing plan: genuines per writer (R) must be >= 2");
    if (random_forgery_writers < 1) throw ConfigError("pairing plan: random forgery writers (F) must be >= 1");
}

namespace {

SignatureRef ref_of(const SignatureRecord& r) { return {r.writer_id, r.signature_id}; }

}  // namespace

std::vector<DissimilaritySample> build_training_set(const Dataset& dev, const PairingPlan& plan) {
    plan.validate();
    const std::size_t R = plan.genuines_per_writer;
    const std::size_t F = plan.random_forgery_writers;

    std::map<std::int64_t, std::vector<const SignatureRecord*>> genuines;
    for (const auto w : dev.writers()) {
        auto g = dev.of_writer(w, SignatureKind::genuine);
        if (g.size() < R) {
            throw DataError("writer " + std::to_string(w) + " has " + std::to_string(g.size()) +
                            " genuine signatures, plan needs " + std::to_string(R));
        }
        genuines.emplace(w, std::move(g));
    }
    const std::size_t M = genuines.size();
    if (F >= M) {
        throw ConfigError("pairing plan: F=" + std::to_string(F) + " random forgery writers needs more than " +
                          std::to_string(M) + " development writers");
    }

    std::vector<std::int64_t> writer_ids;
    for (const auto& [w, _] : genuines) writer_ids.push_back(w);

    std::vector<DissimilaritySample> out;
    out.reserve(M * (R * (R - 1) / 2 + (R - 1) * F));

    for (std::size_t wi = 0; wi < M; ++wi) {
        const auto w = writer_ids[wi];
        Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(w)));
        const auto& pool = genuines.at(w);

        std::vector<const SignatureRecord*> selected;
        if (plan.random_selection) {
            for (const auto idx : rng.sample_without_replacement(pool.size(), R)) selected.push_back(pool[idx]);
            std::sort(selected.begin(), selected.end(), [](const auto* a, const auto* b) {
                return a->signature_id < b->signature_id;
            });
        } else {
            selected.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(R));
        }

        for (std::size_t i = 0; i < R; ++i) {
            for (std::size_t j = i + 1; j < R; ++j) {
                out.push_back({dt(selected[i]->features, selected[j]->features), Label::positive,
                               QueryKind::genuine, ref_of(*selected[i]), ref_of(*selected[j])});
            }
        }

        // partners: F distinct other writers, one genuine each
        std::vector<const SignatureRecord*> partners;
        for (const auto pick : rng.sample_without_replacement(M - 1, F)) {
            const auto other = writer_ids[pick < wi ? pick : pick + 1];
            const auto& candidates = genuines.at(other);
            partners.push_back(candidates[rng.index(candidates.size())]);
        }
        // the highest-id selected genuine is left out of the reference side
        for (std::size_t r = 0; r + 1 < R; ++r) {
            for (const auto* p : partners) {
                out.push_back({dt(p->features, selected[r]->features), Label::negative, QueryKind::random,
                               ref_of(*p), ref_of(*selected[r])});
            }
        }
    }
    return out;
}

PairCounts count_pairs(std::uint64_t writers, std::uint64_t per_writer) {
    auto choose2 = [](std::uint64_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; };
    PairCounts c;
    c.total = choose2(writers * per_writer);
    c.positive = writers * choose2(per_writer);
    c.negative = choose2(writers) * per_writer * per_writer;
    return c;
}

QueryKind query_kind_for(const SignatureRecord& questioned, std::int64_t claimed_writer) {
    switch (questioned.kind) {
        case SignatureKind::skilled: return QueryKind::skilled;
        case SignatureKind::simple: return QueryKind::simple;
        case SignatureKind::genuine:
            return questioned.writer_id == claimed_writer ? QueryKind::genuine : QueryKind::random;
    }
    return QueryKind::genuine;
}

std::vector<DissimilaritySample> build_query_set(const SignatureRecord& questioned,
                                                 std::span<const SignatureRecord> references,
                                                 bool with_ground_truth) {
    if (references.empty()) throw DataError("build_query_set: empty reference set");
    const auto claimed = references.front().writer_id;
    for (const auto& r : references) {
        if (r.writer_id != claimed) throw DataError("build_query_set: references span several writers");
        if (r.kind != SignatureKind::genuine) throw DataError("build_query_set: references must be genuine");
    }
    const QueryKind kind = query_kind_for(questioned, claimed);
    Label label = Label::unknown;
    if (with_ground_truth) label = kind == QueryKind::genuine ? Label::positive : Label::negative;

    std::vector<DissimilaritySample> out;
    out.reserve(references.size());
    for (const auto& r : references) {
        out.push_back({dt(questioned.features, r.features), label, kind, ref_of(questioned), ref_of(r)});
    }
    return out;
}

LabeledVectors to_labeled(std::span<const DissimilaritySample> samples) {
    LabeledVectors lv;
    lv.x.reserve(samples.size());
    lv.y.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.label == Label::unknown) throw DataError("sample without ground-truth label");
        lv.x.push_back(s.u);
        lv.y.push_back(s.label == Label::positive ? 1 : -1);
    }
    return lv;
}

std::vector<DissimilaritySample> read_dissimilarities(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing header", 1);
    const std::size_t n = csv::parse_dims_header(line);
    std::vector<DissimilaritySample> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (csv::trim(line).empty()) continue;
        const auto f = csv::split(line);
        if (f.size() != n + 6) {
            throw ParseError("expected " + std::to_string(n + 6) + " fields, found " + std::to_string(f.size()),
                             lineno);
        }
        DissimilaritySample s;
        s.u.reserve(n);
        for (std::size_t i = 0; i < n; ++i) s.u.push_back(csv::parse_double(f[i], lineno));
        const auto label = parse_label(f[n]);
        if (!label) throw ParseError("unknown label '" + std::string(f[n]) + "'", lineno);
        const auto kind = parse_query_kind(f[n + 1]);
        if (!kind) throw ParseError("unknown query kind '" + std::string(f[n + 1]) + "'", lineno);
        s.label = *label;
        s.query_kind = *kind;
        s.query = {csv::parse_int(f[n + 2], lineno, "writer id"), csv::parse_int(f[n + 3], lineno, "signature id")};
        s.reference = {csv::parse_int(f[n + 4], lineno, "writer id"),
                       csv::parse_int(f[n + 5], lineno, "signature id")};
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<DissimilaritySample> load_dissimilarities(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dissimilarity file " + path.string());
    return read_dissimilarities(in);
}

void write_dissimilarities(std::ostream& out, std::span<const DissimilaritySample> samples) {
    if (samples.empty()) throw DataError("cannot write an empty dissimilarity set");
    const std::size_t n = samples.front().u.size();
    out << "dims=" << n << '\n';
    std::string line;
    for (const auto& s : samples) {
        if (s.u.size() != n) throw DimensionError("ragged dissimilarity set");
        line.clear();
        for (double v : s.u) {
            csv::append_double(line, v);
            line += ',';
        }
        line += to_string(s.label);
        line += ',';
        line += to_string(s.query_kind);
        for (auto id : {s.query.writer_id, s.query.signature_id, s.reference.writer_id, s.reference.signature_id}) {
            line += ',';
            line += std::to_string(id);
        }
        line += '\n';
        out << line;
    }
}

void save_dissimilarities(std::span<const DissimilaritySample> samples, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write dissimilarity file " + path.string());
    write_dissimilarities(out, samples);
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace sigdt
