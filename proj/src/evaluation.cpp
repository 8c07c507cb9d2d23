#include "sigdt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sigdt/error.hpp"

namespace sigdt {

void assign_user_threshold(WriterEvaluation& w) {
    const auto t = user_threshold_eer(w.genuine_scores, w.skilled_scores);
    w.user_threshold = t.threshold;
    w.eer = t.eer;
    w.far = t.far;
    w.frr = t.frr;
}

GlobalEer global_report(std::span<const WriterEvaluation> per_writer) {
    GlobalEer g;
    g.writers = per_writer.size();
    if (per_writer.empty()) return g;
    double sum = 0.0;
    for (const auto& w : per_writer) sum += w.eer;
    g.eer = sum / static_cast<double>(per_writer.size());
    return g;
}

std::string ReplicationSummary::formatted_percent() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f (%.2f)", 100.0 * mean, 100.0 * std_dev);
    return buf;
}

ReplicationSummary summarize(std::span<const double> values) {
    ReplicationSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::string_view to_string(QueryCategory category) {
    switch (category) {
        case QueryCategory::positive: return "positive";
        case QueryCategory::negative_random: return "negative_random";
        case QueryCategory::negative_skilled: return "negative_skilled";
        case QueryCategory::negative_simple: return "negative_simple";
    }
    return "?";
}

QueryCategory category_of(QueryKind kind) {
    switch (kind) {
        case QueryKind::genuine: return QueryCategory::positive;
        case QueryKind::random: return QueryCategory::negative_random;
        case QueryKind::skilled: return QueryCategory::negative_skilled;
        case QueryKind::simple: return QueryCategory::negative_simple;
    }
    return QueryCategory::positive;
}

std::optional<double> IhAccuracyRow::accuracy(std::size_t config) const {
    if (count == 0) return std::nullopt;
    return 100.0 * static_cast<double>(correct[config]) / static_cast<double>(count);
}

std::size_t IhAccuracyTable::total() const {
    std::size_t t = 0;
    for (const auto& r : rows) t += r.count;
    return t;
}

void IhAccuracyTable::merge(const IhAccuracyTable& other) {
    if (other.k != k || other.category != category || other.configurations != configurations) {
        throw DataError("cannot merge IH tables of different shape");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].count += other.rows[i].count;
        for (std::size_t c = 0; c < configurations.size(); ++c) rows[i].correct[c] += other.rows[i].correct[c];
    }
}

IhAccuracyTable ih_accuracy_table(std::span<const EvaluatedQuery> queries, QueryCategory category,
                                  std::span<const std::string> configurations) {
    std::optional<std::size_t> k;
    for (const auto& q : queries) {
        if (q.category != category) continue;
        if (!q.hardness) throw DataError("ih_accuracy_table: query without hardness score");
        if (k && *k != q.hardness->k) throw DataError("ih_accuracy_table: mixed k values");
        k = q.hardness->k;
        if (q.correct.size() != configurations.size()) throw DataError("ih_accuracy_table: configuration mismatch");
    }
    IhAccuracyTable table;
    table.category = category;
    table.k = k.value_or(7);
    table.configurations.assign(configurations.begin(), configurations.end());
    table.rows.resize(table.k + 1);
    for (std::size_t d = 0; d <= table.k; ++d) {
        table.rows[d].disagreeing = d;
        table.rows[d].correct.assign(configurations.size(), 0);
    }
    for (const auto& q : queries) {
        if (q.category != category) continue;
        auto& row = table.rows[q.hardness->disagreeing];
        ++row.count;
        for (std::size_t c = 0; c < configurations.size(); ++c) row.correct[c] += q.correct[c] ? 1 : 0;
    }
    return table;
}

std::string truncate2(double value) {
    // nudge before flooring so exact decimals such as 0.57 are not cut to 0.56
    const double t = std::floor(value * 100.0 + 1e-9) / 100.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", t);
    return buf;
}

std::string format_ih_table(const IhAccuracyTable& table) {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-6s %9s", "IH", "#Samples");
    out << buf;
    for (const auto& c : table.configurations) {
        std::snprintf(buf, sizeof buf, " %9s", c.c_str());
        out << buf;
    }
    out << '\n';
    for (const auto& row : table.rows) {
        const double ih = static_cast<double>(row.disagreeing) / static_cast<double>(table.k);
        std::snprintf(buf, sizeof buf, "%-6s %9zu", truncate2(ih).c_str(), row.count);
        out << buf;
        for (std::size_t c = 0; c < table.configurations.size(); ++c) {
            const auto acc = row.accuracy(c);
            std::snprintf(buf, sizeof buf, " %9s", acc ? truncate2(*acc).c_str() : "-");
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace sigdt
