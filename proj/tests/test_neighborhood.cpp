#include <doctest.h>

#include <random>

#include "sigdt/error.hpp"
#include "sigdt/neighborhood.hpp"
#include "support.hpp"

using namespace sigdt;

namespace {

DissimilaritySample sample(std::vector<double> u, Label label, QueryKind kind, std::int64_t w = 0, std::int64_t s = 0) {
    DissimilaritySample d;
    d.u = std::move(u);
    d.label = label;
    d.query_kind = kind;
    d.query = {w, s};
    d.reference = {w, 0};
    return d;
}

/// Positives packed near the origin, negatives far away.
std::vector<DissimilaritySample> clusters(std::mt19937_64& gen) {
    std::normal_distribution<double> nd(0.0, 0.3);
    std::vector<DissimilaritySample> out;
    for (int i = 0; i < 20; ++i) out.push_back(sample({nd(gen), nd(gen)}, Label::positive, QueryKind::genuine, i));
    for (int i = 0; i < 20; ++i)
        out.push_back(sample({5.0 + nd(gen), 5.0 + nd(gen)}, Label::negative, QueryKind::random, i));
    return out;
}

}  // namespace

TEST_CASE("neighbourhood agrees with kdn and the brute-force oracle") {
    std::mt19937_64 gen(11);
    std::normal_distribution<double> nd;
    std::vector<DissimilaritySample> training;
    for (int i = 0; i < 60; ++i)
        training.push_back(sample({nd(gen), nd(gen), nd(gen)}, i % 3 == 0 ? Label::negative : Label::positive,
                                  QueryKind::genuine, i));
    const auto lv = to_labeled(training);
    for (int q = 0; q < 100; ++q) {
        const auto kind = q % 2 == 0 ? QueryKind::genuine : QueryKind::skilled;
        const auto query = sample({nd(gen), nd(gen), nd(gen)}, Label::unknown, kind, 900, q);
        const int y = effective_label(query) == Label::positive ? 1 : -1;
        const auto dump = dump_neighborhood(query, training, 7);
        CHECK(dump.hardness == kdn(query.u, y, lv, 7));
        CHECK(dump.hardness.disagreeing == oracle::kdn_disagreeing(query.u, y, lv.x, lv.y, 7));
        CHECK(dump.recomputed_hardness() == dump.hardness);
        REQUIRE(dump.neighbors.size() == 7);
        const auto idx = oracle::knn(query.u, lv.x, 7);
        for (std::size_t i = 0; i < 7; ++i) {
            CHECK(dump.neighbors[i].index == idx[i]);
            CHECK(dump.neighbors[i].label == training[idx[i]].label);
            if (i > 0) CHECK(dump.neighbors[i - 1].distance <= dump.neighbors[i].distance);
        }
    }
}

TEST_CASE("effective labels") {
    CHECK(effective_label(sample({0.0}, Label::unknown, QueryKind::genuine)) == Label::positive);
    CHECK(effective_label(sample({0.0}, Label::unknown, QueryKind::simple)) == Label::negative);
    CHECK(effective_label(sample({0.0}, Label::negative, QueryKind::genuine)) == Label::negative);
}

TEST_CASE("a genuine query inside the positive cluster is easy") {
    std::mt19937_64 gen(3);
    const auto training = clusters(gen);
    const auto dump = dump_neighborhood(sample({0.05, -0.02}, Label::positive, QueryKind::genuine), training, 7);
    CHECK(dump.hardness.disagreeing == 0);
    for (const auto& n : dump.neighbors) CHECK(n.label == Label::positive);
}

TEST_CASE("a good forgery lands among positives") {
    std::mt19937_64 gen(4);
    const auto training = clusters(gen);
    const auto dump = dump_neighborhood(sample({0.1, 0.1}, Label::negative, QueryKind::skilled, 2, 0), training, 7);
    CHECK(dump.hardness.disagreeing == 7);
    CHECK(classify_forgery_quality(dump.hardness) == ForgeryQuality::good);
    const auto bad = dump_neighborhood(sample({5.0, 5.1}, Label::negative, QueryKind::skilled, 2, 1), training, 7);
    CHECK(bad.hardness.disagreeing == 0);
    CHECK(classify_forgery_quality(bad.hardness) == ForgeryQuality::bad);
}

TEST_CASE("neighbourhood errors") {
    std::mt19937_64 gen(5);
    auto training = clusters(gen);
    const auto q = sample({0.0, 0.0}, Label::positive, QueryKind::genuine);
    CHECK_THROWS_AS(dump_neighborhood(q, std::span(training).first(5), 7), DataError);
    training[3].label = Label::unknown;
    CHECK_THROWS_AS(dump_neighborhood(q, training, 7), DataError);
}

TEST_CASE("neighbourhood text and file name") {
    std::mt19937_64 gen(6);
    const auto training = clusters(gen);
    auto q = sample({0.0, 0.0}, Label::negative, QueryKind::skilled, 12, 3);
    q.reference = {12, 0};
    const auto dump = dump_neighborhood(q, training, 7);
    CHECK(neighborhood_file_name(dump) == "neighborhood_q12-3_r12-0_skilled.txt");
    const auto text = format_neighborhood(dump);
    CHECK(text.rfind("query 12-3 reference 12-0 kind skilled", 0) == 0);
    CHECK(text.find("kdn 7/7 = 1.000000") != std::string::npos);
    CHECK(text.find("rank\tindex\tdistance\tlabel\tquery_kind\tquery\treference\n") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3 + 7);
}
