#include <doctest.h>

#include "sigdt/error.hpp"
#include "sigdt/evaluation.hpp"

using namespace sigdt;

namespace {

EvaluatedQuery query(QueryCategory c, std::size_t d, std::vector<char> correct, std::size_t k = 7) {
    EvaluatedQuery q;
    q.category = c;
    q.hardness = HardnessScore{d, k};
    q.correct = std::move(correct);
    return q;
}

}  // namespace

TEST_CASE("user threshold and global eer") {
    WriterEvaluation a;
    a.genuine_scores = {1.0, 2.0, 3.0};
    a.skilled_scores = {-1.0, 0.0};
    a.random_scores = {10.0};  // not used for the threshold
    assign_user_threshold(a);
    CHECK(a.eer == 0.0);
    CHECK(a.user_threshold == 0.5);

    WriterEvaluation b;
    b.genuine_scores = {1.0, 2.0};
    b.skilled_scores = {1.0, 2.0};
    assign_user_threshold(b);
    CHECK(b.eer == 0.5);

    const std::vector<WriterEvaluation> all{a, b};
    const auto g = global_report(all);
    CHECK(g.writers == 2);
    CHECK(g.eer == 0.25);
    CHECK(global_report(std::vector<WriterEvaluation>{}).writers == 0);
}

TEST_CASE("replication summary uses the sample deviation") {
    const auto s = summarize(std::vector<double>{0.0332, 0.0347, 0.0362});
    CHECK(s.count == 3);
    CHECK(s.mean == doctest::Approx(0.0347));
    CHECK(s.std_dev == doctest::Approx(0.0015));
    CHECK(s.formatted_percent() == "3.47 (0.15)");
    CHECK(summarize(std::vector<double>{0.02}).formatted_percent() == "2.00 (0.00)");
}

TEST_CASE("two-decimal truncation") {
    CHECK(truncate2(1.0 / 7.0) == "0.14");
    CHECK(truncate2(2.0 / 7.0) == "0.28");
    CHECK(truncate2(4.0 / 7.0) == "0.57");
    CHECK(truncate2(6.0 / 7.0) == "0.85");
    CHECK(truncate2(1.0) == "1.00");
    CHECK(truncate2(0.57) == "0.57");
    CHECK(truncate2(200.0 / 3.0) == "66.66");
    CHECK(truncate2(100.0) == "100.00");
}

TEST_CASE("categories") {
    CHECK(category_of(QueryKind::genuine) == QueryCategory::positive);
    CHECK(category_of(QueryKind::random) == QueryCategory::negative_random);
    CHECK(category_of(QueryKind::skilled) == QueryCategory::negative_skilled);
    CHECK(category_of(QueryKind::simple) == QueryCategory::negative_simple);
    CHECK(to_string(QueryCategory::negative_skilled) == "negative_skilled");
}

TEST_CASE("ih accuracy table bins") {
    const std::vector<std::string> cfgs{"R1", "R5_max"};
    const std::vector<EvaluatedQuery> qs{
        query(QueryCategory::negative_skilled, 7, {1, 1}), query(QueryCategory::negative_skilled, 7, {0, 1}),
        query(QueryCategory::negative_skilled, 7, {0, 1}), query(QueryCategory::negative_skilled, 0, {1, 0}),
        query(QueryCategory::positive, 1, {1, 1})};
    const auto t = ih_accuracy_table(qs, QueryCategory::negative_skilled, cfgs);
    REQUIRE(t.rows.size() == 8);
    CHECK(t.total() == 4);
    CHECK(t.rows[7].count == 3);
    CHECK(*t.rows[7].accuracy(0) == doctest::Approx(100.0 / 3.0));
    CHECK(*t.rows[7].accuracy(1) == 100.0);
    CHECK_FALSE(t.rows[3].accuracy(0).has_value());

    const auto text = format_ih_table(t);
    CHECK(text.find("33.33") != std::string::npos);
    CHECK(text.find("0.85") != std::string::npos);
    CHECK(text.find(" -") != std::string::npos);

    auto pooled = t;
    pooled.merge(t);
    CHECK(pooled.rows[7].count == 6);
    CHECK(pooled.rows[7].correct[1] == 6);
}

TEST_CASE("ih table errors") {
    const std::vector<std::string> cfgs{"R1"};
    EvaluatedQuery no_h;
    no_h.category = QueryCategory::positive;
    no_h.correct = {1};
    CHECK_THROWS_AS(ih_accuracy_table(std::vector<EvaluatedQuery>{no_h}, QueryCategory::positive, cfgs), DataError);
    const std::vector<EvaluatedQuery> mixed{query(QueryCategory::positive, 1, {1}, 7),
                                            query(QueryCategory::positive, 1, {1}, 5)};
    CHECK_THROWS_AS(ih_accuracy_table(mixed, QueryCategory::positive, cfgs), DataError);
    const auto a = ih_accuracy_table(std::vector<EvaluatedQuery>{query(QueryCategory::positive, 1, {1}, 7)},
                                     QueryCategory::positive, cfgs);
    auto b = ih_accuracy_table(std::vector<EvaluatedQuery>{query(QueryCategory::positive, 1, {1}, 5)},
                               QueryCategory::positive, cfgs);
    CHECK_THROWS_AS(b.merge(a), DataError);
}
