#include <doctest.h>

#include <random>

#include "sigdt/error.hpp"
#include "sigdt/hardness.hpp"
#include "support.hpp"

using namespace sigdt;

namespace {

LabeledVectors cluster(std::size_t pos, std::size_t neg) {
    LabeledVectors lv;
    for (std::size_t i = 0; i < pos; ++i) {
        lv.x.push_back({0.1 * static_cast<double>(i), 0.0});
        lv.y.push_back(1);
    }
    for (std::size_t i = 0; i < neg; ++i) {
        lv.x.push_back({10.0 + static_cast<double>(i), 10.0});
        lv.y.push_back(-1);
    }
    return lv;
}

}  // namespace

TEST_CASE("kdn examples") {
    const auto lv = cluster(7, 7);
    const std::vector<double> q{0.2, 0.1};
    CHECK(kdn(q, 1, lv, 7).value() == 0.0);
    CHECK(kdn(q, -1, lv, 7).value() == 1.0);
    CHECK(kdn(q, -1, lv, 7) == HardnessScore{7, 7});

    auto mixed = cluster(4, 7);
    const auto h = kdn(q, 1, mixed, 7);
    CHECK(h.disagreeing == 3);
    CHECK(h.value() == doctest::Approx(3.0 / 7.0));
}

TEST_CASE("distance ties go to the lower training index") {
    LabeledVectors lv;
    lv.x = {{1.0}, {-1.0}, {1.0}, {-1.0}, {2.0}};
    lv.y = {1, -1, -1, 1, 1};
    const auto nn = nearest_neighbors(std::vector<double>{0.0}, lv.x, 3);
    REQUIRE(nn.size() == 3);
    CHECK(nn[0].index == 0);
    CHECK(nn[1].index == 1);
    CHECK(nn[2].index == 2);
    CHECK(nn[0].distance == 1.0);
    CHECK(kdn(std::vector<double>{0.0}, 1, lv, 3).disagreeing == 2);
}

TEST_CASE("kdn errors") {
    const auto lv = cluster(3, 2);
    CHECK_THROWS_AS(kdn(std::vector<double>{0.0, 0.0}, 1, lv, 0), ConfigError);
    CHECK_THROWS_AS(kdn(std::vector<double>{0.0, 0.0}, 1, lv, 6), DataError);
    CHECK_THROWS_AS(kdn(std::vector<double>{0.0}, 1, lv, 2), DimensionError);
}

TEST_CASE("kdn matches a full-sort scan") {
    std::mt19937_64 gen(17);
    for (const std::size_t n : {50u, 200u, 1000u}) {
        std::uniform_int_distribution<int> coarse(0, 3);  // many exact ties
        std::normal_distribution<double> fine;
        LabeledVectors lv;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> x(4);
            for (auto& v : x) v = i % 3 == 0 ? coarse(gen) : fine(gen);
            lv.x.push_back(std::move(x));
            lv.y.push_back(gen() % 2 == 0 ? 1 : -1);
        }
        for (int t = 0; t < 20; ++t) {
            std::vector<double> q(4);
            for (auto& v : q) v = t % 2 == 0 ? coarse(gen) : fine(gen);
            const int label = t % 3 == 0 ? 1 : -1;
            const auto nn = nearest_neighbors(q, lv.x, 7);
            const auto expected = oracle::knn(q, lv.x, 7);
            for (std::size_t i = 0; i < 7; ++i) CHECK(nn[i].index == expected[i]);
            CHECK(kdn(q, label, lv, 7).disagreeing == oracle::kdn_disagreeing(q, label, lv.x, lv.y, 7));
        }
    }
}

TEST_CASE("forgery quality threshold") {
    CHECK(classify_forgery_quality({3, 7}) == ForgeryQuality::bad);
    CHECK(classify_forgery_quality({4, 7}) == ForgeryQuality::good);
    CHECK(classify_forgery_quality({2, 4}) == ForgeryQuality::bad);  // exactly one half
    CHECK(classify_forgery_quality({0, 7}) == ForgeryQuality::bad);
    CHECK(classify_forgery_quality({7, 7}) == ForgeryQuality::good);
}
