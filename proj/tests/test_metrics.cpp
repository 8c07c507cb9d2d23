#include <doctest.h>

#include <cmath>
#include <random>

#include "sigdt/error.hpp"
#include "sigdt/metrics.hpp"
#include "support.hpp"

using namespace sigdt;

TEST_CASE("eer on separable scores is zero") {
    const std::vector<double> g{0.9, 1.1, 2.0}, f{-1.0, 0.1, 0.2, 0.5};
    const auto r = user_threshold_eer(g, f);
    CHECK(r.eer == 0.0);
    CHECK(r.far == 0.0);
    CHECK(r.frr == 0.0);
    CHECK(r.threshold > 0.5);
    CHECK(r.threshold <= 0.9);
    CHECK(r.threshold == doctest::Approx(0.7));
}

TEST_CASE("eer on identical score sets is one half") {
    for (const std::vector<double>& s : {std::vector<double>{1.0, 2.0, 3.0}, std::vector<double>{0.5, 0.5},
                                         std::vector<double>{-1.0, 0.0, 4.0, 7.0}}) {
        CHECK(user_threshold_eer(s, s).eer == 0.5);
    }
}

TEST_CASE("eer with a single overlap") {
    // genuine {1,2,3,4}, forgery {0, 2.5}: at t=2 FRR=1/4, FAR=1/2; at t=2.25 FRR=1/2, FAR=1/2
    const std::vector<double> g{1, 2, 3, 4}, f{0, 2.5};
    const auto r = user_threshold_eer(g, f);
    CHECK(r.eer == 0.5);
    CHECK(r.threshold == 2.25);
    const auto o = oracle::eer_sweep(g, f);
    CHECK(o.threshold == r.threshold);
}

TEST_CASE("forgeries above genuines give an eer above one half") {
    const auto r = user_threshold_eer(std::vector<double>{0.0}, std::vector<double>{1.0});
    CHECK(r.eer == 1.0);
    CHECK(r.eer <= 1.0);
}

TEST_CASE("eer matches the exhaustive sweep") {
    std::mt19937_64 gen(23);
    for (int t = 0; t < 300; ++t) {
        std::uniform_int_distribution<int> sz(1, 30);
        std::vector<double> g(static_cast<std::size_t>(sz(gen))), f(static_cast<std::size_t>(sz(gen)));
        if (t % 2 == 0) {
            std::uniform_int_distribution<int> coarse(0, 6);  // heavy ties
            for (auto& v : g) v = coarse(gen);
            for (auto& v : f) v = coarse(gen) - 1;
        } else {
            std::normal_distribution<double> nd;
            for (auto& v : g) v = nd(gen) + 1.0;
            for (auto& v : f) v = nd(gen);
        }
        const auto r = user_threshold_eer(g, f);
        const auto o = oracle::eer_sweep(g, f);
        CHECK(r.eer == o.eer);
        CHECK(r.far == o.far);
        CHECK(r.frr == o.frr);
        CHECK(r.threshold == o.threshold);
        CHECK(r.eer >= 0.0);
        CHECK(r.eer <= 1.0);
    }
}

TEST_CASE("eer rejects empty score sets") {
    CHECK_THROWS_AS(user_threshold_eer(std::vector<double>{}, std::vector<double>{1.0}), DataError);
    CHECK_THROWS_AS(user_threshold_eer(std::vector<double>{1.0}, std::vector<double>{}), DataError);
}
