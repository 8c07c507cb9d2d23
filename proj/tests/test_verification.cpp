#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sigdt/dichotomy.hpp"
#include "sigdt/error.hpp"
#include "sigdt/synth.hpp"
#include "sigdt/verification.hpp"

using namespace sigdt;

namespace {

struct Trained {
    Dataset data;
    DichotomizerModel model;
};

Trained trained_model() {
    SynthConfig cfg;
    cfg.writers = 12;
    cfg.dims = 6;
    cfg.genuine = 8;
    cfg.skilled = 4;
    cfg.centroid_spread = 1.5;
    auto ds = synth_generate(cfg, 31);
    auto samples = build_training_set(ds, {6, 3, 2, false});
    std::vector<std::vector<double>> u;
    for (const auto& s : samples) u.push_back(s.u);
    const auto scaler = StandardScaler::fit(u);
    for (auto& s : samples) scaler.apply_in_place(s.u);
    auto model = train(to_labeled(samples), {0.1, 1.0}, {}, scaler);
    return {std::move(ds), std::move(model)};
}

}  // namespace

TEST_CASE("fusion functions") {
    const std::vector<double> s{0.3, -1.0, 2.5, 2.5, 0.0};
    CHECK(fuse(s, FusionKind::max).value == 2.5);
    CHECK(fuse(s, FusionKind::max).selected == 2u);
    CHECK(fuse(s, FusionKind::min).value == -1.0);
    CHECK(fuse(s, FusionKind::min).selected == 1u);
    CHECK(fuse(s, FusionKind::mean).value == doctest::Approx(4.3 / 5.0));
    CHECK_FALSE(fuse(s, FusionKind::mean).selected.has_value());
    CHECK(fuse(s, FusionKind::median).value == 0.3);
    CHECK(fuse(std::vector<double>{4.0, 1.0, 3.0, 2.0}, FusionKind::median).value == 2.5);
    CHECK(fuse(std::vector<double>{7.0}, FusionKind::median).value == 7.0);
    CHECK_THROWS_AS(fuse(std::vector<double>{}, FusionKind::max), DataError);
}

TEST_CASE("fusion names") {
    for (const auto k : {FusionKind::max, FusionKind::min, FusionKind::mean, FusionKind::median}) {
        CHECK(parse_fusion_kind(to_string(k)) == k);
    }
    CHECK_FALSE(parse_fusion_kind("average").has_value());
}

TEST_CASE("a questioned copy of a reference scores the zero vector") {
    const auto t = trained_model();
    const auto refs_ptr = t.data.of_writer(3, SignatureKind::genuine);
    std::vector<SignatureRecord> refs;
    for (std::size_t i = 0; i < 5; ++i) refs.push_back(*refs_ptr[i]);
    SignatureRecord q = refs[2];
    q.signature_id = 99;
    const auto out = verify(t.model, q, refs, FusionKind::max, 0.0);
    REQUIRE(out.partial_scores.size() == 5);
    CHECK(out.partial_scores[2] == t.model.score(std::vector<double>(6, 0.0)));
    REQUIRE(out.selected_reference_index.has_value());
    CHECK(out.fused_score == out.partial_scores[*out.selected_reference_index]);
    for (const double s : out.partial_scores) CHECK(s <= out.fused_score);
}

TEST_CASE("decisions accept at the threshold") {
    const auto t = trained_model();
    const auto refs_ptr = t.data.of_writer(0, SignatureKind::genuine);
    const std::vector<SignatureRecord> refs{*refs_ptr[0], *refs_ptr[1]};
    const auto& q = *refs_ptr[5];
    const auto base = verify(t.model, q, refs, FusionKind::mean, 0.0);
    CHECK(verify(t.model, q, refs, FusionKind::mean, base.fused_score).decision == Decision::accept);
    CHECK(verify(t.model, q, refs, FusionKind::mean, std::nextafter(base.fused_score, 1e9)).decision ==
          Decision::reject);
    CHECK(partial_scores(t.model, q, refs) == base.partial_scores);
    CHECK_THROWS_AS(verify(t.model, q, std::vector<SignatureRecord>{}, FusionKind::max, 0.0), DataError);
}

TEST_CASE("batch verification") {
    const auto t = trained_model();
    std::istringstream manifest("# questioned,kind,claimed,refs\n0,6,genuine,0,0 1 2\n\n0,1,skilled,0,0 1 2\n1,7,genuine,0,0 1\n");
    const auto reqs = read_verification_manifest(manifest);
    REQUIRE(reqs.size() == 3);
    CHECK(reqs[1].questioned_kind == SignatureKind::skilled);
    CHECK(reqs[2].reference_ids == std::vector<std::int64_t>{0, 1});
    const auto rows = verify_batch(t.model, t.data, reqs, FusionKind::max, 0.0);
    REQUIRE(rows.size() == 3);
    std::ostringstream out;
    write_batch_outcomes(out, rows);
    const auto text = out.str();
    CHECK(text.rfind("questioned_writer,questioned_signature,questioned_kind,claimed_writer,fused_score,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);

    std::istringstream missing("0,6,genuine,0,0 1 77\n");
    const auto bad = read_verification_manifest(missing);
    CHECK_THROWS_AS(verify_batch(t.model, t.data, bad, FusionKind::max, 0.0), DataError);
    std::istringstream malformed("0,6,genuine,0\n");
    CHECK_THROWS_AS(read_verification_manifest(malformed), ParseError);
}
