#include "sigdt/synth.hpp"

#include <cmath>

#include "sigdt/error.hpp"
#include "sigdt/random.hpp"

namespace sigdt {

void SynthConfig::validate() const {
    if (writers == 0) throw ConfigError("synth: writers must be positive");
    if (dims == 0) throw ConfigError("synth: dims must be positive");
    if (genuine == 0) throw ConfigError("synth: genuine must be positive");
    if (styles == 0) throw ConfigError("synth: styles must be positive");
    if (!(genuine_spread > 0.0)) throw ConfigError("synth: genuine_spread must be positive");
    if (!(centroid_spread > 0.0)) throw ConfigError("synth: centroid_spread must be positive");
    if (!(good_offset > 0.0) || !(bad_offset > 0.0)) throw ConfigError("synth: forgery offsets must be positive");
    if (!(good_offset < bad_offset)) throw ConfigError("synth: good_offset must be smaller than bad_offset");
    if (!(good_fraction >= 0.0 && good_fraction <= 1.0)) throw ConfigError("synth: good_fraction must be in [0,1]");
    if (!(style_spread >= 0.0)) throw ConfigError("synth: style_spread must be non-negative");
}

std::size_t SynthConfig::good_forgeries() const {
    return static_cast<std::size_t>(std::llround(good_fraction * static_cast<double>(skilled)));
}

namespace {

FeatureVector around(Rng& rng, const FeatureVector& centre, double spread) {
    FeatureVector v(centre.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = centre[i] + spread * rng.normal();
    return v;
}

}  // namespace

Dataset synth_generate(const SynthConfig& config, std::uint64_t seed) {
    config.validate();
    Dataset ds;
    ds.name = "synthetic";
    ds.dimensionality = config.dims;
    ds.records.reserve(config.writers * (config.genuine + config.skilled + config.simple));

    const FeatureVector origin(config.dims, 0.0);
    const std::size_t good = config.good_forgeries();

    for (std::size_t w = 0; w < config.writers; ++w) {
        // one stream per writer so writers can be generated independently
        Rng rng(derive_seed(seed, w));
        const auto writer_id = static_cast<std::int64_t>(w);
        const FeatureVector centroid = around(rng, origin, config.centroid_spread);

        std::vector<FeatureVector> style_centres;
        for (std::size_t s = 0; s < config.styles; ++s) {
            style_centres.push_back(config.styles == 1 ? centroid : around(rng, centroid, config.style_spread));
        }

        for (std::size_t j = 0; j < config.genuine; ++j) {
            ds.records.push_back({writer_id, static_cast<std::int64_t>(j), SignatureKind::genuine,
                                  around(rng, style_centres[j % config.styles], config.genuine_spread)});
        }
        for (std::size_t j = 0; j < config.skilled; ++j) {
            const double offset = j < good ? config.good_offset : config.bad_offset;
            ds.records.push_back(
                {writer_id, static_cast<std::int64_t>(j), SignatureKind::skilled, around(rng, centroid, offset)});
        }
        for (std::size_t j = 0; j < config.simple; ++j) {
            const FeatureVector elsewhere = around(rng, origin, config.centroid_spread);
            ds.records.push_back({writer_id, static_cast<std::int64_t>(j), SignatureKind::simple,
                                  around(rng, elsewhere, config.genuine_spread)});
        }
    }
    return ds;
}

}  // namespace sigdt
