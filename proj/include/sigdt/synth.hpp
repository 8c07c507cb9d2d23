#pragma once

#include <cstddef>
#include <cstdint>

#include "sigdt/dataset.hpp"

namespace sigdt {

/// Parameters of the synthetic feature-space generator.
///
/// Every writer gets a centroid drawn from N(0, centroid_spread^2 I).
/// Genuine signatures scatter around it with `genuine_spread` per
/// coordinate. Skilled forgeries imitate the writer: the first
/// round(good_fraction * skilled) of them (lowest signature ids) are
/// "good" and scatter with `good_offset` per coordinate, the rest are "bad"
/// with `bad_offset`. Offsets and spreads are per-coordinate, so the RMS
/// coordinate distance of a sample to its centre is close to the offset.
///
/// `styles` > 1 splits each writer into sub-centres spaced by
/// `style_spread` (a writer signing in several habitual variants); genuine
/// j uses style j mod styles, while skilled forgeries scatter around the
/// writer's overall centroid (a forger reproduces the average appearance,
/// not one habit).
/// Simple forgeries are drawn around a fresh random centroid.
struct SynthConfig {
    std::size_t writers = 50;
    std::size_t dims = 32;
    std::size_t genuine = 24;
    std::size_t skilled = 10;
    std::size_t simple = 0;
    double genuine_spread = 1.0;
    double centroid_spread = 1.0;
    double good_fraction = 0.5;
    double good_offset = 1.2;
    double bad_offset = 3.0;
    std::size_t styles = 1;
    double style_spread = 0.0;

    /// Throws ConfigError on non-positive counts or spreads.
    void validate() const;

    /// Number of skilled forgeries per writer placed at `good_offset`.
    std::size_t good_forgeries() const;
};

/// Deterministic in (config, seed). Writer ids are 0..writers-1; signature
/// ids restart at 0 for each kind.
Dataset synth_generate(const SynthConfig& config, std::uint64_t seed);

}  // namespace sigdt
