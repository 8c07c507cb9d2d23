#include "sigdt/scaler.hpp"

#include <algorithm>
#include <cmath>

#include "sigdt/error.hpp"

namespace sigdt {

StandardScaler::StandardScaler(std::vector<double> means, std::vector<double> std_devs)
    : means_(std::move(means)), std_devs_(std::move(std_devs)) {
    if (means_.size() != std_devs_.size()) throw DimensionError("scaler means/std_devs length mismatch");
    for (double s : std_devs_) {
        if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("scaler std_devs must be positive");
    }
}

StandardScaler StandardScaler::identity(std::size_t n) {
    return StandardScaler(std::vector<double>(n, 0.0), std::vector<double>(n, 1.0));
}

StandardScaler StandardScaler::fit(std::span<const std::vector<double>> samples) {
    if (samples.empty()) throw DataError("cannot fit a scaler on an empty collection");
    const std::size_t n = samples.front().size();
    std::vector<double> mean(n, 0.0);
    for (const auto& s : samples) {
        if (s.size() != n) throw DimensionError("ragged sample collection");
        for (std::size_t i = 0; i < n; ++i) mean[i] += s[i];
    }
    const auto count = static_cast<double>(samples.size());
    for (auto& m : mean) m /= count;

    // second pass on centred values for accuracy
    std::vector<double> var(n, 0.0);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = s[i] - mean[i];
            var[i] += d * d;
        }
    }
    std::vector<double> sd(n);
    for (std::size_t i = 0; i < n; ++i) {
        sd[i] = std::sqrt(var[i] / count);
        // constant dimensions (up to summation rounding) keep a unit divisor
        if (!(sd[i] > 1e-12 * std::max(1.0, std::abs(mean[i])))) sd[i] = 1.0;
    }
    return StandardScaler(std::move(mean), std::move(sd));
}

std::vector<double> StandardScaler::apply(std::span<const double> v) const {
    std::vector<double> out(v.begin(), v.end());
    apply_in_place(out);
    return out;
}

void StandardScaler::apply_in_place(std::span<double> v) const {
    if (v.size() != means_.size()) {
        throw DimensionError("scaler expects length " + std::to_string(means_.size()) + ", got " +
                             std::to_string(v.size()));
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] - means_[i]) / std_devs_[i];
}

}  // namespace sigdt
