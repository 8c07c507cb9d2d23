#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sigdt {

/// Per-dimension standardization to zero mean and unit variance.
///
/// Fitted once on the training dissimilarity vectors; the same statistics
/// are applied verbatim to every later vector, including vectors from other
/// datasets. Dimensions with zero variance keep a divisor of 1.
class StandardScaler {
public:
    StandardScaler() = default;
    StandardScaler(std::vector<double> means, std::vector<double> std_devs);

    /// Identity transform of the given length.
    static StandardScaler identity(std::size_t n);

    /// Population mean and standard deviation per dimension. Throws
    /// DataError on empty input and DimensionError on ragged input.
    static StandardScaler fit(std::span<const std::vector<double>> samples);

    std::vector<double> apply(std::span<const double> v) const;
    void apply_in_place(std::span<double> v) const;

    std::size_t size() const noexcept { return means_.size(); }
    const std::vector<double>& means() const noexcept { return means_; }
    const std::vector<double>& std_devs() const noexcept { return std_devs_; }

    friend bool operator==(const StandardScaler&, const StandardScaler&) = default;

private:
    std::vector<double> means_;
    std::vector<double> std_devs_;
};

}  // namespace sigdt
