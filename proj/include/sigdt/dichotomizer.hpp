#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sigdt/dichotomy.hpp"
#include "sigdt/scaler.hpp"

namespace sigdt {

/// RBF kernel k(a, b) = exp(-gamma * |a - b|^2) with soft-margin box C.
struct KernelParams {
    double gamma = 0x1p-11;
    double c = 1.0;

    void validate() const;
    friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

struct SmoOptions {
    double tol = 1e-3;
    /// Iteration budget is max_passes * N pair updates.
    std::size_t max_passes = 1000;
    /// Kernel row cache size in MiB (at least two rows are always kept).
    std::size_t cache_mb = 256;
};

/// Trained kernel dichotomizer. Positive output means the within-writer
/// (genuine) side of the hyperplane. Immutable once built.
class DichotomizerModel {
public:
    DichotomizerModel(std::vector<std::vector<double>> support_vectors, std::vector<double> dual_coefficients,
                      double bias, KernelParams params, StandardScaler scaler);

    /// f(u) = sum_i coef_i k(sv_i, u) + bias, for u already in the scaler's
    /// output space. Throws DimensionError on a length mismatch.
    double decision_value(std::span<const double> u) const;

    /// Standardizes a raw dissimilarity vector with the embedded scaler,
    /// then evaluates decision_value.
    double score(std::span<const double> raw_u) const;

    std::size_t dimensionality() const noexcept { return scaler_.size(); }
    const std::vector<std::vector<double>>& support_vectors() const noexcept { return support_vectors_; }
    const std::vector<double>& dual_coefficients() const noexcept { return dual_coefficients_; }
    double bias() const noexcept { return bias_; }
    const KernelParams& params() const noexcept { return params_; }
    const StandardScaler& scaler() const noexcept { return scaler_; }

    /// Versioned JSON text container; doubles round-trip exactly.
    std::string to_json() const;
    static DichotomizerModel from_json(const std::string& text);
    void save(const std::filesystem::path& path) const;
    static DichotomizerModel load(const std::filesystem::path& path);

private:
    std::vector<std::vector<double>> support_vectors_;
    std::vector<double> dual_coefficients_;
    double bias_;
    KernelParams params_;
    StandardScaler scaler_;
};

/// Full solver output, including the dual variables for every training
/// sample (in input order).
struct SmoResult {
    DichotomizerModel model;
    std::vector<double> alpha;
    double dual_objective = 0.0;
    double max_kkt_violation = 0.0;
    std::size_t iterations = 0;
};

/// Soft-margin dual solved by SMO. Each step optimizes the pair (i, j)
/// with i = argmin E over the indices whose alpha may move up and
/// j = argmax E over those that may move down (E = f - y without bias), i.e.
/// the feasible pair with the largest |E_i - E_j|. Stops when
/// max E_low - min E_up <= tol, which bounds every KKT residual by tol.
/// The bias is the mean of y - f over free support vectors.
///
/// Labels are +1 / -1. `scaler` is embedded into the model unchanged and
/// the samples must already be in its output space.
///
/// Throws DataError on single-class or empty input and ConvergenceError
/// (carrying the remaining violation) when the budget runs out.
SmoResult train_smo(const LabeledVectors& samples, const KernelParams& params, const SmoOptions& options,
                    StandardScaler scaler);

DichotomizerModel train(const LabeledVectors& samples, const KernelParams& params, const SmoOptions& options,
                        StandardScaler scaler);

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j k(x_i, x_j),
/// evaluated directly.
double dual_objective(const LabeledVectors& samples, std::span<const double> alpha, const KernelParams& params);

/// Largest KKT residual of the model over the training samples:
/// alpha = 0 needs y f >= 1, alpha = C needs y f <= 1, otherwise y f = 1.
double max_kkt_violation(const DichotomizerModel& model, const LabeledVectors& samples,
                         std::span<const double> alpha);

struct GridPoint {
    KernelParams params;
    double validation_eer = 0.0;
};

struct GridSearchResult {
    KernelParams best;
    std::vector<GridPoint> evaluated;  // in (C, gamma) ascending order
};

/// Trains one model per (C, gamma) pair on `train_set` and keeps the pair
/// with the lowest validation EER (positive vs negative scores). Ties go to
/// the smaller C, then the smaller gamma. Both sets must already be in the
/// scaler's output space.
GridSearchResult grid_search(const LabeledVectors& train_set, const LabeledVectors& validation,
                             std::span<const double> c_grid, std::span<const double> gamma_grid,
                             const SmoOptions& options, const StandardScaler& scaler);

/// C and gamma grids used for model selection.
std::vector<double> default_c_grid();
std::vector<double> default_gamma_grid();

}  // namespace sigdt
