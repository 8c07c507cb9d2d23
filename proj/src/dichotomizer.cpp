#include "sigdt/dichotomizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "kernel_cache.hpp"
#include "sigdt/error.hpp"
#include "sigdt/metrics.hpp"

namespace sigdt {

using nlohmann::json;

void KernelParams::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("kernel gamma must be positive");
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("box constraint C must be positive");
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

// ---------------------------------------------------------------------------
// model

DichotomizerModel::DichotomizerModel(std::vector<std::vector<double>> support_vectors,
                                     std::vector<double> dual_coefficients, double bias, KernelParams params,
                                     StandardScaler scaler)
    : support_vectors_(std::move(support_vectors)),
      dual_coefficients_(std::move(dual_coefficients)),
      bias_(bias),
      params_(params),
      scaler_(std::move(scaler)) {
    params_.validate();
    if (support_vectors_.size() != dual_coefficients_.size()) {
        throw DimensionError("support vector / coefficient count mismatch");
    }
    for (const auto& sv : support_vectors_) {
        if (sv.size() != scaler_.size()) throw DimensionError("support vector length does not match the scaler");
    }
}

double DichotomizerModel::decision_value(std::span<const double> u) const {
    if (u.size() != scaler_.size()) {
        throw DimensionError("model expects dissimilarity vectors of length " + std::to_string(scaler_.size()) +
                             ", got " + std::to_string(u.size()));
    }
    double f = 0.0;
    for (std::size_t i = 0; i < support_vectors_.size(); ++i) {
        f += dual_coefficients_[i] * rbf_kernel(support_vectors_[i], u, params_.gamma);
    }
    return f + bias_;
}

double DichotomizerModel::score(std::span<const double> raw_u) const {
    return decision_value(scaler_.apply(raw_u));
}

std::string DichotomizerModel::to_json() const {
    json j;
    j["format"] = "sigdt-dichotomizer";
    j["version"] = 1;
    j["kernel"] = "rbf";
    j["gamma"] = params_.gamma;
    j["c"] = params_.c;
    j["bias"] = bias_;
    j["dims"] = scaler_.size();
    j["scaler"] = {{"means", scaler_.means()}, {"std_devs", scaler_.std_devs()}};
    j["support_vectors"] = support_vectors_;
    j["dual_coefficients"] = dual_coefficients_;
    return j.dump(1) + "\n";
}

DichotomizerModel DichotomizerModel::from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.at("format").get<std::string>() != "sigdt-dichotomizer") throw ParseError("not a dichotomizer model", 0);
        if (j.at("version").get<int>() != 1) throw ParseError("unsupported model version", 0);
        if (j.at("kernel").get<std::string>() != "rbf") throw ParseError("unsupported kernel", 0);
        StandardScaler scaler(j.at("scaler").at("means").get<std::vector<double>>(),
                              j.at("scaler").at("std_devs").get<std::vector<double>>());
        if (j.at("dims").get<std::size_t>() != scaler.size()) throw ParseError("dims does not match scaler", 0);
        return DichotomizerModel(j.at("support_vectors").get<std::vector<std::vector<double>>>(),
                                 j.at("dual_coefficients").get<std::vector<double>>(), j.at("bias").get<double>(),
                                 {j.at("gamma").get<double>(), j.at("c").get<double>()}, std::move(scaler));
    } catch (const json::exception& e) {
        throw ParseError(std::string("model: ") + e.what(), 0);
    }
}

void DichotomizerModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model " + path.string());
    out << to_json();
    if (!out) throw Error("write failed for " + path.string());
}

DichotomizerModel DichotomizerModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

// ---------------------------------------------------------------------------
// SMO

namespace {

void check_training_input(const LabeledVectors& s) {
    if (s.x.empty()) throw DataError("train: empty training set");
    if (s.x.size() != s.y.size()) throw DimensionError("train: label count mismatch");
    bool pos = false, neg = false;
    for (const auto label : s.y) {
        if (label == 1) pos = true;
        else if (label == -1) neg = true;
        else throw DataError("train: labels must be +1 or -1");
    }
    for (const auto& v : s.x) {
        if (v.size() != s.x.front().size()) throw DimensionError("train: ragged training set");
    }
    if (!pos || !neg) throw DataError("train: single-class input (both positive and negative samples required)");
}

struct Extremes {
    std::size_t up = 0, low = 0;
    double e_up = std::numeric_limits<double>::infinity();    // min E over I_up
    double e_low = -std::numeric_limits<double>::infinity();  // max E over I_low
    double gap() const { return e_low - e_up; }
};

// I_up: alpha may increase along y (y=+1, a<C or y=-1, a>0)
// I_low: alpha may decrease along y (y=-1, a<C or y=+1, a>0)
Extremes find_extremes(const std::vector<double>& alpha, const std::vector<int>& y, const std::vector<double>& err,
                       double c) {
    Extremes ex;
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        const bool below = alpha[t] < c;
        const bool above = alpha[t] > 0.0;
        const bool in_up = y[t] > 0 ? below : above;
        const bool in_low = y[t] > 0 ? above : below;
        if (in_up && err[t] < ex.e_up) {
            ex.e_up = err[t];
            ex.up = t;
        }
        if (in_low && err[t] > ex.e_low) {
            ex.e_low = err[t];
            ex.low = t;
        }
    }
    return ex;
}

}  // namespace

SmoResult train_smo(const LabeledVectors& samples, const KernelParams& params, const SmoOptions& options,
                    StandardScaler scaler) {
    params.validate();
    if (!(options.tol > 0.0)) throw ConfigError("SMO tolerance must be positive");
    check_training_input(samples);
    if (scaler.size() != samples.x.front().size()) throw DimensionError("scaler length does not match samples");

    const std::size_t n = samples.x.size();
    const auto& y = samples.y;
    const double c = params.c;
    detail::KernelCache cache(samples.x, params.gamma, options.cache_mb * 1024 * 1024);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> err(n);  // E_t = sum_l alpha_l y_l K_lt - y_t
    for (std::size_t t = 0; t < n; ++t) err[t] = -y[t];

    const std::size_t budget = std::max<std::size_t>(1, options.max_passes) * n;
    std::size_t iter = 0;
    bool refreshed = false;
    while (true) {
        Extremes ex = find_extremes(alpha, y, err, c);
        if (ex.gap() <= options.tol) {
            if (refreshed) break;
            // recompute E from scratch so accumulated update rounding cannot
            // hide a violation, then confirm convergence
            std::fill(err.begin(), err.end(), 0.0);
            for (std::size_t l = 0; l < n; ++l) {
                if (alpha[l] == 0.0) continue;
                const auto row = cache.row(l);
                const double w = alpha[l] * y[l];
                for (std::size_t t = 0; t < n; ++t) err[t] += w * row[t];
            }
            for (std::size_t t = 0; t < n; ++t) err[t] -= y[t];
            refreshed = true;
            continue;
        }
        refreshed = false;
        if (iter >= budget) {
            throw ConvergenceError("SMO did not converge within " + std::to_string(budget) +
                                       " iterations (KKT violation " + std::to_string(ex.gap()) + ")",
                                   ex.gap());
        }
        ++iter;

        const std::size_t i = ex.up;
        const std::size_t j = ex.low;
        const auto row_i = cache.row(i);
        const auto row_j = cache.row(j);
        const double kij = row_i[j];
        const double eta = std::max(row_i[i] + row_j[j] - 2.0 * kij, 1e-12);

        const double ai = alpha[i], aj = alpha[j];
        double lo, hi;
        if (y[i] != y[j]) {
            lo = std::max(0.0, aj - ai);
            hi = std::min(c, c + aj - ai);
        } else {
            lo = std::max(0.0, ai + aj - c);
            hi = std::min(c, ai + aj);
        }
        double aj_new = std::clamp(aj + y[j] * (err[i] - err[j]) / eta, lo, hi);
        double ai_new = ai + y[i] * y[j] * (aj - aj_new);
        // snap to the box so bound membership is exact
        const double snap = 1e-12 * c;
        auto clip = [&](double a) {
            if (a < snap) return 0.0;
            if (a > c - snap) return c;
            return a;
        };
        if (clip(ai_new) != ai || clip(aj_new) != aj) {
            ai_new = clip(ai_new);
            aj_new = clip(aj_new);
        } else {
            ai_new = std::clamp(ai_new, 0.0, c);
        }

        const double di = (ai_new - ai) * y[i];
        const double dj = (aj_new - aj) * y[j];
        if (di == 0.0 && dj == 0.0) {
            throw ConvergenceError("SMO stalled on a non-improving pair (KKT violation " +
                                       std::to_string(ex.gap()) + ")",
                                   ex.gap());
        }
        alpha[i] = ai_new;
        alpha[j] = aj_new;
        const auto ri = cache.row(i);
        const auto rj = cache.row(j);
        for (std::size_t t = 0; t < n; ++t) err[t] += di * ri[t] + dj * rj[t];
    }

    // bias: mean of y - f_nobias over free vectors, else midpoint of the feasible interval
    double bias_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0 && alpha[t] < c) {
            bias_sum += -err[t];
            ++free_count;
        }
    }
    double bias;
    if (free_count > 0) {
        bias = bias_sum / static_cast<double>(free_count);
    } else {
        const Extremes ex = find_extremes(alpha, y, err, c);
        bias = -(ex.e_up + ex.e_low) / 2.0;
    }

    std::vector<std::vector<double>> svs;
    std::vector<double> coef;
    double objective = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        objective += alpha[t] - 0.5 * alpha[t] * (y[t] * err[t] + 1.0);
        if (alpha[t] > 0.0) {
            svs.push_back(samples.x[t]);
            coef.push_back(alpha[t] * y[t]);
        }
    }

    SmoResult result{DichotomizerModel(std::move(svs), std::move(coef), bias, params, std::move(scaler)),
                     std::move(alpha), objective, 0.0, iter};
    double worst = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yf = y[t] * (err[t] + y[t] + bias);
        const double a = result.alpha[t];
        double v;
        if (a <= 0.0) v = std::max(0.0, 1.0 - yf);
        else if (a >= c) v = std::max(0.0, yf - 1.0);
        else v = std::abs(yf - 1.0);
        worst = std::max(worst, v);
    }
    result.max_kkt_violation = worst;
    return result;
}

DichotomizerModel train(const LabeledVectors& samples, const KernelParams& params, const SmoOptions& options,
                        StandardScaler scaler) {
    return train_smo(samples, params, options, std::move(scaler)).model;
}

double dual_objective(const LabeledVectors& samples, std::span<const double> alpha, const KernelParams& params) {
    const std::size_t n = samples.x.size();
    double linear = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        linear += alpha[i];
        for (std::size_t j = 0; j < n; ++j) {
            quad += alpha[i] * alpha[j] * samples.y[i] * samples.y[j] *
                    rbf_kernel(samples.x[i], samples.x[j], params.gamma);
        }
    }
    return linear - 0.5 * quad;
}

double max_kkt_violation(const DichotomizerModel& model, const LabeledVectors& samples,
                         std::span<const double> alpha) {
    const double c = model.params().c;
    double worst = 0.0;
    for (std::size_t t = 0; t < samples.x.size(); ++t) {
        const double yf = samples.y[t] * model.decision_value(samples.x[t]);
        double v;
        if (alpha[t] <= 0.0) v = std::max(0.0, 1.0 - yf);
        else if (alpha[t] >= c) v = std::max(0.0, yf - 1.0);
        else v = std::abs(yf - 1.0);
        worst = std::max(worst, v);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// model selection

std::vector<double> default_c_grid() { return {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}; }

std::vector<double> default_gamma_grid() { return {0x1p-11, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0}; }

GridSearchResult grid_search(const LabeledVectors& train_set, const LabeledVectors& validation,
                             std::span<const double> c_grid, std::span<const double> gamma_grid,
                             const SmoOptions& options, const StandardScaler& scaler) {
    if (c_grid.empty() || gamma_grid.empty()) throw ConfigError("grid search: empty parameter grid");
    std::vector<double> cs(c_grid.begin(), c_grid.end());
    std::vector<double> gammas(gamma_grid.begin(), gamma_grid.end());
    std::sort(cs.begin(), cs.end());
    std::sort(gammas.begin(), gammas.end());

    GridSearchResult result;
    double best_eer = std::numeric_limits<double>::infinity();
    for (const double c : cs) {
        for (const double gamma : gammas) {
            const KernelParams p{gamma, c};
            double eer = 1.0;  // a candidate that fails to converge ranks last
            try {
                const auto model = train(train_set, p, options, scaler);
                std::vector<double> pos, neg;
                for (std::size_t t = 0; t < validation.x.size(); ++t) {
                    (validation.y[t] > 0 ? pos : neg).push_back(model.decision_value(validation.x[t]));
                }
                eer = user_threshold_eer(pos, neg).eer;
            } catch (const ConvergenceError&) {
            }
            result.evaluated.push_back({p, eer});
            if (eer < best_eer) {
                best_eer = eer;
                result.best = p;
            }
        }
    }
    return result;
}

}  // namespace sigdt
