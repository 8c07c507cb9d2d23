// Independent reference implementations and fixtures shared by the tests.
// Nothing here calls into the code under test except for data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "sigdt/dichotomy.hpp"
#include "sigdt/hardness.hpp"
#include "sigdt/metrics.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

/// Full sort of all training points by (squared distance, index).
inline std::vector<std::size_t> knn(const std::vector<double>& q, const Matrix& pts, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < pts.size(); ++i) all.emplace_back(sq_dist(q, pts[i]), i);
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].second);
    return out;
}

inline std::size_t kdn_disagreeing(const std::vector<double>& q, int label, const Matrix& pts,
                                   const std::vector<int>& y, std::size_t k) {
    std::size_t d = 0;
    for (const auto i : knn(q, pts, k)) d += y[i] != label ? 1 : 0;
    return d;
}

/// 1-NN label over a subset of the points (ties to the lower index).
inline int nn_label(const std::vector<double>& q, const Matrix& pts, const std::vector<int>& y,
                    const std::vector<std::size_t>& subset) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (const auto i : subset) {
        const double d = sq_dist(q, pts[i]);
        if (d < best || (d == best && i < arg)) {
            best = d;
            arg = i;
        }
    }
    return y[arg];
}

/// Exhaustive threshold sweep: every distinct score, every midpoint, and
/// both infinities, each counted by a direct loop. Smallest threshold among
/// the exact minima of |FAR - FRR|.
inline sigdt::ThresholdEer eer_sweep(const std::vector<double>& g, const std::vector<double>& f) {
    std::vector<double> v = g;
    v.insert(v.end(), f.begin(), f.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    std::vector<double> t{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < v.size(); ++i) {
        t.push_back(v[i]);
        if (i + 1 < v.size()) t.push_back(v[i] + (v[i + 1] - v[i]) / 2.0);
    }
    std::sort(t.begin(), t.end());
    sigdt::ThresholdEer best;
    long long best_num = -1;  // |FAR - FRR| * |g| * |f|
    for (const double th : t) {
        long long rej = 0, acc = 0;
        for (double s : g) rej += s < th ? 1 : 0;
        for (double s : f) acc += s >= th ? 1 : 0;
        const long long num = std::llabs(acc * static_cast<long long>(g.size()) - rej * static_cast<long long>(f.size()));
        if (best_num < 0 || num < best_num) {
            best_num = num;
            best.threshold = th;
            best.far = static_cast<double>(acc) / static_cast<double>(f.size());
            best.frr = static_cast<double>(rej) / static_cast<double>(g.size());
            best.eer = (best.far + best.frr) / 2.0;
        }
    }
    return best;
}

inline double rbf(const std::vector<double>& a, const std::vector<double>& b, double gamma) {
    return std::exp(-gamma * sq_dist(a, b));
}

inline Matrix gram(const Matrix& x, double gamma) {
    Matrix k(x.size(), std::vector<double>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) k[i][j] = rbf(x[i], x[j], gamma);
    return k;
}

inline double dual_value(const Matrix& k, const std::vector<int>& y, const std::vector<double>& a) {
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        lin += a[i];
        for (std::size_t j = 0; j < a.size(); ++j) quad += a[i] * a[j] * y[i] * y[j] * k[i][j];
    }
    return lin - 0.5 * quad;
}

/// Euclidean projection onto {0 <= a <= C, y'a = 0}: a_i = clip(v_i - lambda y_i)
/// with lambda found by bisection.
inline std::vector<double> project(const std::vector<double>& v, const std::vector<int>& y, double c) {
    auto residual = [&](double lambda) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += y[i] * std::clamp(v[i] - lambda * y[i], 0.0, c);
        return s;
    };
    double lo = -1.0, hi = 1.0;
    while (residual(lo) < 0.0) lo *= 2.0;
    while (residual(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0.0 ? lo : hi) = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    std::vector<double> a(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::clamp(v[i] - lambda * y[i], 0.0, c);
    return a;
}

/// Accelerated projected gradient ascent on the SVM dual (with restarts).
inline double qp_projected_gradient(const Matrix& k, const std::vector<int>& y, double c,
                                    std::size_t iterations = 20000) {
    const std::size_t n = y.size();
    // Lipschitz constant of the gradient: largest eigenvalue of Q by power iteration
    std::vector<double> p(n, 1.0);
    double lip = 1.0;
    for (int it = 0; it < 500; ++it) {
        std::vector<double> q(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) q[i] += y[i] * y[j] * k[i][j] * p[j];
        const double norm = std::sqrt(std::inner_product(q.begin(), q.end(), q.begin(), 0.0));
        lip = norm;
        for (std::size_t i = 0; i < n; ++i) p[i] = q[i] / norm;
    }
    const double step = 1.0 / (lip * 1.01);
    std::vector<double> a(n, 0.0), z = a;
    double t = 1.0, value = dual_value(k, y, a);
    for (std::size_t it = 0; it < iterations; ++it) {
        std::vector<double> grad(n, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) grad[i] -= y[i] * y[j] * k[i][j] * z[j];
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = z[i] + step * grad[i];
        auto next = project(v, y, c);
        const double next_value = dual_value(k, y, next);
        if (next_value < value) {  // restart momentum
            t = 1.0;
            z = a;
            continue;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        for (std::size_t i = 0; i < n; ++i) z[i] = next[i] + (t - 1.0) / t_next * (next[i] - a[i]);
        a = std::move(next);
        value = next_value;
        t = t_next;
    }
    return value;
}

/// Solves A x = b by Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve(Matrix a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) return std::nullopt;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t cc = col; cc < n; ++cc) a[r][cc] -= f * a[col][cc];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t cc = r + 1; cc < n; ++cc) s -= a[r][cc] * x[cc];
        x[r] = s / a[r][r];
    }
    return x;
}

/// Exact dual optimum by enumerating every (at 0, at C, free) assignment and
/// solving the equality-constrained stationarity system on the free set.
inline double qp_enumerate(const Matrix& k, const std::vector<int>& y, double c) {
    const std::size_t n = y.size();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) combos *= 3;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t code = 0; code < combos; ++code) {
        std::vector<int> state(n);  // 0: zero, 1: C, 2: free
        std::size_t rest = code;
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        std::vector<double> a(n, 0.0);
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i) {
            if (state[i] == 1) a[i] = c;
            if (state[i] == 2) free.push_back(i);
        }
        if (free.empty()) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += y[i] * a[i];
            if (std::abs(s) < 1e-12) best = std::max(best, dual_value(k, y, a));
            continue;
        }
        const std::size_t m = free.size();
        Matrix sys(m + 1, std::vector<double>(m + 1, 0.0));
        std::vector<double> rhs(m + 1, 0.0);
        for (std::size_t r = 0; r < m; ++r) {
            const auto i = free[r];
            rhs[r] = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (state[j] == 1) rhs[r] -= y[i] * y[j] * k[i][j] * c;
            for (std::size_t s = 0; s < m; ++s) sys[r][s] = y[i] * y[free[s]] * k[i][free[s]];
            sys[r][m] = y[i];
            sys[m][r] = y[i];
        }
        for (std::size_t j = 0; j < n; ++j)
            if (state[j] == 1) rhs[m] -= y[j] * c;
        const auto x = solve(sys, rhs);
        if (!x) continue;
        bool feasible = true;
        for (std::size_t r = 0; r < m; ++r) {
            if ((*x)[r] < -1e-10 || (*x)[r] > c + 1e-10) feasible = false;
            a[free[r]] = std::clamp((*x)[r], 0.0, c);
        }
        if (feasible) best = std::max(best, dual_value(k, y, a));
    }
    return best;
}

}  // namespace oracle

namespace fixture {

/// Random labelled problem with both classes present.
inline sigdt::LabeledVectors random_problem(std::mt19937_64& gen, std::size_t n, std::size_t dims, double shift) {
    std::normal_distribution<double> nd;
    sigdt::LabeledVectors lv;
    for (std::size_t i = 0; i < n; ++i) {
        const int y = i % 2 == 0 ? 1 : -1;
        std::vector<double> x(dims);
        for (auto& v : x) v = nd(gen) + (y > 0 ? shift : -shift);
        lv.x.push_back(std::move(x));
        lv.y.push_back(y);
    }
    return lv;
}

}  // namespace fixture
