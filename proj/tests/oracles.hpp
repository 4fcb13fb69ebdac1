#pragma once

// Reference computations for the tests. Everything here is written from the
// textbook definitions with normal equations and explicit loops, so it shares
// no code path with the library beyond Eigen containers.

#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Ols {
    Vec b;
    Vec resid;
    double ssr = 0.0;
    Mat cov;
};

inline Ols ols(const Vec& y, const Mat& X) {
    const Mat XtX = X.transpose() * X;
    Ols o;
    o.b = XtX.ldlt().solve(X.transpose() * y);
    o.resid = y - X * o.b;
    o.ssr = o.resid.squaredNorm();
    const double s2 = o.ssr / static_cast<double>(X.rows() - X.cols());
    o.cov = s2 * XtX.inverse();
    return o;
}

inline double t_ratio(const Vec& y, const Mat& X, Eigen::Index col) {
    const Ols o = ols(y, X);
    return o.b(col) / std::sqrt(o.cov(col, col));
}

struct Grid {
    std::size_t lo = 0, hi = 0, gap = 0;
};

// Candidate range [ceil(trim T), floor((1 - trim) T)] kept inside [2, T - 2].
inline Grid grid(std::size_t T, double trim) {
    Grid g;
    const double Td = static_cast<double>(T);
    g.lo = static_cast<std::size_t>(std::ceil(trim * Td - 1e-9));
    g.hi = static_cast<std::size_t>(std::floor((1.0 - trim) * Td + 1e-9));
    if (g.lo < 2) g.lo = 2;
    if (g.hi > T - 2) g.hi = T - 2;
    g.gap = static_cast<std::size_t>(std::ceil(trim * Td - 1e-9));
    return g;
}

// y is 0-based storage of y_1..y_T. Returns the ZA t-ratio on y_{t-1} with
// p fixed augmentation lags, regression over t = p + 2..T.
// model: 'A' intercept shift, 'B' trend shift, 'C' both.
inline double za_stat(const Vec& y, char model, std::size_t tb, std::size_t p) {
    const std::size_t T = static_cast<std::size_t>(y.size());
    const std::size_t first = p + 2;
    const std::size_t n = T - first + 1;
    const bool du = model != 'B';
    const bool dt = model != 'A';
    const std::size_t k = 3 + (du ? 1 : 0) + (dt ? 1 : 0) + p;
    Mat X(n, k);
    Vec dep(n);
    auto Y = [&](std::size_t t) { return y(static_cast<Eigen::Index>(t - 1)); };
    for (std::size_t t = first, r = 0; t <= T; ++t, ++r) {
        std::size_t c = 0;
        const auto ri = static_cast<Eigen::Index>(r);
        dep(ri) = Y(t) - Y(t - 1);
        X(ri, c++) = 1.0;
        X(ri, c++) = static_cast<double>(t);
        if (du) X(ri, c++) = t > tb ? 1.0 : 0.0;
        if (dt) X(ri, c++) = t > tb ? static_cast<double>(t - tb) : 0.0;
        const std::size_t level_col = c;
        X(ri, c++) = Y(t - 1);
        for (std::size_t i = 1; i <= p; ++i) X(ri, c++) = Y(t - i) - Y(t - i - 1);
        (void)level_col;
    }
    const Eigen::Index level = 2 + (du ? 1 : 0) + (dt ? 1 : 0);
    return t_ratio(dep, X, level);
}

struct Argmin {
    double value = std::numeric_limits<double>::infinity();
    std::size_t b1 = 0, b2 = 0;
};

inline Argmin za_grid(const Vec& y, char model, std::size_t p, double trim) {
    const Grid g = grid(static_cast<std::size_t>(y.size()), trim);
    Argmin a;
    for (std::size_t tb = g.lo; tb <= g.hi; ++tb) {
        const double s = za_stat(y, model, tb, p);
        if (s < a.value) a = {s, tb, 0};
    }
    return a;
}

// Two-break LM statistic with p augmentation lags (models 'A' and 'C').
inline double ls_stat(const Vec& y, char model, std::size_t tb1, std::size_t tb2, std::size_t p) {
    const std::size_t T = static_cast<std::size_t>(y.size());
    const bool trend_breaks = model == 'C';
    const std::size_t nb = trend_breaks ? 4 : 2;
    auto Y = [&](std::size_t t) { return y(static_cast<Eigen::Index>(t - 1)); };
    const std::size_t tbs[2] = {tb1, tb2};
    // Z_t without its constant: [t, D1, D2, (DT1, DT2)]
    auto Z = [&](std::size_t t) {
        Vec z(1 + nb);
        z(0) = static_cast<double>(t);
        for (int j = 0; j < 2; ++j) {
            z(1 + j) = t > tbs[j] ? 1.0 : 0.0;
            if (trend_breaks) z(3 + j) = t > tbs[j] ? static_cast<double>(t - tbs[j]) : 0.0;
        }
        return z;
    };
    // first differences of Z over t = 2..T
    const std::size_t n1 = T - 1;
    Mat dZ(n1, 1 + nb);
    Vec dy(n1);
    for (std::size_t t = 2; t <= T; ++t) {
        const auto r = static_cast<Eigen::Index>(t - 2);
        dZ.row(r) = (Z(t) - Z(t - 1)).transpose();
        dy(r) = Y(t) - Y(t - 1);
    }
    const Vec delta = ols(dy, dZ).b;
    const double psi = Y(1) - Z(1).dot(delta);
    Vec S(T);
    for (std::size_t t = 1; t <= T; ++t) S(static_cast<Eigen::Index>(t - 1)) = Y(t) - psi - Z(t).dot(delta);
    auto St = [&](std::size_t t) { return S(static_cast<Eigen::Index>(t - 1)); };
    const std::size_t first = p + 2;
    const std::size_t n = T - first + 1;
    Mat X(n, 1 + nb + 1 + p);
    Vec dep(n);
    for (std::size_t t = first, r = 0; t <= T; ++t, ++r) {
        const auto ri = static_cast<Eigen::Index>(r);
        dep(ri) = Y(t) - Y(t - 1);
        X.row(ri).head(1 + nb) = (Z(t) - Z(t - 1)).transpose();
        X(ri, static_cast<Eigen::Index>(1 + nb)) = St(t - 1);
        for (std::size_t i = 1; i <= p; ++i) {
            X(ri, static_cast<Eigen::Index>(1 + nb + i)) = St(t - i) - St(t - i - 1);
        }
    }
    return t_ratio(dep, X, static_cast<Eigen::Index>(1 + nb));
}

inline Argmin ls_grid(const Vec& y, char model, std::size_t p, double trim) {
    const Grid g = grid(static_cast<std::size_t>(y.size()), trim);
    Argmin a;
    for (std::size_t b1 = g.lo; b1 <= g.hi; ++b1) {
        for (std::size_t b2 = b1 + g.gap; b2 <= g.hi; ++b2) {
            const double s = ls_stat(y, model, b1, b2, p);
            if (s < a.value) a = {s, b1, b2};
        }
    }
    return a;
}

struct HjPoint {
    double adf = 0.0, zt = 0.0, za = 0.0;
};

// Residuals of y on [1, D1, D2, X, D1 X, D2 X] (slope) or [1, D1, D2, X],
// then a no-constant DF regression with p lags and the Phillips statistics.
inline HjPoint hj_stat(const Vec& y, const Mat& Xr, std::size_t tb1, std::size_t tb2, bool slope, std::size_t p,
                       std::size_t bw) {
    const auto T = static_cast<std::size_t>(y.size());
    const auto m = static_cast<std::size_t>(Xr.cols());
    Mat Z(T, 3 + m * (slope ? 3 : 1));
    for (std::size_t t = 1; t <= T; ++t) {
        const auto r = static_cast<Eigen::Index>(t - 1);
        const double d1 = t > tb1 ? 1.0 : 0.0;
        const double d2 = t > tb2 ? 1.0 : 0.0;
        Z(r, 0) = 1.0;
        Z(r, 1) = d1;
        Z(r, 2) = d2;
        for (std::size_t j = 0; j < m; ++j) {
            const auto c = static_cast<Eigen::Index>(j);
            Z(r, 3 + c) = Xr(r, c);
            if (slope) {
                Z(r, 3 + static_cast<Eigen::Index>(m) + c) = d1 * Xr(r, c);
                Z(r, 3 + 2 * static_cast<Eigen::Index>(m) + c) = d2 * Xr(r, c);
            }
        }
    }
    const Vec e = ols(y, Z).resid;
    auto E = [&](std::size_t t) { return e(static_cast<Eigen::Index>(t - 1)); };
    HjPoint h;
    {
        const std::size_t first = p + 2;
        const std::size_t n = T - first + 1;
        Mat X(n, 1 + p);
        Vec dep(n);
        for (std::size_t t = first, r = 0; t <= T; ++t, ++r) {
            const auto ri = static_cast<Eigen::Index>(r);
            dep(ri) = E(t) - E(t - 1);
            X(ri, 0) = E(t - 1);
            for (std::size_t i = 1; i <= p; ++i) X(ri, static_cast<Eigen::Index>(i)) = E(t - i) - E(t - i - 1);
        }
        h.adf = t_ratio(dep, X, 0);
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t t = 2; t <= T; ++t) {
        sxy += E(t) * E(t - 1);
        sxx += E(t - 1) * E(t - 1);
    }
    const double rho = sxy / sxx;
    std::vector<double> v;
    for (std::size_t t = 2; t <= T; ++t) v.push_back(E(t) - rho * E(t - 1));
    const double n = static_cast<double>(v.size());
    auto gamma = [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t i = j; i < v.size(); ++i) s += v[i] * v[i - j];
        return s / n;
    };
    double lambda = 0.0;
    for (std::size_t j = 1; j <= bw; ++j) lambda += (1.0 - static_cast<double>(j) / static_cast<double>(bw + 1)) * gamma(j);
    const double sigma2 = gamma(0) + 2.0 * lambda;
    const double rho_star = (sxy - n * lambda) / sxx;
    h.za = static_cast<double>(T) * (rho_star - 1.0);
    h.zt = (rho_star - 1.0) / std::sqrt(sigma2 / sxx);
    return h;
}

struct HjArgmin {
    Argmin adf, zt, za;
};

inline HjArgmin hj_grid(const Vec& y, const Mat& X, bool slope, std::size_t p, std::size_t bw, double trim) {
    const Grid g = grid(static_cast<std::size_t>(y.size()), trim);
    HjArgmin a;
    for (std::size_t b1 = g.lo; b1 <= g.hi; ++b1) {
        for (std::size_t b2 = b1 + g.gap; b2 <= g.hi; ++b2) {
            const HjPoint h = hj_stat(y, X, b1, b2, slope, p, bw);
            if (h.adf < a.adf.value) a.adf = {h.adf, b1, b2};
            if (h.zt < a.zt.value) a.zt = {h.zt, b1, b2};
            if (h.za < a.za.value) a.za = {h.za, b1, b2};
        }
    }
    return a;
}

inline Vec random_walk(std::mt19937_64& rng, std::size_t T, double sd = 1.0) {
    std::normal_distribution<double> N(0.0, sd);
    Vec y(static_cast<Eigen::Index>(T));
    double acc = 0.0;
    for (auto& v : y) v = acc += N(rng);
    return y;
}

inline Vec normals(std::mt19937_64& rng, std::size_t T, double sd = 1.0) {
    std::normal_distribution<double> N(0.0, sd);
    Vec y(static_cast<Eigen::Index>(T));
    for (auto& v : y) v = N(rng);
    return y;
}

}  // namespace oracle
