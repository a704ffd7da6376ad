#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "eiscong/arith.hpp"

namespace eiscong {

using IntVec = std::vector<Int>;
using IntMatrix = std::vector<IntVec>;
using RatVec = std::vector<Rat>;
using RatMatrix = std::vector<RatVec>;

inline IntMatrix identity_int(std::size_t n) {
    IntMatrix m(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline RatMatrix identity_rat(std::size_t n) {
    RatMatrix m(n, RatVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
    if (a.empty()) return {};
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IntMatrix c(n, IntVec(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
        }
    return c;
}

inline IntVec vec_mat(const IntVec& v, const IntMatrix& m) {
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    IntVec out(cols, 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < cols; ++j) out[j] += v[i] * m[i][j];
    }
    return out;
}

struct HnfResult {
    IntMatrix h;          // rank rows, upper echelon form
    IntMatrix transform;  // unimodular U with U * A = [h; 0]
};

namespace detail {

inline void row_axpy(IntVec& dst, const Int& q, const IntVec& src) {
    for (std::size_t j = 0; j < dst.size(); ++j)
        if (src[j] != 0) dst[j] -= q * src[j];
}

} // namespace detail

/// Row Hermite normal form: pivots positive, entries above each pivot reduced
/// into [0, pivot). Tracks the unimodular transform when requested.
inline HnfResult hnf_with_transform(IntMatrix a, bool track = true) {
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    IntMatrix u = track ? identity_int(m) : IntMatrix{};
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        for (;;) {
            std::size_t best = m;
            for (std::size_t i = row; i < m; ++i)
                if (a[i][col] != 0 && (best == m || abs(a[i][col]) < abs(a[best][col]))) best = i;
            if (best == m) break;
            std::swap(a[row], a[best]);
            if (track) std::swap(u[row], u[best]);
            bool clean = true;
            for (std::size_t i = row + 1; i < m; ++i) {
                if (a[i][col] == 0) continue;
                Int q = floor_div(a[i][col], a[row][col]);
                detail::row_axpy(a[i], q, a[row]);
                if (track) detail::row_axpy(u[i], q, u[row]);
                if (a[i][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (a[row][col] == 0) continue;
        if (a[row][col] < 0) {
            for (auto& x : a[row]) x = -x;
            if (track)
                for (auto& x : u[row]) x = -x;
        }
        for (std::size_t i = 0; i < row; ++i) {
            Int q = floor_div(a[i][col], a[row][col]);
            if (q == 0) continue;
            detail::row_axpy(a[i], q, a[row]);
            if (track) detail::row_axpy(u[i], q, u[row]);
        }
        ++row;
    }
    HnfResult res;
    res.h.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(row));
    res.transform = std::move(u);
    return res;
}

inline IntMatrix hnf(IntMatrix a) { return hnf_with_transform(std::move(a), false).h; }

/// Basis (in HNF) of the left kernel { v : v * A = 0 }.
inline IntMatrix left_kernel(const IntMatrix& a) {
    auto res = hnf_with_transform(a, true);
    IntMatrix ker(res.transform.begin() + static_cast<std::ptrdiff_t>(res.h.size()), res.transform.end());
    if (ker.empty()) return ker;
    return hnf(std::move(ker));
}

/// Smith normal form D = U * A * V (U, V unimodular).
struct SnfResult {
    IntMatrix d;
    IntMatrix u;
    IntMatrix v;
    std::vector<Int> diagonal;
};

inline SnfResult smith_normal_form(IntMatrix a) {
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    IntMatrix u = identity_int(m), v = identity_int(n);
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& r : a) std::swap(r[i], r[j]);
        for (auto& r : v) std::swap(r[i], r[j]);
    };
    auto col_axpy = [&](std::size_t dst, const Int& q, std::size_t src) {
        for (auto& r : a) r[dst] -= q * r[src];
        for (auto& r : v) r[dst] -= q * r[src];
    };
    const std::size_t lim = std::min(m, n);
    std::size_t t = 0;
    for (; t < lim; ++t) {
        std::size_t bi = m, bj = n;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (a[i][j] != 0 && (bi == m || abs(a[i][j]) < abs(a[bi][bj]))) bi = i, bj = j;
        if (bi == m) break;
        std::swap(a[t], a[bi]);
        std::swap(u[t], u[bi]);
        swap_cols(t, bj);
        for (;;) {
            bool done = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (a[i][t] == 0) continue;
                Int q = floor_div(a[i][t], a[t][t]);
                detail::row_axpy(a[i], q, a[t]);
                detail::row_axpy(u[i], q, u[t]);
                if (a[i][t] != 0) done = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (a[t][j] == 0) continue;
                Int q = floor_div(a[t][j], a[t][t]);
                col_axpy(j, q, t);
                if (a[t][j] != 0) done = false;
            }
            if (!done) {
                std::size_t pi = t, pj = t;
                for (std::size_t i = t; i < m; ++i)
                    if (a[i][t] != 0 && abs(a[i][t]) < abs(a[pi][pj])) pi = i, pj = t;
                for (std::size_t j = t; j < n; ++j)
                    if (a[t][j] != 0 && abs(a[t][j]) < abs(a[pi][pj])) pi = t, pj = j;
                std::swap(a[t], a[pi]);
                std::swap(u[t], u[pi]);
                swap_cols(t, pj);
                continue;
            }
            bool divisible = true;
            for (std::size_t i = t + 1; i < m && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        for (std::size_t c = 0; c < n; ++c) a[t][c] += a[i][c];
                        for (std::size_t c = 0; c < m; ++c) u[t][c] += u[i][c];
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (a[t][t] < 0) {
            for (auto& x : a[t]) x = -x;
            for (auto& x : u[t]) x = -x;
        }
    }
    SnfResult res;
    for (std::size_t i = 0; i < lim; ++i) res.diagonal.push_back(a[i][i]);
    res.d = std::move(a);
    res.u = std::move(u);
    res.v = std::move(v);
    return res;
}

/// Inverse of a unimodular integer matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
    const std::size_t n = m.size();
    IntMatrix aug(n, IntVec(2 * n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    IntMatrix h = hnf(aug);
    require(h.size() == n, ErrorKind::structural, "matrix is singular");
    IntMatrix inv(n, IntVec(n));
    for (std::size_t i = 0; i < n; ++i) {
        require(h[i][i] == 1, ErrorKind::structural, "matrix is not unimodular");
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = h[i][n + j];
    }
    return inv;
}

inline Rat determinant(RatMatrix a) {
    const std::size_t n = a.size();
    Rat det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0) continue;
            Rat f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

inline Int determinant(const IntMatrix& a) {
    RatMatrix r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (const auto& x : a[i]) r[i].emplace_back(x);
    Rat d = determinant(r);
    return d.get_num();
}

inline RatMatrix inverse(RatMatrix a) {
    const std::size_t n = a.size();
    RatMatrix inv = identity_rat(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        require(p < n, ErrorKind::domain, "singular matrix");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        Rat f = 1 / a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] *= f;
            inv[c][j] *= f;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            Rat g = a[i][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= g * a[c][j];
                inv[i][j] -= g * inv[c][j];
            }
        }
    }
    return inv;
}

/// Solve x * A = b for a square nonsingular A (row-vector convention).
inline RatVec solve_left(const RatMatrix& a, const RatVec& b) {
    RatMatrix inv = inverse(a);
    RatVec x(a.size(), 0);
    for (std::size_t j = 0; j < b.size(); ++j)
        for (std::size_t i = 0; i < inv.size(); ++i) x[i] += b[j] * inv[j][i];
    return x;
}

/// Characteristic polynomial det(X*I - A), coefficients low degree first.
inline RatVec char_poly(const RatMatrix& a) {
    const std::size_t n = a.size();
    // Faddeev-LeVerrier.
    RatVec c(n + 1, 0);
    c[n] = 1;
    RatMatrix m(n, RatVec(n, 0));
    for (std::size_t k = 1; k <= n; ++k) {
        RatMatrix am(n, RatVec(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t t = 0; t < n; ++t) {
                if (a[i][t] == 0) continue;
                for (std::size_t j = 0; j < n; ++j) am[i][j] += a[i][t] * m[t][j];
            }
        for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
        m = am;
        Rat tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t t = 0; t < n; ++t) tr += a[i][t] * m[t][i];
        c[n - k] = -tr / static_cast<long>(k);
    }
    return c;
}

} // namespace eiscong
