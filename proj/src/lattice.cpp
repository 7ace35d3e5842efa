#include "ocgw/lattice.hpp"

#include <cstdlib>
#include <utility>

namespace ocgw {

long gcd_l(long a, long b) {
    a = std::labs(a);
    b = std::labs(b);
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long ext_gcd(long a, long b, long& x, long& y) {
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        long q = a / b;
        long t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

long content(const IntVec& v) {
    long g = 0;
    for (long x : v) g = gcd_l(g, x);
    return g;
}

long det2(long a0, long a1, long b0, long b1) { return a0 * b1 - a1 * b0; }

IntMat columns(const std::vector<IntVec>& vs) {
    if (vs.empty()) return {};
    size_t n = vs[0].size();
    IntMat m(n, IntVec(vs.size()));
    for (size_t j = 0; j < vs.size(); ++j)
        for (size_t i = 0; i < n; ++i) m[i][j] = vs[j][i];
    return m;
}

static RatMat to_rat(const IntMat& m) {
    RatMat r(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        for (long x : m[i]) r[i].push_back(Rational(x));
    return r;
}

Integer determinant(const IntMat& m) {
    size_t n = m.size();
    RatMat a = to_rat(m);
    Rational det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det.get_num();
}

RatMat inverse(const IntMat& m) {
    size_t n = m.size();
    RatMat a = to_rat(m);
    RatMat inv(n, std::vector<Rational>(n, Rational(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw Error(ErrorKind::InvalidCone, "singular ray matrix");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        Rational piv = a[c][c];
        for (size_t k = 0; k < n; ++k) {
            a[c][k] /= piv;
            inv[c][k] /= piv;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c];
            for (size_t k = 0; k < n; ++k) {
                a[r][k] -= f * a[c][k];
                inv[r][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

std::vector<long> smith_diagonal(IntMat m) {
    std::vector<long> diag;
    size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    size_t t = 0;
    while (t < rows && t < cols) {
        // pick smallest nonzero entry in the remaining block as pivot
        long best = 0;
        size_t pr = 0, pc = 0;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j)
                if (m[i][j] != 0 && (best == 0 || std::labs(m[i][j]) < best)) {
                    best = std::labs(m[i][j]);
                    pr = i;
                    pc = j;
                }
        if (best == 0) break;
        std::swap(m[t], m[pr]);
        for (auto& row : m) std::swap(row[t], row[pc]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (size_t i = t + 1; i < rows; ++i) {
                long q = m[i][t] / m[t][t];
                for (size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
                if (m[i][t] != 0) {
                    clean = false;
                    std::swap(m[t], m[i]);
                }
            }
            for (size_t j = t + 1; j < cols; ++j) {
                long q = m[t][j] / m[t][t];
                for (size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
                if (m[t][j] != 0) {
                    clean = false;
                    for (auto& row : m) std::swap(row[t], row[j]);
                }
            }
            if (clean) {
                // divisibility condition on the rest of the block
                for (size_t i = t + 1; i < rows && clean; ++i)
                    for (size_t j = t + 1; j < cols; ++j)
                        if (m[i][j] % m[t][t] != 0) {
                            for (size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
                            clean = false;
                            break;
                        }
            }
        }
        diag.push_back(std::labs(m[t][t]));
        ++t;
    }
    return diag;
}

int rank(const IntMat& m) { return static_cast<int>(smith_diagonal(m).size()); }

}  // namespace ocgw
