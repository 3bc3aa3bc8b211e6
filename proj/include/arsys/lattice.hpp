#pragma once

// Integer vectors and small square matrices over Z, with exact elimination.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "arsys/checked.hpp"
#include "arsys/error.hpp"

namespace arsys {

using IntVector = std::vector<std::int64_t>;

inline IntVector unit_vector(int n, int i) {
    IntVector v(n, 0);
    v[i] = 1;
    return v;
}

inline std::int64_t norm_inf(const IntVector& v) {
    std::int64_t m = 0;
    for (auto x : v) m = std::max(m, x < 0 ? checked::neg(x) : x);
    return m;
}

inline IntVector operator+(const IntVector& a, const IntVector& b) {
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked::add(a[i], b[i]);
    return r;
}

inline IntVector operator-(const IntVector& a) {
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked::neg(a[i]);
    return r;
}

inline IntVector operator-(const IntVector& a, const IntVector& b) { return a + (-b); }

inline IntVector scaled(const IntVector& a, std::int64_t k) {
    IntVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked::mul(a[i], k);
    return r;
}

inline std::int64_t dot(const IntVector& a, const IntVector& b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s = checked::add(s, checked::mul(a[i], b[i]));
    return s;
}

inline std::int64_t content(const IntVector& v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x);
    return g;
}

inline std::string to_string(const IntVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

/// Dense square integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {}

    static IntMatrix identity(int n) {
        IntMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    /// Matrix whose k-th column is columns[k].
    static IntMatrix from_columns(const std::vector<IntVector>& columns) {
        const int n = static_cast<int>(columns.size());
        IntMatrix m(n);
        for (int c = 0; c < n; ++c) {
            if (static_cast<int>(columns[c].size()) != n) throw InputError("column length mismatch");
            for (int r = 0; r < n; ++r) m(r, c) = columns[c][r];
        }
        return m;
    }

    int size() const noexcept { return n_; }
    std::int64_t& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * n_ + c]; }
    std::int64_t operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * n_ + c]; }

    IntVector column(int c) const {
        IntVector v(n_);
        for (int r = 0; r < n_; ++r) v[r] = (*this)(r, c);
        return v;
    }

    std::vector<IntVector> columns() const {
        std::vector<IntVector> cols;
        for (int c = 0; c < n_; ++c) cols.push_back(column(c));
        return cols;
    }

    const std::vector<std::int64_t>& data() const noexcept { return a_; }

    std::int64_t max_abs() const {
        std::int64_t m = 0;
        for (auto x : a_) m = std::max(m, x < 0 ? -x : x);
        return m;
    }

    bool operator==(const IntMatrix&) const = default;
    auto operator<=>(const IntMatrix& o) const {
        if (auto c = n_ <=> o.n_; c != 0) return c;
        return a_ <=> o.a_;
    }

private:
    int n_ = 0;
    std::vector<std::int64_t> a_;
};

inline IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    const int n = x.size();
    IntMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const std::int64_t xik = x(i, k);
            if (xik == 0) continue;
            for (int j = 0; j < n; ++j) r(i, j) = checked::add(r(i, j), checked::mul(xik, y(k, j)));
        }
    return r;
}

inline IntVector operator*(const IntMatrix& x, const IntVector& v) {
    const int n = x.size();
    IntVector r(n, 0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) r[i] = checked::add(r[i], checked::mul(x(i, k), v[k]));
    return r;
}

/// Bareiss fraction-free determinant.
inline std::int64_t determinant(IntMatrix m) {
    const int n = m.size();
    if (n == 0) return 1;
    std::int64_t sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int swap = -1;
            for (int r = k + 1; r < n; ++r)
                if (m(r, k) != 0) {
                    swap = r;
                    break;
                }
            if (swap < 0) return 0;
            for (int c = 0; c < n; ++c) std::swap(m(k, c), m(swap, c));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m(i, j) = checked::sub(checked::mul(m(i, j), m(k, k)), checked::mul(m(i, k), m(k, j))) / prev;
        prev = m(k, k);
    }
    return checked::mul(sign, m(n - 1, n - 1));
}

/// Inverse of a matrix with determinant +-1.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
    const int n = m.size();
    const std::int64_t det = determinant(m);
    if (det != 1 && det != -1) throw InputError("matrix is not unimodular");
    IntMatrix inv(n);
    if (n == 1) {
        inv(0, 0) = det;
        return inv;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            IntMatrix minor(n - 1);
            for (int r = 0, mr = 0; r < n; ++r) {
                if (r == j) continue;
                for (int c = 0, mc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor(mr, mc++) = m(r, c);
                }
                ++mr;
            }
            const std::int64_t cof = ((i + j) % 2 ? -1 : 1) * determinant(minor);
            inv(i, j) = checked::mul(cof, det);
        }
    return inv;
}

/// Exact rational with normalized sign and lowest terms; internal to elimination.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw InvariantViolation("zero denominator");
        if (den < 0) {
            num = checked::neg(num);
            den = checked::neg(den);
        }
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    bool is_zero() const { return num == 0; }
    bool operator==(const Rational&) const = default;
};

inline Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t g = std::gcd(a.den, b.den);
    return {checked::add(checked::mul(a.num, b.den / g), checked::mul(b.num, a.den / g)),
            checked::mul(a.den / g, b.den)};
}
inline Rational operator-(const Rational& a) { return {checked::neg(a.num), a.den}; }
inline Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
inline Rational operator*(const Rational& a, const Rational& b) {
    return {checked::mul(a.num, b.num), checked::mul(a.den, b.den)};
}
inline Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw InvariantViolation("division by zero");
    return {checked::mul(a.num, b.den), checked::mul(a.den, b.num)};
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<int> rref(std::vector<std::vector<Rational>>& rows) {
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    const int ncols = static_cast<int>(rows[0].size());
    int r = 0;
    for (int c = 0; c < ncols && r < static_cast<int>(rows.size()); ++c) {
        int p = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (!rows[i][c].is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(rows[r], rows[p]);
        const Rational lead = rows[r][c];
        for (auto& x : rows[r]) x = x / lead;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || rows[i][c].is_zero()) continue;
            const Rational f = rows[i][c];
            for (int j = 0; j < ncols; ++j) rows[i][j] = rows[i][j] - f * rows[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline int rank(const std::vector<IntVector>& vectors) {
    if (vectors.empty()) return 0;
    std::vector<std::vector<Rational>> rows;
    for (const auto& v : vectors) rows.emplace_back(v.begin(), v.end());
    return static_cast<int>(rref(rows).size());
}

/// Coordinates of target in terms of linearly independent vectors, if it lies in their span.
/// Result: numerators with a common positive denominator.
struct RationalCoordinates {
    IntVector numerators;
    std::int64_t denominator = 1;
};

inline std::optional<RationalCoordinates> coordinates_in_span(const std::vector<IntVector>& basis,
                                                              const IntVector& target) {
    const int l = static_cast<int>(basis.size());
    const int n = static_cast<int>(target.size());
    // Augmented system: rows = ambient coordinates, columns = basis vectors | target.
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(l + 1));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < l; ++c) rows[r][c] = basis[c][r];
        rows[r][l] = target[r];
    }
    const auto pivots = rref(rows);
    if (static_cast<int>(pivots.size()) > 0 && pivots.back() == l) return std::nullopt;
    if (static_cast<int>(pivots.size()) != l) throw InputError("vectors are linearly dependent");
    std::int64_t den = 1;
    for (int k = 0; k < l; ++k) den = checked::lcm(den, rows[k][l].den);
    RationalCoordinates out;
    out.denominator = den;
    for (int k = 0; k < l; ++k) out.numerators.push_back(checked::mul(rows[k][l].num, den / rows[k][l].den));
    return out;
}

/// Integer basis of {x : <x, v> = 0 for all v in vectors}, each vector primitive.
inline std::vector<IntVector> orthogonal_complement(const std::vector<IntVector>& vectors, int n) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& v : vectors) rows.emplace_back(v.begin(), v.end());
    std::vector<int> pivots = rows.empty() ? std::vector<int>{} : rref(rows);
    std::vector<bool> is_pivot(n, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<IntVector> out;
    for (int freec = 0; freec < n; ++freec) {
        if (is_pivot[freec]) continue;
        std::vector<Rational> x(n, Rational(0));
        x[freec] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = -rows[k][freec];
        std::int64_t den = 1;
        for (const auto& q : x) den = checked::lcm(den, q.den);
        IntVector v(n);
        for (int i = 0; i < n; ++i) v[i] = checked::mul(x[i].num, den / x[i].den);
        const std::int64_t g = content(v);
        for (auto& c : v) c /= g;
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace arsys
