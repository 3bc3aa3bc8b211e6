#pragma once

// Restriction of a finite arithmetic root system to the real span H of some
// of its roots, and the linear-independence criterion for root families.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "arsys/groupoid.hpp"

namespace arsys {

struct Subsystem {
    std::vector<IntVector> span_basis;  ///< the chosen roots f_1..f_l
    std::vector<IntVector> roots_in_H;  ///< sorted
    std::vector<IntVector> positive_in_H; ///< positive with respect to the standard basis, sorted
    std::vector<IntVector> E_H;         ///< simple roots of the restriction, sorted
    bool lattice_saturated = true;      ///< Z-span(E_H) equals span(H) intersected with Z^n
    Bicharacter restricted_chi;         ///< values on E_H
    DynkinDiagram restricted_diagram;
    ExplorationResult restricted;       ///< exploration of restricted_chi
    bool used_functional_fallback = false;

    int dimension() const { return static_cast<int>(E_H.size()); }
};

namespace detail {

inline bool in_span(const std::vector<IntVector>& basis, const IntVector& v) {
    return coordinates_in_span(basis, v).has_value();
}

inline bool is_positive(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](auto x) { return x >= 0; });
}

/// Exact non-negative integer coordinates of v in the independent family b, if any.
inline std::optional<IntVector> natural_coordinates(const std::vector<IntVector>& b, const IntVector& v) {
    auto c = coordinates_in_span(b, v);
    if (!c || c->denominator != 1) return std::nullopt;
    if (!std::all_of(c->numerators.begin(), c->numerators.end(), [](auto x) { return x >= 0; }))
        return std::nullopt;
    return c->numerators;
}

inline bool sandwich_holds(const std::vector<IntVector>& simple, const std::vector<IntVector>& positive, int dim) {
    if (static_cast<int>(simple.size()) != dim || rank(simple) != dim) return false;
    return std::all_of(positive.begin(), positive.end(),
                       [&](const IntVector& b) { return natural_coordinates(simple, b).has_value(); });
}

/// gcd of the maximal minors of the n x l matrix with the given columns.
inline std::int64_t maximal_minor_gcd(const std::vector<IntVector>& cols) {
    const int l = static_cast<int>(cols.size());
    const int n = l ? static_cast<int>(cols[0].size()) : 0;
    std::vector<int> pick(n, 0);
    std::fill(pick.end() - l, pick.end(), 1);
    std::int64_t g = 0;
    do {
        IntMatrix m(l);
        int r = 0;
        for (int row = 0; row < n; ++row) {
            if (!pick[row]) continue;
            for (int c = 0; c < l; ++c) m(r, c) = cols[c][row];
            ++r;
        }
        g = std::gcd(g, determinant(m));
    } while (std::next_permutation(pick.begin(), pick.end()));
    return g;
}

} // namespace detail

/// Elements of positive that are not a sum of two elements of positive.
inline std::vector<IntVector> indecomposable_roots(const std::vector<IntVector>& positive) {
    std::vector<IntVector> sorted = positive;
    std::sort(sorted.begin(), sorted.end());
    std::vector<IntVector> out;
    for (const auto& b : sorted) {
        bool decomposes = false;
        for (const auto& a : sorted) {
            if (a == b) continue;
            const IntVector rest = b - a;
            if (detail::is_positive(rest) && std::binary_search(sorted.begin(), sorted.end(), rest)) {
                decomposes = true;
                break;
            }
        }
        if (!decomposes) out.push_back(b);
    }
    return out;
}

/**
 * Simple roots of Delta cap H read off from an object of the groupoid.
 * A functional phi = (2B+1) alpha + (1,...,1) with alpha vanishing on H and
 * nonzero on the other roots is positive on exactly one object F; then
 * E_H = F cap H. B bounds |sum of coordinates| over all roots.
 */
inline std::vector<IntVector> functional_basis(const ExplorationResult& parent, const std::vector<IntVector>& span) {
    const int n = parent.rank;
    const auto normals = orthogonal_complement(span, n);
    std::vector<IntVector> outside;
    std::int64_t bound = 0;
    for (const auto& b : parent.roots) {
        bound = std::max<std::int64_t>(bound, std::abs(std::accumulate(b.begin(), b.end(), std::int64_t{0})));
        if (!detail::in_span(span, b)) outside.push_back(b);
    }
    // alpha = sum t^k normal_k with t large enough that alpha(b) != 0 off H.
    IntVector alpha(n, 0);
    for (std::int64_t t = 1;; ++t) {
        alpha.assign(n, 0);
        std::int64_t w = 1;
        for (const auto& v : normals) {
            alpha = alpha + scaled(v, w);
            w = checked::mul(w, t + 1);
        }
        if (std::none_of(outside.begin(), outside.end(), [&](const IntVector& b) { return dot(alpha, b) == 0; }))
            break;
        if (t > 64) throw InvariantViolation("no generic functional found");
    }
    IntVector phi = scaled(alpha, checked::add(checked::mul(2, bound), 1));
    for (auto& x : phi) x = checked::add(x, 1);
    for (const auto& o : parent.objects) {
        const auto& vs = o.basis.vectors();
        if (std::all_of(vs.begin(), vs.end(), [&](const IntVector& f) { return dot(phi, f) > 0; })) {
            std::vector<IntVector> out;
            for (const auto& f : vs)
                if (detail::in_span(span, f)) out.push_back(f);
            std::sort(out.begin(), out.end());
            return out;
        }
    }
    throw InvariantViolation("no object is positive for the chosen functional");
}

/// Restriction to the real span of the given vectors, which must be independent.
inline Subsystem restrict_to_span(const Bicharacter& chi, const ExplorationResult& parent,
                                  const std::vector<IntVector>& span, const Caps& caps = {}) {
    if (!parent.finite()) throw InputError("restriction needs a finite parent");
    if (span.empty()) throw InputError("at least one spanning vector is required");
    for (const auto& v : span)
        if (static_cast<int>(v.size()) != parent.rank) throw InputError("vector " + to_string(v) + " has wrong length");
    const int l = static_cast<int>(span.size());
    if (rank(span) != l) throw InputError("spanning vectors are linearly dependent");

    Subsystem s;
    s.span_basis = span;
    for (const auto& b : parent.roots)
        if (detail::in_span(span, b)) {
            s.roots_in_H.push_back(b);
            if (detail::is_positive(b)) s.positive_in_H.push_back(b);
        }
    const int dim = rank(s.roots_in_H);
    s.E_H = indecomposable_roots(s.positive_in_H);
    if (!detail::sandwich_holds(s.E_H, s.positive_in_H, dim)) {
        s.E_H = functional_basis(parent, span);
        s.used_functional_fallback = true;
        if (!detail::sandwich_holds(s.E_H, s.positive_in_H, dim))
            throw InvariantViolation("no basis of the restricted root system satisfies the sandwich property");
    }
    s.lattice_saturated = dim == 0 || detail::maximal_minor_gcd(s.E_H) == 1;

    const int k = static_cast<int>(s.E_H.size());
    std::vector<GroupElement> q;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) q.push_back(eval(chi, s.E_H[a], s.E_H[b]));
    s.restricted_chi = Bicharacter(chi.context(), k, std::move(q));
    s.restricted_diagram = diagram(s.restricted_chi);
    s.restricted = explore(s.restricted_chi, caps);
    if (!s.restricted.finite()) throw InvariantViolation("restricted system is not arithmetic within the caps");

    std::vector<IntVector> mapped;
    for (const auto& r : s.restricted.roots) {
        IntVector v(parent.rank, 0);
        for (int a = 0; a < k; ++a) v = v + scaled(s.E_H[a], r[a]);
        mapped.push_back(std::move(v));
    }
    std::sort(mapped.begin(), mapped.end());
    if (mapped != s.roots_in_H) throw InvariantViolation("roots of the restriction differ from Delta cap H");
    return s;
}

/// Restriction to the span of roots f_1..f_l of the parent.
inline Subsystem restrict(const Bicharacter& chi, const ExplorationResult& parent, const std::vector<IntVector>& f,
                          const Caps& caps = {}) {
    if (!parent.finite()) throw InputError("restriction needs a finite parent");
    for (const auto& v : f)
        if (!parent.contains_root(v)) throw InputError(to_string(v) + " is not a root");
    return restrict_to_span(chi, parent, f, caps);
}

/// Restriction to the hyperplane (or intersection of hyperplanes) with the given normals.
inline Subsystem restrict_to_normals(const Bicharacter& chi, const ExplorationResult& parent,
                                     const std::vector<IntVector>& normals, const Caps& caps = {}) {
    return restrict_to_span(chi, parent, orthogonal_complement(normals, parent.rank), caps);
}

struct LBasisReport {
    bool criterion = true;  ///< no f_i - sum m_j f_j (j > i, m != 0) is a positive multiple of a root
    bool half_space = true; ///< every root in H has f-coordinates of one sign
};

/**
 * Evaluates both sides of the independence criterion exactly.
 *
 * f_i - sum_{j>i} m_j f_j = k beta with k >= 1 means beta has f-coordinates
 * c with c_j = 0 for j < i, c_i = 1/k, and c_j = -m_j/k <= 0 for j > i, not
 * all zero. Scanning the roots in H for that pattern replaces a bounded
 * search over the m_j.
 */
inline LBasisReport lbasis_report(const ExplorationResult& parent, const std::vector<IntVector>& f) {
    if (!parent.finite()) throw InputError("criterion needs a finite parent");
    for (const auto& v : f)
        if (!parent.contains_root(v)) throw InputError(to_string(v) + " is not a root");
    const int l = static_cast<int>(f.size());
    if (l == 0 || rank(f) != l) throw InputError("roots are linearly dependent");

    LBasisReport rep;
    for (const auto& b : parent.roots) {
        auto c = coordinates_in_span(f, b);
        if (!c) continue;
        const auto& x = c->numerators;
        const bool nonneg = std::all_of(x.begin(), x.end(), [](auto v) { return v >= 0; });
        const bool nonpos = std::all_of(x.begin(), x.end(), [](auto v) { return v <= 0; });
        if (!nonneg && !nonpos) rep.half_space = false;

        int i = 0;
        while (i < l && x[i] == 0) ++i;
        if (i == l || x[i] < 0) continue;
        bool tail_ok = true, some_negative = false;
        for (int j = i + 1; j < l; ++j) {
            if (x[j] > 0) tail_ok = false;
            if (x[j] < 0) some_negative = true;
        }
        if (!tail_ok || !some_negative) continue;
        // k = denominator / x_i must be a positive integer, then m_j = -x_j / x_i.
        if (c->denominator % x[i] != 0) continue;
        bool integral = true;
        for (int j = i + 1; j < l; ++j)
            if (x[j] % x[i] != 0) integral = false;
        if (integral) rep.criterion = false;
    }
    return rep;
}

/// The criterion; throws InvariantViolation if it disagrees with the direct half-space test.
inline bool check_lbasis(const ExplorationResult& parent, const std::vector<IntVector>& f) {
    const auto rep = lbasis_report(parent, f);
    if (rep.criterion != rep.half_space)
        throw InvariantViolation("independence criterion and half-space test disagree");
    return rep.criterion;
}

} // namespace arsys
