#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the value types, and favour plainness over speed.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "arsys/arsys.hpp"

namespace oracle {

using arsys::GroupElement;
using arsys::IntVector;

/// Least m in [0, bound] with q^m p == 1 by direct multiplication.
inline std::optional<std::int64_t> min_exponent(const GroupElement& q, const GroupElement& p, std::int64_t bound) {
    GroupElement acc = p;
    for (std::int64_t m = 0; m <= bound; ++m) {
        if (arsys::is_one(acc)) return m;
        acc = arsys::mul(acc, q);
    }
    return std::nullopt;
}

/// m-value from its two defining branches, scanned up to bound.
inline std::optional<std::int64_t> m_value(const GroupElement& vertex, const GroupElement& edge, std::int64_t bound) {
    GroupElement acc = edge;
    GroupElement power = vertex;
    for (std::int64_t m = 0; m <= bound; ++m) {
        if (arsys::is_one(acc)) return m;
        if (!arsys::is_one(vertex) && arsys::is_one(power)) return m;
        acc = arsys::mul(acc, vertex);
        power = arsys::mul(power, vertex);
    }
    return std::nullopt;
}

// Coset enumeration ----------------------------------------------------------

/**
 * Todd-Coxeter enumeration over the trivial subgroup for a Coxeter
 * presentation: generators s_i with s_i^2 = 1 and (s_i s_j)^m_ij = 1.
 * Each column of the table is an involution, so s_i^2 needs no scanning.
 */
class CosetTable {
public:
    explicit CosetTable(const std::vector<std::vector<int>>& coxeter, std::size_t limit = 100000)
        : k_(static_cast<int>(coxeter.size())), limit_(limit) {
        for (int i = 0; i < k_; ++i)
            for (int j = i + 1; j < k_; ++j) {
                std::vector<int> w;
                for (int r = 0; r < coxeter[i][j]; ++r) {
                    w.push_back(i);
                    w.push_back(j);
                }
                relators_.push_back(w);
            }
        new_coset();
        for (std::size_t c = 0; c < table_.size(); ++c) {
            for (const auto& r : relators_) {
                if (!alive(c)) break;
                scan_and_fill(static_cast<int>(c), r);
            }
            if (!alive(c)) continue;
            for (int g = 0; g < k_; ++g)
                if (table_[c][g] < 0) define(static_cast<int>(c), g);
        }
        compact();
    }

    std::size_t order() const { return perm_.empty() ? 1 : perm_[0].size(); }

    /// Permutation of the cosets induced by each generator.
    const std::vector<std::vector<int>>& generator_permutations() const { return perm_; }

    /// Multiset of element orders of the group, read off the regular representation.
    std::map<std::int64_t, std::int64_t> element_orders() const {
        const std::size_t n = order();
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        // Right regular action: the element reaching coset c from coset 0 acts as x -> x.w.
        std::vector<std::vector<int>> element(n);
        element[0] = id;
        std::deque<int> queue{0};
        std::vector<bool> seen(n, false);
        seen[0] = true;
        while (!queue.empty()) {
            const int c = queue.front();
            queue.pop_front();
            for (int g = 0; g < k_; ++g) {
                const int d = perm_[g][c];
                if (seen[d]) continue;
                seen[d] = true;
                element[d].resize(n);
                for (std::size_t x = 0; x < n; ++x) element[d][x] = perm_[g][element[c][x]];
                queue.push_back(d);
            }
        }
        std::map<std::int64_t, std::int64_t> orders;
        for (const auto& p : element) {
            std::int64_t o = 1;
            for (std::size_t x = 0; x < n; ++x) {
                std::int64_t len = 1;
                for (int y = p[x]; y != static_cast<int>(x); y = p[y]) ++len;
                o = std::lcm(o, len);
            }
            ++orders[o];
        }
        return orders;
    }

private:
    bool alive(std::size_t c) const { return parent_[c] == static_cast<int>(c); }

    int find(int c) {
        while (parent_[c] != c) c = parent_[c] = parent_[parent_[c]];
        return c;
    }

    int new_coset() {
        if (table_.size() >= limit_) throw std::runtime_error("coset limit reached");
        table_.emplace_back(k_, -1);
        parent_.push_back(static_cast<int>(parent_.size()));
        return static_cast<int>(table_.size()) - 1;
    }

    void define(int c, int g) {
        const int d = new_coset();
        table_[c][g] = d;
        table_[d][g] = c;
    }

    void scan_and_fill(int c, const std::vector<int>& w) {
        int f = c, b = c;
        int i = 0, j = static_cast<int>(w.size()) - 1;
        for (;;) {
            while (i <= j && table_[f][w[i]] >= 0) f = table_[f][w[i++]];
            if (i > j) {
                if (f != b) coincidence(f, b);
                return;
            }
            while (j >= i && table_[b][w[j]] >= 0) b = table_[b][w[j--]];
            if (j < i) {
                coincidence(f, b);
                return;
            }
            if (i == j) {
                table_[f][w[i]] = b;
                table_[b][w[i]] = f;
                return;
            }
            define(f, w[i]);
        }
    }

    void merge(int a, int b, std::deque<int>& q) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent_[b] = a;
        q.push_back(b);
    }

    void coincidence(int a, int b) {
        std::deque<int> q;
        merge(a, b, q);
        while (!q.empty()) {
            const int e = q.front();
            q.pop_front();
            for (int g = 0; g < k_; ++g) {
                const int f = table_[e][g];
                if (f < 0) continue;
                table_[e][g] = -1;
                if (table_[f][g] == e) table_[f][g] = -1;
                const int e1 = find(e), f1 = find(f);
                if (table_[e1][g] >= 0)
                    merge(f1, table_[e1][g], q);
                else if (table_[f1][g] >= 0)
                    merge(e1, table_[f1][g], q);
                else {
                    table_[e1][g] = f1;
                    table_[f1][g] = e1;
                }
            }
        }
    }

    void compact() {
        std::vector<int> index(table_.size(), -1);
        int n = 0;
        for (std::size_t c = 0; c < table_.size(); ++c)
            if (alive(c)) index[c] = n++;
        perm_.assign(k_, std::vector<int>(n));
        for (std::size_t c = 0; c < table_.size(); ++c) {
            if (!alive(c)) continue;
            for (int g = 0; g < k_; ++g) perm_[g][index[c]] = index[find(table_[c][g])];
        }
    }

    int k_;
    std::size_t limit_;
    std::vector<std::vector<int>> relators_;
    std::vector<std::vector<int>> table_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> perm_;
};

// Roots ------------------------------------------------------------------------

/**
 * Root set by plain breadth-first search over ordered bases, with m-values
 * from the scanning oracle. Returns nullopt if some m-value is missing or the
 * search grows past max_bases.
 */
inline std::optional<std::set<IntVector>> roots(const arsys::Bicharacter& chi, std::size_t max_bases = 20000,
                                                std::int64_t bound = 256) {
    const int n = chi.rank();
    std::vector<IntVector> start;
    for (int i = 0; i < n; ++i) {
        IntVector e(n, 0);
        e[i] = 1;
        start.push_back(e);
    }
    auto key = [](std::vector<IntVector> b) {
        std::sort(b.begin(), b.end());
        return b;
    };
    std::set<std::vector<IntVector>> seen{key(start)};
    std::deque<std::vector<IntVector>> queue{start};
    std::set<IntVector> out;
    while (!queue.empty()) {
        const auto b = queue.front();
        queue.pop_front();
        for (const auto& v : b) {
            out.insert(v);
            IntVector neg = v;
            for (auto& x : neg) x = -x;
            out.insert(neg);
        }
        for (int i = 0; i < n; ++i) {
            const GroupElement qi = arsys::eval(chi, b[i], b[i]);
            std::vector<IntVector> next = b;
            for (int j = 0; j < n; ++j) {
                if (j == i) {
                    for (auto& x : next[j]) x = -x;
                    continue;
                }
                const auto m = m_value(qi, arsys::sym(chi, b[i], b[j]), bound);
                if (!m) return std::nullopt;
                for (int t = 0; t < n; ++t) next[j][t] += *m * b[i][t];
            }
            if (seen.insert(key(next)).second) {
                if (seen.size() > max_bases) return std::nullopt;
                queue.push_back(std::move(next));
            }
        }
    }
    return out;
}

} // namespace oracle
