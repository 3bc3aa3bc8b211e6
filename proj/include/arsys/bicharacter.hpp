#pragma once

/**
 * @file bicharacter.hpp
 * @brief Bicharacters on Z^n, generalized Dynkin diagrams and reflections.
 *
 * A Bicharacter is stored by its structure constants q_ij = chi(e_i, e_j)
 * with respect to the standard basis E. Bases of Z^n are ordered lists of
 * column vectors; the diagram of (chi, F) has vertex labels chi(f_i, f_i)
 * and an edge {i, j} labeled chi(f_i, f_j) chi(f_j, f_i) whenever that
 * product is not 1.
 */

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arsys/exponents.hpp"
#include "arsys/lattice.hpp"

namespace arsys {

class Bicharacter {
public:
    Bicharacter() = default;

    /// q is row-major, q[i*n + j] = chi(e_i, e_j).
    Bicharacter(const GroupContext& ctx, int n, std::vector<GroupElement> q)
        : ctx_(ctx), n_(n), q_(std::move(q)) {
        if (n < 1) throw InputError("rank must be >= 1");
        if (static_cast<int>(q_.size()) != n * n) throw InputError("structure constant matrix must be n x n");
        for (const auto& x : q_)
            if (x.context() != ctx_) throw ContextMismatch("structure constants must share one context");
    }

    const GroupContext& context() const noexcept { return ctx_; }
    int rank() const noexcept { return n_; }
    const GroupElement& q(int i, int j) const { return q_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<GroupElement>& constants() const noexcept { return q_; }

    bool operator==(const Bicharacter&) const = default;

private:
    GroupContext ctx_{};
    int n_ = 0;
    std::vector<GroupElement> q_;
};

/// chi(a, b) = prod q_ij^(a_i b_j).
inline GroupElement eval(const Bicharacter& chi, const IntVector& a, const IntVector& b) {
    const int n = chi.rank();
    if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
        throw InputError("vector length does not match the rank");
    const GroupContext& ctx = chi.context();
    std::array<std::int64_t, kMaxFreeRank> free{};
    std::int64_t tor = 0;
    const std::int64_t N = ctx.torsion_order;
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < n; ++j) {
            if (b[j] == 0) continue;
            const std::int64_t e = checked::mul(a[i], b[j]);
            const GroupElement& x = chi.q(i, j);
            for (int k = 0; k < ctx.free_rank; ++k)
                if (x.free(k) != 0) free[k] = checked::add(free[k], checked::mul(e, x.free(k)));
            if (x.torsion_part() != 0) tor = (tor + checked::mul(checked::mod(e, N), x.torsion_part())) % N;
        }
    }
    return GroupElement::from_parts(ctx, std::span<const std::int64_t>(free.data(), ctx.free_rank), tor);
}

/// chi(a, b) chi(b, a).
inline GroupElement sym(const Bicharacter& chi, const IntVector& a, const IntVector& b) {
    return eval(chi, a, b) * eval(chi, b, a);
}

/// An ordered Z-basis of Z^n, stored as column vectors.
class Basis {
public:
    Basis() = default;

    explicit Basis(std::vector<IntVector> vectors) : v_(std::move(vectors)) {
        const auto d = determinant(IntMatrix::from_columns(v_));
        if (d != 1 && d != -1) throw InputError("vectors do not form a basis of Z^n");
    }

    static Basis standard(int n) {
        std::vector<IntVector> v;
        for (int i = 0; i < n; ++i) v.push_back(unit_vector(n, i));
        return Basis(std::move(v));
    }

    int size() const noexcept { return static_cast<int>(v_.size()); }
    const IntVector& operator[](int i) const { return v_[i]; }
    const std::vector<IntVector>& vectors() const noexcept { return v_; }
    IntMatrix matrix() const { return IntMatrix::from_columns(v_); }

    Basis permuted(const std::vector<int>& order) const {
        std::vector<IntVector> w;
        for (int k : order) w.push_back(v_[k]);
        Basis b;
        b.v_ = std::move(w);
        return b;
    }

    /// Identity of the basis as an unordered set: sorted, concatenated columns.
    std::vector<std::int64_t> set_key() const {
        auto sorted = v_;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::int64_t> key;
        for (const auto& x : sorted) key.insert(key.end(), x.begin(), x.end());
        return key;
    }

    bool operator==(const Basis&) const = default;

private:
    friend Basis reflect_basis_unchecked(const Basis&, int, const std::vector<std::int64_t>&);
    std::vector<IntVector> v_;
};

class DynkinDiagram {
public:
    DynkinDiagram() = default;

    /// edge_labels is row-major n x n; the diagonal is ignored, entries must be symmetric.
    DynkinDiagram(std::vector<GroupElement> vertex_labels, std::vector<GroupElement> edge_labels)
        : n_(static_cast<int>(vertex_labels.size())), vertex_(std::move(vertex_labels)), edge_(std::move(edge_labels)) {
        if (n_ < 1) throw InputError("diagram needs at least one vertex");
        if (static_cast<int>(edge_.size()) != n_ * n_) throw InputError("edge label matrix must be n x n");
        const GroupContext ctx = vertex_[0].context();
        for (int i = 0; i < n_; ++i) {
            if (vertex_[i].context() != ctx) throw ContextMismatch("diagram labels must share one context");
            edge_label(i, i) = GroupElement::identity(ctx);
            for (int j = 0; j < n_; ++j) {
                if (edge(i, j).context() != ctx) throw ContextMismatch("diagram labels must share one context");
                if (edge(i, j) != edge(j, i)) throw InputError("edge labels must be symmetric");
            }
        }
    }

    /// Diagram with the given vertex labels and no edges.
    static DynkinDiagram edgeless(std::vector<GroupElement> vertex_labels) {
        const int n = static_cast<int>(vertex_labels.size());
        const auto one = GroupElement::identity(vertex_labels.at(0).context());
        return DynkinDiagram(std::move(vertex_labels), std::vector<GroupElement>(n * n, one));
    }

    int size() const noexcept { return n_; }
    const GroupContext& context() const { return vertex_.at(0).context(); }
    const GroupElement& vertex(int i) const { return vertex_[i]; }
    /// Edge label, or 1 when there is no edge.
    const GroupElement& edge(int i, int j) const { return edge_[static_cast<std::size_t>(i) * n_ + j]; }
    bool has_edge(int i, int j) const { return i != j && !is_one(edge(i, j)); }

    void set_vertex(int i, GroupElement g) { vertex_[i] = std::move(g); }
    void set_edge(int i, int j, GroupElement g) {
        if (i == j) return;
        edge_label(i, j) = g;
        edge_label(j, i) = std::move(g);
    }

    /// Diagram whose vertex k is the vertex order[k] of this one.
    DynkinDiagram permuted(const std::vector<int>& order) const {
        DynkinDiagram d = *this;
        for (int a = 0; a < n_; ++a) {
            d.vertex_[a] = vertex_[order[a]];
            for (int b = 0; b < n_; ++b) d.edge_label(a, b) = edge(order[a], order[b]);
        }
        return d;
    }

    /// Flat integer encoding: vertex labels, then upper-triangle edge labels.
    std::vector<std::int64_t> encode() const {
        std::vector<std::int64_t> key;
        const int r = context().free_rank;
        key.reserve(static_cast<std::size_t>(n_ + n_ * (n_ - 1) / 2) * (r + 1));
        auto push = [&](const GroupElement& g) {
            for (int k = 0; k < r; ++k) key.push_back(g.free(k));
            key.push_back(g.torsion_part());
        };
        for (int i = 0; i < n_; ++i) push(vertex_[i]);
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) push(edge(i, j));
        return key;
    }

    bool operator==(const DynkinDiagram&) const = default;

private:
    GroupElement& edge_label(int i, int j) { return edge_[static_cast<std::size_t>(i) * n_ + j]; }

    int n_ = 0;
    std::vector<GroupElement> vertex_;
    std::vector<GroupElement> edge_;
};

/// Twist-class representative: the lexicographically least relabeling.
struct CanonicalForm {
    DynkinDiagram diagram;
    std::vector<int> order; ///< canonical vertex k is input vertex order[k]
    std::vector<std::int64_t> key;
};

inline CanonicalForm canonical_form(const DynkinDiagram& d) {
    const int n = d.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    CanonicalForm best{d, perm, d.encode()};
    while (std::next_permutation(perm.begin(), perm.end())) {
        auto candidate = d.permuted(perm);
        auto key = candidate.encode();
        if (key < best.key) best = CanonicalForm{std::move(candidate), perm, std::move(key)};
    }
    return best;
}

/// Vertex permutations that fix every label of d (labeled-graph automorphisms).
inline std::vector<std::vector<int>> automorphisms(const DynkinDiagram& d) {
    const int n = d.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        if (d.permuted(perm) == d) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/// Some permutation order with from.permuted(order) == to, if the diagrams are twist equivalent.
inline std::optional<std::vector<int>> relabeling(const DynkinDiagram& from, const DynkinDiagram& to) {
    if (from.size() != to.size() || from.context() != to.context()) return std::nullopt;
    std::vector<int> perm(from.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (from.permuted(perm) == to) return perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

/// Twist representative: q_ii = vertex label, q_ij = edge label for i < j, q_ji = 1.
inline Bicharacter bicharacter_from_diagram(const DynkinDiagram& d) {
    const int n = d.size();
    const auto one = GroupElement::identity(d.context());
    std::vector<GroupElement> q(static_cast<std::size_t>(n) * n, one);
    for (int i = 0; i < n; ++i) {
        q[static_cast<std::size_t>(i) * n + i] = d.vertex(i);
        for (int j = i + 1; j < n; ++j) q[static_cast<std::size_t>(i) * n + j] = d.edge(i, j);
    }
    return Bicharacter(d.context(), n, std::move(q));
}

// m-values ------------------------------------------------------------------

/**
 * m-value from the labels alone: least m >= 0 with vertex^m * edge == 1, or
 * with vertex^(m+1) == 1 and vertex != 1. std::nullopt when neither exists.
 */
inline std::optional<std::int64_t> m_value(const GroupElement& vertex, const GroupElement& edge) {
    std::optional<std::int64_t> best = solve_min_exponent(vertex, edge);
    if (!is_one(vertex)) {
        if (auto ord = order(vertex)) {
            const std::int64_t m = *ord - 1;
            if (!best || m < *best) best = m;
        }
    }
    return best;
}

inline constexpr std::int64_t kDiagonalMValue = -2;

inline std::optional<std::int64_t> m_value(const Bicharacter& chi, const Basis& f, int i, int j) {
    if (i == j) return kDiagonalMValue;
    return m_value(eval(chi, f[i], f[i]), sym(chi, f[i], f[j]));
}

inline Basis reflect_basis_unchecked(const Basis& f, int i, const std::vector<std::int64_t>& m) {
    Basis out = f;
    for (int j = 0; j < f.size(); ++j) {
        if (j == i)
            out.v_[j] = -f[i];
        else if (m[j] != 0)
            out.v_[j] = f[j] + scaled(f[i], m[j]);
    }
    return out;
}

/// s_{f_i,F}(F): f_j -> f_j + m(f_i, f_j) f_i. Throws UndefinedMValue.
inline Basis reflect_basis(const Bicharacter& chi, const Basis& f, int i) {
    const int n = f.size();
    std::vector<std::int64_t> m(n, 0);
    const GroupElement qi = eval(chi, f[i], f[i]);
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        auto mv = m_value(qi, sym(chi, f[i], f[j]));
        if (!mv) throw UndefinedMValue(i, j);
        m[j] = *mv;
    }
    return reflect_basis_unchecked(f, i, m);
}

// diagrams -------------------------------------------------------------------

inline DynkinDiagram diagram(const Bicharacter& chi, const Basis& f) {
    const int n = f.size();
    std::vector<GroupElement> vertices;
    std::vector<GroupElement> edges(static_cast<std::size_t>(n) * n, GroupElement::identity(chi.context()));
    for (int i = 0; i < n; ++i) vertices.push_back(eval(chi, f[i], f[i]));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            auto s = sym(chi, f[i], f[j]);
            edges[static_cast<std::size_t>(i) * n + j] = s;
            edges[static_cast<std::size_t>(j) * n + i] = s;
        }
    return DynkinDiagram(std::move(vertices), std::move(edges));
}

inline DynkinDiagram diagram(const Bicharacter& chi) { return diagram(chi, Basis::standard(chi.rank())); }

/**
 * Diagram of the reflected basis computed from labels alone:
 *   q'_ii = q_ii, q'_jj = p_ij^m_ij q_jj, edge'_ij = p_ij^-2 edge_ij,
 *   edge'_jl = p_ij^m_il p_il^m_ij edge_jl,
 * with p_ij = 1 if q_ii^m edge_ij = 1 for some integer m, else q_ii^-1 edge_ij.
 */
inline DynkinDiagram reflect_diagram(const DynkinDiagram& d, int i) {
    const int n = d.size();
    const GroupElement& qi = d.vertex(i);
    std::vector<std::int64_t> m(n, 0);
    std::vector<GroupElement> p(n, GroupElement::identity(d.context()));
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const GroupElement& s = d.edge(i, j);
        auto mv = m_value(qi, s);
        if (!mv) throw UndefinedMValue(i, j);
        m[j] = *mv;
        const bool integral = solve_min_exponent(qi, s) || solve_min_exponent(inv(qi), s);
        if (!integral) p[j] = inv(qi) * s;
    }
    DynkinDiagram out = d;
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        out.set_vertex(j, pow(p[j], m[j]) * d.vertex(j));
        out.set_edge(i, j, pow(p[j], -2) * d.edge(i, j));
        for (int l = j + 1; l < n; ++l) {
            if (l == i) continue;
            out.set_edge(j, l, pow(p[j], m[l]) * pow(p[l], m[j]) * d.edge(j, l));
        }
    }
    return out;
}

// connectivity -----------------------------------------------------------------

inline std::vector<std::vector<int>> connected_components(const DynkinDiagram& d) {
    const int n = d.size();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> members{s};
        comp[s] = static_cast<int>(out.size());
        for (std::size_t k = 0; k < members.size(); ++k)
            for (int t = 0; t < n; ++t)
                if (comp[t] < 0 && d.has_edge(members[k], t)) {
                    comp[t] = comp[s];
                    members.push_back(t);
                }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

inline std::vector<std::vector<int>> connected_components(const Bicharacter& chi) {
    return connected_components(diagram(chi));
}

inline bool is_connected(const DynkinDiagram& d) { return connected_components(d).size() == 1; }

// Cartan type -----------------------------------------------------------------

struct CartanVerdict {
    bool is_cartan = false;
    std::optional<IntMatrix> cartan_matrix; ///< present when every m-value exists
    bool is_finite_type = false;
    std::string reason;
};

namespace detail {

/// Symmetrize each component with positive weights and test leading principal minors.
inline bool is_finite_type_cartan(const IntMatrix& c, const std::vector<std::vector<int>>& components) {
    for (const auto& comp : components) {
        const int k = static_cast<int>(comp.size());
        std::vector<Rational> w(k);
        std::vector<bool> seen(k, false);
        w[0] = 1;
        seen[0] = true;
        std::vector<int> queue{0};
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const int a = queue[h];
            for (int b = 0; b < k; ++b) {
                const std::int64_t cab = c(comp[a], comp[b]), cba = c(comp[b], comp[a]);
                if (a == b || (cab == 0 && cba == 0)) continue;
                if (cab == 0 || cba == 0) return false;
                const Rational wb = w[a] * Rational(cab, cba);
                if (!seen[b]) {
                    seen[b] = true;
                    w[b] = wb;
                    queue.push_back(b);
                } else if (!(w[b] == wb)) {
                    return false;
                }
            }
        }
        std::int64_t den = 1;
        for (const auto& x : w) den = checked::lcm(den, x.den);
        for (int size = 1; size <= k; ++size) {
            IntMatrix minor(size);
            for (int a = 0; a < size; ++a)
                for (int b = 0; b < size; ++b)
                    minor(a, b) = checked::mul(checked::mul(w[a].num, den / w[a].den), c(comp[a], comp[b]));
            if (determinant(minor) <= 0) return false;
        }
    }
    return true;
}

} // namespace detail

inline CartanVerdict cartan_verdict(const Bicharacter& chi, const Basis& f) {
    const int n = chi.rank();
    CartanVerdict v;
    IntMatrix c(n);
    v.is_cartan = true;
    for (int i = 0; i < n; ++i) {
        const GroupElement qi = eval(chi, f[i], f[i]);
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                c(i, i) = 2;
                continue;
            }
            const GroupElement s = sym(chi, f[i], f[j]);
            auto m = m_value(qi, s);
            if (!m) {
                v.is_cartan = false;
                v.reason = "undefined m-value at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                return v;
            }
            c(i, j) = -*m;
            if (v.is_cartan && !is_one(pow(qi, *m) * s)) {
                v.is_cartan = false;
                v.reason = "q_ii^m(i,j) chi chi^op(e_i,e_j) != 1 at (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) + ")";
            }
        }
    }
    v.cartan_matrix = c;
    if (v.is_cartan) {
        v.is_finite_type = detail::is_finite_type_cartan(c, connected_components(diagram(chi, f)));
        if (!v.is_finite_type) v.reason = "Cartan matrix is not of finite type";
    }
    return v;
}

inline CartanVerdict cartan_verdict(const Bicharacter& chi) { return cartan_verdict(chi, Basis::standard(chi.rank())); }

} // namespace arsys
