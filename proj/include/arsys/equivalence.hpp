#pragma once

/**
 * @file equivalence.hpp
 * @brief Diagram graph, twist and Weyl equivalence, and the group W^B.
 *
 * Nodes of the diagram graph are twist classes, stored as canonical
 * diagrams; arrows are reflections labeled by the canonical vertex index.
 *
 * W^B is the group of lattice automorphisms T with T(E) an object of the
 * Weyl groupoid and chi(Te, Te) = chi(e, e) for all e. It is generated by
 * comparing, for every node, the representative basis with the images of
 * that basis under diagram automorphisms and single reflections
 * (Schreier generators over a spanning tree of the diagram graph).
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arsys/groupoid.hpp"

namespace arsys {

// contexts ---------------------------------------------------------------------

inline DynkinDiagram embed(const DynkinDiagram& d, const GroupContext& target) {
    const int n = d.size();
    std::vector<GroupElement> v, e;
    for (int i = 0; i < n; ++i) v.push_back(embed(d.vertex(i), target));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) e.push_back(embed(d.edge(i, j), target));
    return DynkinDiagram(std::move(v), std::move(e));
}

inline Bicharacter embed(const Bicharacter& chi, const GroupContext& target) {
    std::vector<GroupElement> q;
    for (const auto& x : chi.constants()) q.push_back(embed(x, target));
    return Bicharacter(target, chi.rank(), std::move(q));
}

// diagram graph --------------------------------------------------------------------

struct DiagramGraph {
    Verdict verdict = Verdict::finite;
    std::optional<Cap> exceeded_cap;
    /// First node/vertex pair where a reflection is undefined.
    std::optional<std::pair<int, std::pair<int, int>>> undefined_at;
    std::vector<DynkinDiagram> nodes; ///< canonical diagrams, BFS order
    std::vector<std::vector<int>> arrows; ///< arrows[node][vertex]; -1 if undefined

    bool finite() const { return verdict == Verdict::finite; }

    std::optional<int> find(const DynkinDiagram& d) const {
        const auto key = canonical_form(d).diagram;
        for (std::size_t k = 0; k < nodes.size(); ++k)
            if (nodes[k] == key) return static_cast<int>(k);
        return std::nullopt;
    }
};

inline DiagramGraph build_diagram_graph(const DynkinDiagram& start, const Caps& caps = {}) {
    caps.validate();
    DiagramGraph g;
    std::map<std::vector<std::int64_t>, int> index;
    auto add = [&](CanonicalForm cf) {
        auto [it, inserted] = index.emplace(cf.key, static_cast<int>(g.nodes.size()));
        if (inserted) {
            g.nodes.push_back(std::move(cf.diagram));
            g.arrows.emplace_back();
        }
        return it->second;
    };
    add(canonical_form(start));
    const int n = start.size();
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        for (int i = 0; i < n; ++i) {
            try {
                auto reflected = reflect_diagram(g.nodes[k], i);
                auto cf = canonical_form(reflected);
                if (!index.contains(cf.key) && static_cast<std::int64_t>(g.nodes.size()) >= caps.max_objects) {
                    g.verdict = Verdict::exceeded;
                    g.exceeded_cap = Cap::objects;
                    return g;
                }
                const int target = add(std::move(cf));
                g.arrows[k].push_back(target);
            } catch (const UndefinedMValue& u) {
                g.arrows[k].push_back(-1);
                if (g.verdict == Verdict::finite) {
                    g.verdict = Verdict::not_full;
                    g.undefined_at = {static_cast<int>(k), {u.source(), u.target()}};
                }
            }
        }
    }
    return g;
}

inline DiagramGraph build_diagram_graph(const Bicharacter& chi, const Caps& caps = {}) {
    return build_diagram_graph(diagram(chi), caps);
}

// twist and Weyl equivalence ---------------------------------------------------------

inline bool twist_equivalent(const DynkinDiagram& a, const DynkinDiagram& b) {
    if (a.size() != b.size()) return false;
    const auto ctx = common_context(a.context(), b.context());
    return canonical_form(embed(a, ctx)).key == canonical_form(embed(b, ctx)).key;
}

inline bool twist_equivalent(const Bicharacter& a, const Bicharacter& b) {
    return twist_equivalent(diagram(a), diagram(b));
}

enum class Decision { yes, no, indeterminate };

inline std::string to_string(Decision d) {
    switch (d) {
    case Decision::yes: return "yes";
    case Decision::no: return "no";
    case Decision::indeterminate: return "indeterminate";
    }
    return "?";
}

/// Weyl equivalence decided by intersecting the node sets of the two diagram graphs.
inline Decision weyl_equivalent(const DynkinDiagram& a, const DynkinDiagram& b, const Caps& caps = {}) {
    if (a.size() != b.size()) return Decision::no;
    const auto ctx = common_context(a.context(), b.context());
    const auto ga = build_diagram_graph(embed(a, ctx), caps);
    if (ga.verdict == Verdict::exceeded) return Decision::indeterminate;
    if (ga.find(embed(b, ctx))) return Decision::yes;
    const auto gb = build_diagram_graph(embed(b, ctx), caps);
    if (gb.verdict == Verdict::exceeded) return Decision::indeterminate;
    for (const auto& node : gb.nodes)
        if (ga.find(node)) return Decision::yes;
    return Decision::no;
}

inline Decision weyl_equivalent(const Bicharacter& a, const Bicharacter& b, const Caps& caps = {}) {
    return weyl_equivalent(diagram(a), diagram(b), caps);
}

// W^B --------------------------------------------------------------------------------

struct WBGenerator {
    IntMatrix matrix;
    int node = 0;                 ///< diagram-graph node whose representative produced it
    std::vector<int> automorphism; ///< diagram automorphism tau applied first
    int vertex = -1;              ///< reflected vertex after tau, -1 for tau alone
};

struct WBGroup {
    std::vector<IntMatrix> elements; ///< sorted
    std::vector<WBGenerator> generators;

    std::size_t order() const { return elements.size(); }
    bool contains(const IntMatrix& m) const { return std::binary_search(elements.begin(), elements.end(), m); }
};

struct WBResult {
    Verdict verdict = Verdict::finite;
    std::optional<Cap> exceeded_cap;
    std::optional<NotFullWitness> witness;
    WBGroup group;
    std::size_t graph_nodes = 0;
    std::vector<Basis> representatives; ///< per node, ordered so its diagram is the canonical one

    bool finite() const { return verdict == Verdict::finite; }
};

namespace detail {

inline std::optional<Cap> close_group(WBGroup& g, const Caps& caps) {
    const int n = g.generators.empty() ? 0 : g.generators.front().matrix.size();
    if (n == 0) return std::nullopt;
    std::vector<IntMatrix> gens;
    for (const auto& x : g.generators)
        if (std::find(gens.begin(), gens.end(), x.matrix) == gens.end()) gens.push_back(x.matrix);

    // Cheap pass first: an element of infinite order shows up as a power
    // with entries beyond the root-norm cap long before the full ball does.
    std::vector<IntMatrix> probes = gens;
    for (const auto& a : gens)
        for (const auto& b : gens) probes.push_back(a * b);
    const IntMatrix id = IntMatrix::identity(n);
    for (const auto& p : probes) {
        IntMatrix x = p;
        while (x != id) {
            if (x.max_abs() > caps.max_root_norm) return Cap::root_norm;
            x = x * p;
        }
    }

    std::set<IntMatrix> elements{id};
    std::vector<IntMatrix> frontier{id};
    while (!frontier.empty()) {
        std::vector<IntMatrix> next;
        for (const auto& x : frontier)
            for (const auto& s : gens) {
                IntMatrix y = s * x;
                if (y.max_abs() > caps.max_root_norm) return Cap::root_norm;
                if (elements.insert(y).second) {
                    if (static_cast<std::int64_t>(elements.size()) > caps.max_objects) return Cap::objects;
                    next.push_back(std::move(y));
                }
            }
        frontier = std::move(next);
    }
    g.elements.assign(elements.begin(), elements.end());
    return std::nullopt;
}

} // namespace detail

/**
 * W^B from Schreier generators over the diagram graph, closed under products.
 * Reports not_full or exceeded instead of a group when the search cannot finish.
 */
inline WBResult generate_WB(const Bicharacter& chi, const Caps& caps = {}) {
    caps.validate();
    const int n = chi.rank();
    WBResult out;
    std::map<std::vector<std::int64_t>, int> index;
    std::vector<DynkinDiagram> canon;

    auto add_node = [&](const Basis& f) -> std::pair<int, Basis> {
        auto cf = canonical_form(diagram(chi, f));
        Basis ordered = f.permuted(cf.order);
        auto it = index.find(cf.key);
        if (it != index.end()) return {it->second, ordered};
        const int id = static_cast<int>(canon.size());
        index.emplace(cf.key, id);
        canon.push_back(cf.diagram);
        out.representatives.push_back(ordered);
        return {id, ordered};
    };

    add_node(Basis::standard(n));
    for (std::size_t j = 0; j < canon.size(); ++j) {
        const Basis fj = out.representatives[j];
        const IntMatrix fj_inv = unimodular_inverse(fj.matrix());
        for (const auto& tau : automorphisms(canon[j])) {
            const Basis ft = fj.permuted(tau);
            IntMatrix u = ft.matrix() * fj_inv;
            if (u != IntMatrix::identity(n))
                out.group.generators.push_back({std::move(u), static_cast<int>(j), tau, -1});
            for (int k = 0; k < n; ++k) {
                Basis reflected;
                try {
                    reflected = reflect_basis(chi, ft, k);
                } catch (const UndefinedMValue& e) {
                    out.verdict = Verdict::not_full;
                    out.witness = NotFullWitness{ft, e.source(), e.target()};
                    out.graph_nodes = canon.size();
                    return out;
                }
                for (const auto& v : reflected.vectors())
                    if (norm_inf(v) > caps.max_root_norm) {
                        out.verdict = Verdict::exceeded;
                        out.exceeded_cap = Cap::root_norm;
                        out.graph_nodes = canon.size();
                        return out;
                    }
                const std::size_t before = canon.size();
                auto [target, ordered] = add_node(reflected);
                if (canon.size() > before) {
                    if (static_cast<std::int64_t>(canon.size()) > caps.max_objects) {
                        out.verdict = Verdict::exceeded;
                        out.exceeded_cap = Cap::objects;
                        out.graph_nodes = canon.size();
                        return out;
                    }
                    continue; // tree edge
                }
                IntMatrix w = ordered.matrix() * unimodular_inverse(out.representatives[target].matrix());
                if (w != IntMatrix::identity(n))
                    out.group.generators.push_back({std::move(w), static_cast<int>(j), tau, k});
            }
        }
    }
    out.graph_nodes = canon.size();
    if (out.group.generators.empty()) {
        out.group.elements = {IntMatrix::identity(n)};
        return out;
    }
    if (auto cap = detail::close_group(out.group, caps)) {
        out.verdict = Verdict::exceeded;
        out.exceeded_cap = cap;
    }
    return out;
}

/// Direct route: all orderings of all objects whose ordered diagram equals the diagram of E.
inline WBGroup wb_from_objects(const Bicharacter& chi, const ExplorationResult& r) {
    if (!r.finite()) throw InputError("W^B from objects needs a finite exploration result");
    const int n = chi.rank();
    const DynkinDiagram d0 = diagram(chi);
    std::set<IntMatrix> elements;
    std::vector<int> perm(n);
    for (const auto& o : r.objects) {
        std::iota(perm.begin(), perm.end(), 0);
        do {
            Basis f = o.basis.permuted(perm);
            if (diagram(chi, f) == d0) elements.insert(f.matrix());
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    WBGroup g;
    g.elements.assign(elements.begin(), elements.end());
    return g;
}

/// True when every element preserves all q_ii and all chi chi^op(e_i, e_j).
inline bool preserves_diagram(const Bicharacter& chi, const IntMatrix& t) {
    return diagram(chi, Basis(t.columns())) == diagram(chi);
}

inline bool is_closed_group(const WBGroup& g) {
    if (g.elements.empty()) return false;
    const int n = g.elements.front().size();
    if (!g.contains(IntMatrix::identity(n))) return false;
    for (const auto& a : g.elements)
        for (const auto& b : g.elements)
            if (!g.contains(a * b)) return false;
    return true;
}

// group descriptors ---------------------------------------------------------------------

struct GroupDescriptor {
    std::size_t order = 0;
    std::map<std::int64_t, std::int64_t> element_orders; ///< element order -> count
    std::vector<std::int64_t> abelian_invariants;        ///< prime-power orders of the abelianization
    std::vector<std::string> names; ///< every known symbol whose presentation the group realizes
    std::string name = "unknown";   ///< first entry of names, or "unknown"

    bool matches(const std::string& symbol) const {
        return std::find(names.begin(), names.end(), symbol) != names.end();
    }
};

/**
 * A group symbol with its Coxeter presentation: generators s_1..s_k with
 * s_i^2 = 1 and (s_i s_j)^m_ij = 1. Z2 x [m] adds a central involution.
 */
struct KnownGroup {
    const char* name;
    std::vector<std::vector<int>> coxeter; ///< m_ij, diagonal 1
    std::size_t order;                     ///< frozen; checked by coset enumeration in the tests
    std::map<std::int64_t, std::int64_t> element_orders;
};

inline const std::vector<KnownGroup>& known_groups() {
    static const std::vector<KnownGroup> table = {
        {"trivial", {}, 1, {{1, 1}}},
        {"Z2^3", {{1, 2, 2}, {2, 1, 2}, {2, 2, 1}}, 8, {{1, 1}, {2, 7}}},
        {"Z2x[3]", {{1, 2, 2}, {2, 1, 3}, {2, 3, 1}}, 12, {{1, 1}, {2, 7}, {3, 2}, {6, 2}}},
        {"[6]", {{1, 6}, {6, 1}}, 12, {{1, 1}, {2, 7}, {3, 2}, {6, 2}}},
        {"Z2x[4]", {{1, 2, 2}, {2, 1, 4}, {2, 4, 1}}, 16, {{1, 1}, {2, 11}, {4, 4}}},
        {"Z2x[6]", {{1, 2, 2}, {2, 1, 6}, {2, 6, 1}}, 24, {{1, 1}, {2, 15}, {3, 2}, {6, 6}}},
        {"[3,4]", {{1, 3, 2}, {3, 1, 4}, {2, 4, 1}}, 48, {{1, 1}, {2, 19}, {3, 8}, {4, 12}, {6, 8}}},
    };
    return table;
}

namespace detail {

inline std::int64_t element_order(const IntMatrix& m) {
    const IntMatrix id = IntMatrix::identity(m.size());
    IntMatrix x = m;
    std::int64_t k = 1;
    while (x != id) {
        x = x * m;
        ++k;
    }
    return k;
}

inline std::set<IntMatrix> closure(const std::vector<IntMatrix>& gens, int n) {
    std::set<IntMatrix> el{IntMatrix::identity(n)};
    std::vector<IntMatrix> frontier{IntMatrix::identity(n)};
    while (!frontier.empty()) {
        std::vector<IntMatrix> next;
        for (const auto& x : frontier)
            for (const auto& s : gens)
                if (auto y = s * x; el.insert(y).second) next.push_back(std::move(y));
        frontier = std::move(next);
    }
    return el;
}

/// Reflections: involutions T with rank(T - I) = 1.
inline bool is_reflection(const IntMatrix& t) {
    const int n = t.size();
    const IntMatrix id = IntMatrix::identity(n);
    if (t == id || t * t != id) return false;
    std::vector<IntVector> rows;
    for (int r = 0; r < n; ++r) {
        IntVector row(n);
        for (int c = 0; c < n; ++c) row[c] = t(r, c) - id(r, c);
        rows.push_back(row);
    }
    return rank(rows) == 1;
}

inline std::vector<std::int64_t> abelian_invariants(const std::vector<IntMatrix>& elements) {
    if (elements.empty()) return {};
    const int n = elements.front().size();
    std::vector<IntMatrix> commutators;
    std::set<IntMatrix> seen;
    for (const auto& a : elements)
        for (const auto& b : elements) {
            auto c = a * b * unimodular_inverse(b * a);
            if (seen.insert(c).second) commutators.push_back(c);
        }
    const auto derived = closure(commutators, n);
    // Order of each coset gG' in the quotient.
    std::map<std::int64_t, std::int64_t> coset_orders;
    for (const auto& g : elements) {
        IntMatrix x = g;
        std::int64_t k = 1;
        while (!derived.contains(x)) {
            x = x * g;
            ++k;
        }
        coset_orders[k] += 1;
    }
    const auto dsize = static_cast<std::int64_t>(derived.size());
    for (auto& [k, c] : coset_orders) c /= dsize;
    std::int64_t qorder = 0;
    for (auto& [k, c] : coset_orders) qorder += c;

    // For each prime p, |A[p^k]| determines the multiplicities of the p-power factors.
    std::vector<std::int64_t> invariants;
    std::int64_t rest = qorder;
    for (std::int64_t p = 2; rest > 1; ++p) {
        if (rest % p != 0) continue;
        while (rest % p == 0) rest /= p;
        auto count_dividing = [&](std::int64_t d) {
            std::int64_t c = 0;
            for (auto& [k, cnt] : coset_orders)
                if (d % k == 0) c += cnt;
            return c;
        };
        auto logp = [&](std::int64_t x) {
            int e = 0;
            while (x > 1) {
                x /= p;
                ++e;
            }
            return e;
        };
        std::vector<int> at_least; // at_least[k-1] = #{factors with exponent >= k}
        std::int64_t pk = 1;
        int prev = 0;
        for (int k = 1;; ++k) {
            pk *= p;
            const int e = logp(count_dividing(pk));
            if (e == prev) break;
            at_least.push_back(e - prev);
            prev = e;
        }
        for (std::size_t k = 0; k < at_least.size(); ++k) {
            const int exactly = at_least[k] - (k + 1 < at_least.size() ? at_least[k + 1] : 0);
            std::int64_t v = 1;
            for (std::size_t t = 0; t <= k; ++t) v *= p;
            for (int t = 0; t < exactly; ++t) invariants.push_back(v);
        }
    }
    std::sort(invariants.begin(), invariants.end());
    return invariants;
}

} // namespace detail

namespace detail {

/**
 * True when G contains involutions t_1..t_k satisfying the Coxeter relations
 * and generating G. With |G| equal to the order of the presented group, G
 * is then a quotient of that group of the same size, hence isomorphic.
 */
inline bool realizes(const std::vector<IntMatrix>& elements, const KnownGroup& k) {
    if (elements.size() != k.order) return false;
    const int n = elements.front().size();
    const IntMatrix id = IntMatrix::identity(n);
    if (k.coxeter.empty()) return elements.size() == 1;
    std::vector<IntMatrix> involutions;
    for (const auto& x : elements)
        if (x != id && x * x == id) involutions.push_back(x);
    const std::size_t gens = k.coxeter.size();
    std::vector<IntMatrix> pick;
    auto power_is_one = [&](const IntMatrix& x, int m) {
        IntMatrix y = id;
        for (int e = 0; e < m; ++e) y = y * x;
        return y == id;
    };
    std::function<bool()> search = [&]() -> bool {
        const std::size_t i = pick.size();
        if (i == gens) return closure(pick, n).size() == elements.size();
        for (const auto& t : involutions) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) ok = power_is_one(pick[j] * t, k.coxeter[j][i]);
            if (!ok) continue;
            pick.push_back(t);
            if (search()) return true;
            pick.pop_back();
        }
        return false;
    };
    return search();
}

} // namespace detail

/**
 * Order, element orders, abelianization, and the known symbols whose
 * presentation the group realizes. Isomorphic symbols all match; Z2x[3]
 * and [6] are both dihedral of order 12, so either may name the same group.
 */
inline GroupDescriptor describe_group(const WBGroup& g) {
    GroupDescriptor d;
    d.order = g.elements.size();
    if (g.elements.empty()) return d;
    for (const auto& x : g.elements) d.element_orders[detail::element_order(x)] += 1;
    d.abelian_invariants = detail::abelian_invariants(g.elements);
    for (const auto& k : known_groups())
        if (k.order == d.order && k.element_orders == d.element_orders && detail::realizes(g.elements, k))
            d.names.push_back(k.name);
    if (!d.names.empty()) d.name = d.names.front();
    return d;
}

// finiteness criterion --------------------------------------------------------------------

/**
 * Full and finite iff the diagram graph and W^B are finite, decided without
 * enumerating groupoid objects. yes: both finite; no: a reachable
 * reflection is undefined; indeterminate: a cap was hit.
 */
inline Decision finiteness_criterion(const Bicharacter& chi, const Caps& caps = {}) {
    const auto g = build_diagram_graph(chi, caps);
    if (g.verdict == Verdict::not_full) return Decision::no;
    if (g.verdict == Verdict::exceeded) return Decision::indeterminate;
    const auto wb = generate_WB(chi, caps);
    if (wb.verdict == Verdict::not_full) return Decision::no;
    if (wb.verdict == Verdict::exceeded) return Decision::indeterminate;
    return Decision::yes;
}

} // namespace arsys
