#pragma once

/**
 * @file groupoid.hpp
 * @brief Breadth-first exploration of the Weyl groupoid of (chi, E).
 *
 * Objects are bases reached from the standard basis by reflections,
 * deduplicated as unordered sets of vectors. The search is level
 * synchronous and each level is processed in lexicographic order of the
 * object keys, so two runs produce identical object lists.
 *
 * The engine never claims that a groupoid is infinite. A search that
 * runs past one of the caps ends with Verdict::exceeded and names the cap.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "arsys/bicharacter.hpp"

namespace arsys {

struct Caps {
    std::int64_t max_objects = 100000;
    std::int64_t max_root_norm = 60;
    std::int64_t max_depth = 64;

    void validate() const {
        if (max_objects < 1 || max_root_norm < 1 || max_depth < 1) throw InputError("caps must be >= 1");
    }
};

enum class Cap { objects, root_norm, depth };

inline std::string to_string(Cap c) {
    switch (c) {
    case Cap::objects: return "max_objects";
    case Cap::root_norm: return "max_root_norm";
    case Cap::depth: return "max_depth";
    }
    return "?";
}

enum class Verdict { finite, not_full, exceeded };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::finite: return "Finite";
    case Verdict::not_full: return "NotFull";
    case Verdict::exceeded: return "Exceeded";
    }
    return "?";
}

struct GroupoidObject {
    Basis basis;
    IntMatrix transform; ///< T with T(E) = basis, i.e. the basis vectors as columns
    DynkinDiagram diagram;
    int depth = 0;
};

/// Object and vertex pair where an m-value does not exist.
struct NotFullWitness {
    Basis basis;
    int source = 0;
    int target = 0;
};

struct ExplorationResult {
    Verdict verdict = Verdict::finite;
    std::optional<NotFullWitness> witness;
    std::optional<Cap> exceeded_cap;
    std::vector<GroupoidObject> objects;
    std::vector<IntVector> roots; ///< sorted; filled when verdict is finite
    int rank = 0;

    bool finite() const { return verdict == Verdict::finite; }

    /// Index of the object whose basis equals f as a set, if any.
    std::optional<std::size_t> find_object(const Basis& f) const {
        const auto key = f.set_key();
        for (std::size_t k = 0; k < objects.size(); ++k)
            if (objects[k].basis.set_key() == key) return k;
        return std::nullopt;
    }

    bool contains_root(const IntVector& v) const { return std::binary_search(roots.begin(), roots.end(), v); }
};

namespace detail {

struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
        return h;
    }
};

} // namespace detail

inline ExplorationResult explore(const Bicharacter& chi, const Caps& caps = {}) {
    caps.validate();
    const int n = chi.rank();
    ExplorationResult result;
    result.rank = n;

    std::unordered_set<std::vector<std::int64_t>, detail::KeyHash> seen;
    std::vector<std::pair<std::vector<std::int64_t>, Basis>> level;
    {
        Basis e = Basis::standard(n);
        auto key = e.set_key();
        seen.insert(key);
        level.emplace_back(std::move(key), std::move(e));
    }

    auto stop = [&](Cap c) {
        result.verdict = Verdict::exceeded;
        result.exceeded_cap = c;
        return result;
    };

    for (int depth = 0; !level.empty(); ++depth) {
        std::sort(level.begin(), level.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<std::vector<std::int64_t>, Basis>> next;
        for (auto& [key, basis] : level) {
            result.objects.push_back(GroupoidObject{basis, basis.matrix(), diagram(chi, basis), depth});
            const DynkinDiagram d = result.objects.back().diagram;
            for (int i = 0; i < n; ++i) {
                std::vector<std::int64_t> m(n, 0);
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    auto mv = m_value(d.vertex(i), d.edge(i, j));
                    if (!mv) {
                        result.verdict = Verdict::not_full;
                        result.witness = NotFullWitness{basis, i, j};
                        return result;
                    }
                    m[j] = *mv;
                }
                Basis reflected = reflect_basis_unchecked(basis, i, m);
                for (const auto& v : reflected.vectors())
                    if (norm_inf(v) > caps.max_root_norm) return stop(Cap::root_norm);
                auto rkey = reflected.set_key();
                if (seen.contains(rkey)) continue;
                if (depth + 1 > caps.max_depth) return stop(Cap::depth);
                if (static_cast<std::int64_t>(seen.size()) + 1 > caps.max_objects) return stop(Cap::objects);
                seen.insert(rkey);
                next.emplace_back(std::move(rkey), std::move(reflected));
            }
        }
        level = std::move(next);
    }

    std::set<IntVector> roots;
    for (const auto& o : result.objects)
        for (const auto& v : o.basis.vectors()) {
            roots.insert(v);
            roots.insert(-v);
        }
    result.roots.assign(roots.begin(), roots.end());
    return result;
}

/// Outcome of the arithmetic-root-system decision.
struct ArithmeticDecision {
    enum class Kind { yes, no, indeterminate } kind = Kind::indeterminate;
    std::vector<IntVector> roots; ///< set when yes
    std::string reason;           ///< set when no or indeterminate

    bool yes() const { return kind == Kind::yes; }
};

inline std::string to_string(ArithmeticDecision::Kind k) {
    switch (k) {
    case ArithmeticDecision::Kind::yes: return "yes";
    case ArithmeticDecision::Kind::no: return "no";
    case ArithmeticDecision::Kind::indeterminate: return "indeterminate";
    }
    return "?";
}

inline ArithmeticDecision decide(const ExplorationResult& r) {
    ArithmeticDecision out;
    switch (r.verdict) {
    case Verdict::finite:
        out.kind = ArithmeticDecision::Kind::yes;
        out.roots = r.roots;
        break;
    case Verdict::not_full:
        out.kind = ArithmeticDecision::Kind::no;
        out.reason = "m-value undefined at vertex pair (" + std::to_string(r.witness->source + 1) + "," +
                     std::to_string(r.witness->target + 1) + ") of a reachable basis";
        break;
    case Verdict::exceeded:
        out.kind = ArithmeticDecision::Kind::indeterminate;
        out.reason = "Exceeded(" + to_string(*r.exceeded_cap) + ")";
        break;
    }
    return out;
}

inline ArithmeticDecision is_arithmetic(const Bicharacter& chi, const Caps& caps = {}) {
    return decide(explore(chi, caps));
}

/// Roots that are nonnegative combinations of f. Checks that they and their negatives exhaust the roots.
inline std::vector<IntVector> positive_roots(const ExplorationResult& r, const Basis& f) {
    if (!r.finite()) throw InputError("positive roots need a finite exploration result");
    if (!r.find_object(f)) throw InputError("basis is not an object of the Weyl groupoid");
    const IntMatrix inv = unimodular_inverse(f.matrix());
    std::vector<IntVector> pos;
    std::size_t negative = 0;
    for (const auto& beta : r.roots) {
        const IntVector c = inv * beta;
        const bool nonneg = std::all_of(c.begin(), c.end(), [](auto x) { return x >= 0; });
        const bool nonpos = std::all_of(c.begin(), c.end(), [](auto x) { return x <= 0; });
        if (nonneg)
            pos.push_back(beta);
        else if (nonpos)
            ++negative;
        else
            throw InvariantViolation("root " + to_string(beta) + " has coordinates of both signs w.r.t. the basis");
    }
    if (pos.size() != negative) throw InvariantViolation("positive and negative roots are not in bijection");
    return pos;
}

inline std::vector<IntVector> positive_roots(const ExplorationResult& r) {
    return positive_roots(r, Basis::standard(r.rank));
}

} // namespace arsys
