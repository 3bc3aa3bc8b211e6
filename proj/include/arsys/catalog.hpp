#pragma once

/**
 * @file catalog.hpp
 * @brief The rank 2 and rank 3 classification tables as data, their
 *        instantiation, the verification run and the rank-3 search.
 *
 * Each catalog line is one diagram template. Labels are words in the row
 * parameters: an optional leading '-', then factors `name` or `name^k`
 * joined by '*'; "1" and "-1" are literals.
 */

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "arsys/equivalence.hpp"

namespace arsys {

// label words ------------------------------------------------------------------------

struct WordFactor {
    std::string name;
    std::int64_t exponent = 1;
};

struct Word {
    bool negative = false;
    std::vector<WordFactor> factors;
};

inline Word parse_word(const std::string& text) {
    Word w;
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) {
        throw InputError("label \"" + text + "\": " + why + " at offset " + std::to_string(pos));
    };
    if (pos < text.size() && text[pos] == '-') {
        w.negative = true;
        ++pos;
    }
    if (text.substr(pos) == "1") return w;
    while (true) {
        const std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
        if (pos == start || std::isdigit(static_cast<unsigned char>(text[start]))) fail("expected a parameter name");
        WordFactor f{text.substr(start, pos - start), 1};
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            const std::size_t es = pos;
            if (pos < text.size() && text[pos] == '-') ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == es || (pos == es + 1 && text[es] == '-')) fail("expected an exponent");
            f.exponent = std::stoll(text.substr(es, pos - es));
        }
        w.factors.push_back(std::move(f));
        if (pos == text.size()) break;
        if (text[pos] != '*') fail("expected '*'");
        ++pos;
    }
    return w;
}

using Assignment = std::map<std::string, GroupElement>;

inline GroupElement evaluate(const Word& w, const Assignment& values, const GroupContext& ctx) {
    GroupElement r = w.negative ? GroupElement::minus_one(ctx) : GroupElement::identity(ctx);
    for (const auto& f : w.factors) {
        auto it = values.find(f.name);
        if (it == values.end()) throw InputError("parameter " + f.name + " has no value");
        r = r * pow(embed(it->second, ctx), f.exponent);
    }
    return r;
}

inline GroupElement evaluate(const std::string& word, const Assignment& values, const GroupContext& ctx) {
    return evaluate(parse_word(word), values, ctx);
}

// catalog entries ----------------------------------------------------------------------

struct Constraint {
    enum class Kind { not_equal, order_in, order_not, distinct } kind = Kind::not_equal;
    std::string word;                 ///< not_equal, order_in, order_not
    std::vector<std::string> values;  ///< not_equal
    std::vector<std::int64_t> orders; ///< order_in, order_not
    std::vector<std::string> words;   ///< distinct
    std::string text;                 ///< human-readable clause, used in errors
};

struct TemplateEdge {
    int i = 0;
    int j = 0;
    std::string label;
};

struct CatalogTemplate {
    int table = 0;
    int row = 0;
    int index = 0; ///< 1-based position within the row
    std::string shape;
    std::vector<std::string> vertices;
    std::vector<TemplateEdge> edges;
    std::vector<std::string> params;
    std::map<std::string, std::string> derived;
    std::vector<Constraint> constraints;
    std::optional<std::string> wb;

    std::string id() const {
        return "T" + std::to_string(table) + "/row" + std::to_string(row) + "/" + std::to_string(index);
    }
    int rank() const { return static_cast<int>(vertices.size()); }
};

struct Catalog {
    std::vector<CatalogTemplate> templates;

    std::vector<int> rows(int table) const {
        std::set<int> r;
        for (const auto& t : templates)
            if (t.table == table) r.insert(t.row);
        return {r.begin(), r.end()};
    }

    std::vector<const CatalogTemplate*> row(int table, int row) const {
        std::vector<const CatalogTemplate*> out;
        for (const auto& t : templates)
            if (t.table == table && t.row == row) out.push_back(&t);
        return out;
    }
};

namespace detail {

inline Constraint parse_constraint(const nlohmann::json& j) {
    Constraint c;
    const std::string kind = j.at("kind").get<std::string>();
    c.text = j.value("text", kind);
    if (kind == "not_equal") {
        c.kind = Constraint::Kind::not_equal;
        c.word = j.at("word").get<std::string>();
        c.values = j.at("values").get<std::vector<std::string>>();
    } else if (kind == "order_in" || kind == "order_not") {
        c.kind = kind == "order_in" ? Constraint::Kind::order_in : Constraint::Kind::order_not;
        c.word = j.at("word").get<std::string>();
        c.orders = j.at("orders").get<std::vector<std::int64_t>>();
    } else if (kind == "distinct") {
        c.kind = Constraint::Kind::distinct;
        c.words = j.at("words").get<std::vector<std::string>>();
    } else {
        throw InputError("unknown constraint kind \"" + kind + "\"");
    }
    return c;
}

inline CatalogTemplate parse_template(const nlohmann::json& j) {
    CatalogTemplate t;
    t.table = j.at("table").get<int>();
    t.row = j.at("row").get<int>();
    t.index = j.at("template").get<int>();
    t.shape = j.at("shape").get<std::string>();
    t.vertices = j.at("vertices").get<std::vector<std::string>>();
    for (const auto& e : j.at("edges")) {
        TemplateEdge te{e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<std::string>()};
        if (te.i < 0 || te.j < 0 || te.i >= t.rank() || te.j >= t.rank() || te.i == te.j)
            throw InputError(t.id() + ": bad edge endpoints");
        t.edges.push_back(std::move(te));
    }
    t.params = j.at("params").get<std::vector<std::string>>();
    if (j.contains("derived"))
        for (auto it = j.at("derived").begin(); it != j.at("derived").end(); ++it)
            t.derived[it.key()] = it.value().get<std::string>();
    for (const auto& c : j.at("constraints")) t.constraints.push_back(parse_constraint(c));
    if (j.contains("wb") && !j.at("wb").is_null()) t.wb = j.at("wb").get<std::string>();
    const int expected = t.table == 1 ? 2 : 3;
    if (t.rank() != expected) throw InputError(t.id() + ": wrong number of vertices");
    // Validate every label word up front.
    for (const auto& v : t.vertices) parse_word(v);
    for (const auto& e : t.edges) parse_word(e.label);
    return t;
}

} // namespace detail

inline Catalog parse_catalog(std::istream& in) {
    Catalog c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            c.templates.push_back(detail::parse_template(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw InputError("catalog line " + std::to_string(lineno) + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError("catalog line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return c;
}

inline std::string default_catalog_path() {
    if (const char* env = std::getenv("ARSYS_CATALOG")) return env;
#ifdef ARSYS_DEFAULT_CATALOG
    return ARSYS_DEFAULT_CATALOG;
#else
    return "data/catalog.jsonl";
#endif
}

inline Catalog load_catalog(const std::string& path = default_catalog_path()) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open catalog " + path);
    return parse_catalog(in);
}

// instantiation -----------------------------------------------------------------------

/// Adds derived parameters (e.g. s = q^-1 r^-1) to the assignment.
inline Assignment complete_assignment(const CatalogTemplate& t, Assignment a, const GroupContext& ctx) {
    for (const auto& p : t.params)
        if (!a.contains(p)) throw InputError(t.id() + ": parameter " + p + " has no value");
    for (const auto& [name, word] : t.derived) a.insert_or_assign(name, evaluate(word, a, ctx));
    return a;
}

inline bool satisfies(const Constraint& c, const Assignment& a, const GroupContext& ctx) {
    switch (c.kind) {
    case Constraint::Kind::not_equal: {
        const auto x = evaluate(c.word, a, ctx);
        return std::none_of(c.values.begin(), c.values.end(),
                            [&](const std::string& v) { return evaluate(v, a, ctx) == x; });
    }
    case Constraint::Kind::order_in:
    case Constraint::Kind::order_not: {
        const auto o = order(evaluate(c.word, a, ctx));
        const bool in = o && std::find(c.orders.begin(), c.orders.end(), *o) != c.orders.end();
        return c.kind == Constraint::Kind::order_in ? in : !in;
    }
    case Constraint::Kind::distinct: {
        std::vector<GroupElement> xs;
        for (const auto& w : c.words) xs.push_back(evaluate(w, a, ctx));
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = i + 1; j < xs.size(); ++j)
                if (xs[i] == xs[j]) return false;
        return true;
    }
    }
    return false;
}

/// First violated clause, if any.
inline std::optional<std::string> violated_constraint(const CatalogTemplate& t, const Assignment& a,
                                                      const GroupContext& ctx) {
    const Assignment full = complete_assignment(t, a, ctx);
    for (const auto& c : t.constraints)
        if (!satisfies(c, full, ctx)) return c.text;
    return std::nullopt;
}

/// Labels of the template under the assignment, in ctx.
inline DynkinDiagram template_diagram(const CatalogTemplate& t, const Assignment& a, const GroupContext& ctx) {
    const Assignment full = complete_assignment(t, a, ctx);
    const int n = t.rank();
    std::vector<GroupElement> v;
    for (const auto& w : t.vertices) v.push_back(evaluate(w, full, ctx));
    std::vector<GroupElement> e(static_cast<std::size_t>(n) * n, GroupElement::identity(ctx));
    for (const auto& edge : t.edges) {
        const auto x = evaluate(edge.label, full, ctx);
        e[edge.i * n + edge.j] = x;
        e[edge.j * n + edge.i] = x;
    }
    return DynkinDiagram(std::move(v), std::move(e));
}

/**
 * Bicharacter with q_ii the vertex label, q_ij the edge label for i < j and
 * q_ji = 1. Throws ConstraintViolation naming the first violated clause.
 */
inline Bicharacter instantiate(const CatalogTemplate& t, const Assignment& a, const GroupContext& ctx) {
    if (auto clause = violated_constraint(t, a, ctx)) throw ConstraintViolation(*clause);
    return bicharacter_from_diagram(template_diagram(t, a, ctx));
}

// sampling ---------------------------------------------------------------------------

struct Sample {
    std::string label;
    GroupContext context;
    Assignment values;
};

inline std::string describe(const Assignment& a) {
    std::string s;
    for (const auto& [k, v] : a) s += (s.empty() ? "" : ", ") + k + "=" + to_string(v);
    return s;
}

namespace detail {

inline std::vector<std::int64_t> root_orders(const std::vector<const CatalogTemplate*>& row, const std::string& p) {
    for (const auto& c : row.front()->constraints)
        if (c.kind == Constraint::Kind::order_in && c.word == p) return c.orders;
    return {};
}

inline bool admissible(const std::vector<const CatalogTemplate*>& row, const Assignment& a, const GroupContext& ctx) {
    return std::all_of(row.begin(), row.end(),
                       [&](const CatalogTemplate* t) { return !violated_constraint(*t, a, ctx); });
}

} // namespace detail

/**
 * Deterministic parameter choices for one row: a generic instance with free
 * generators plus up to max_special torsion specializations of the smallest
 * admissible orders. Rows fixed by roots of unity use distinct primitive powers.
 */
inline std::vector<Sample> row_samples(const std::vector<const CatalogTemplate*>& row, int max_special = 3) {
    if (row.empty()) return {};
    std::vector<std::string> free_params, root_params;
    for (const auto& p : row.front()->params)
        (detail::root_orders(row, p).empty() ? free_params : root_params).push_back(p);
    if (root_params.size() > 1) throw InputError("at most one root-of-unity parameter per row is supported");

    std::vector<Sample> out;
    const std::vector<std::int64_t> zorders =
        root_params.empty() ? std::vector<std::int64_t>{} : detail::root_orders(row, root_params.front());

    if (!free_params.empty()) {
        const std::int64_t zm = zorders.empty() ? 1 : zorders.front();
        {
            const auto ctx = GroupContext::make(static_cast<int>(free_params.size()), checked::lcm(2, zm));
            Assignment a;
            for (std::size_t k = 0; k < free_params.size(); ++k)
                a.emplace(free_params[k], GroupElement::free_generator(ctx, static_cast<int>(k)));
            if (!root_params.empty())
                a.emplace(root_params.front(), GroupElement::root_of_unity(ctx, ctx.torsion_order / zm));
            if (detail::admissible(row, a, ctx)) out.push_back({"generic", ctx, a});
        }
        for (std::int64_t m = 2; m <= 64 && static_cast<int>(out.size()) < max_special + 1; ++m) {
            const auto ctx = GroupContext::make(0, checked::lcm(checked::lcm(2, m), zm));
            const std::int64_t n = ctx.torsion_order;
            Assignment a;
            a.emplace(free_params[0], GroupElement::root_of_unity(ctx, n / m));
            if (!root_params.empty()) a.emplace(root_params.front(), GroupElement::root_of_unity(ctx, n / zm));
            bool found = free_params.size() == 1 && detail::admissible(row, a, ctx);
            for (std::int64_t b = 1; free_params.size() == 2 && b < n && !found; ++b) {
                a.insert_or_assign(free_params[1], GroupElement::root_of_unity(ctx, b));
                found = detail::admissible(row, a, ctx);
            }
            if (free_params.size() > 2) throw InputError("at most two free parameters per row are supported");
            if (found) out.push_back({free_params[0] + " of order " + std::to_string(m), ctx, a});
        }
        return out;
    }

    for (std::int64_t m : zorders) {
        const auto ctx = GroupContext::make(0, checked::lcm(2, m));
        for (std::int64_t k = 1; k < m && static_cast<int>(out.size()) < max_special + 1; ++k) {
            if (std::gcd(k, m) != 1) continue;
            Assignment a;
            a.emplace(root_params.front(), GroupElement::root_of_unity(ctx, k * (ctx.torsion_order / m)));
            if (detail::admissible(row, a, ctx))
                out.push_back({root_params.front() + " = z^" + std::to_string(k * (ctx.torsion_order / m)), ctx, a});
        }
    }
    return out;
}

// parallel helper ------------------------------------------------------------------------

namespace detail {

/// Runs f(i) for i in [0, n) on a pool of threads; results land by index.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f, unsigned workers = 0) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace detail

// verification -------------------------------------------------------------------------------

struct InstanceReport {
    int table = 0;
    int row = 0;
    std::string sample;
    GroupContext context;
    std::vector<std::string> failures;
    std::vector<DynkinDiagram> template_diagrams; ///< canonical, one per template
    std::vector<DynkinDiagram> graph_nodes;       ///< diagram graph of template 1
    std::size_t root_count = 0;                   ///< |Delta| of template 1
    std::optional<GroupDescriptor> wb;            ///< table 2 only
    bool extra_nodes = false; ///< the graph contains diagrams not listed for these parameters

    bool ok() const { return failures.empty(); }
};

struct VerificationReport {
    std::vector<InstanceReport> instances;
    std::size_t templates_checked = 0;
    /// For each table, rows x rows: true where representatives are Weyl equivalent.
    std::map<int, std::vector<std::vector<bool>>> cross_row;
    std::vector<std::string> failures; ///< every failure, itemized

    bool ok() const { return failures.empty(); }
};

namespace detail {

inline InstanceReport verify_instance(const std::vector<const CatalogTemplate*>& row, const Sample& s,
                                      const Caps& caps) {
    InstanceReport r;
    r.table = row.front()->table;
    r.row = row.front()->row;
    r.sample = s.label + " (" + describe(s.values) + ")";
    r.context = s.context;
    std::vector<Bicharacter> chis;
    for (const auto* t : row) {
        chis.push_back(instantiate(*t, s.values, s.context));
        r.template_diagrams.push_back(canonical_form(diagram(chis.back())).diagram);
        const auto res = explore(chis.back(), caps);
        if (!res.finite()) {
            r.failures.push_back(t->id() + ": is_arithmetic is " + to_string(decide(res).kind) + " (" +
                                 decide(res).reason + ")");
        } else if (t->index == 1) {
            r.root_count = res.roots.size();
        }
    }
    const auto graph = build_diagram_graph(diagram(chis.front()), caps);
    if (!graph.finite()) {
        r.failures.push_back("diagram graph of template 1 is " + to_string(graph.verdict));
        return r;
    }
    r.graph_nodes = graph.nodes;
    std::set<std::vector<std::int64_t>> node_keys;
    for (const auto& n : graph.nodes) node_keys.insert(canonical_form(n).key);
    std::set<std::vector<std::int64_t>> listed;
    for (std::size_t k = 0; k < row.size(); ++k) {
        const auto key = canonical_form(r.template_diagrams[k]).key;
        listed.insert(key);
        if (!node_keys.contains(key))
            r.failures.push_back(row[k]->id() + " is not Weyl equivalent to template 1");
    }
    r.extra_nodes = !std::includes(listed.begin(), listed.end(), node_keys.begin(), node_keys.end());

    if (row.front()->wb) {
        const auto wb = generate_WB(chis.front(), caps);
        if (!wb.finite()) {
            r.failures.push_back("W^B generation ended with " + to_string(wb.verdict));
        } else {
            r.wb = describe_group(wb.group);
            if (!r.wb->matches(*row.front()->wb))
                r.failures.push_back("W^B is " + r.wb->name + " of order " + std::to_string(r.wb->order) +
                                     ", expected " + *row.front()->wb);
        }
    }
    for (auto& f : r.failures)
        f = "T" + std::to_string(r.table) + " row " + std::to_string(r.row) + " [" + r.sample + "]: " + f;
    return r;
}

inline std::set<std::vector<std::int64_t>> node_keys_in(const InstanceReport& r, const GroupContext& ctx) {
    std::set<std::vector<std::int64_t>> keys;
    for (const auto& n : r.graph_nodes) keys.insert(canonical_form(embed(n, ctx)).key);
    return keys;
}

inline bool intersects(const std::set<std::vector<std::int64_t>>& a, const std::set<std::vector<std::int64_t>>& b) {
    return std::any_of(a.begin(), a.end(), [&](const auto& k) { return b.contains(k); });
}

} // namespace detail

/**
 * Checks every template of every row at every sample: arithmetic, Weyl
 * equivalent within the row, the expected W^B for rank 3. Instances of
 * different rows must lie in different Weyl classes; instances of one row at
 * different parameters must lie in the same class or in disjoint ones.
 */
inline VerificationReport verify_tables(const Catalog& catalog, const Caps& caps = {},
                                        const std::vector<int>& tables = {1, 2}) {
    struct Item {
        std::vector<const CatalogTemplate*> row;
        Sample sample;
    };
    std::vector<Item> items;
    for (int table : tables)
        for (int row : catalog.rows(table)) {
            auto templates = catalog.row(table, row);
            for (auto& s : row_samples(templates)) items.push_back({templates, std::move(s)});
        }

    VerificationReport rep;
    rep.instances.resize(items.size());
    detail::parallel_for(items.size(), [&](std::size_t i) {
        try {
            rep.instances[i] = detail::verify_instance(items[i].row, items[i].sample, caps);
        } catch (const Error& e) {
            InstanceReport r;
            r.table = items[i].row.front()->table;
            r.row = items[i].row.front()->row;
            r.sample = items[i].sample.label;
            r.failures.push_back("T" + std::to_string(r.table) + " row " + std::to_string(r.row) + " [" + r.sample +
                                 "]: " + e.what());
            rep.instances[i] = std::move(r);
        }
        rep.instances[i].context = items[i].sample.context;
    });
    for (const auto& it : items) rep.templates_checked += it.row.size();
    for (const auto& inst : rep.instances)
        for (const auto& f : inst.failures) rep.failures.push_back(f);

    for (int table : tables) {
        std::vector<std::size_t> idx;
        GroupContext ctx = GroupContext::make(0, 1);
        for (std::size_t i = 0; i < rep.instances.size(); ++i)
            if (rep.instances[i].table == table && !rep.instances[i].graph_nodes.empty()) {
                idx.push_back(i);
                ctx = common_context(ctx, rep.instances[i].context);
            }
        std::vector<std::set<std::vector<std::int64_t>>> keys;
        for (auto i : idx) keys.push_back(detail::node_keys_in(rep.instances[i], ctx));

        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                const auto& ia = rep.instances[idx[a]];
                const auto& ib = rep.instances[idx[b]];
                if (!detail::intersects(keys[a], keys[b])) continue;
                if (ia.row != ib.row)
                    rep.failures.push_back("T" + std::to_string(table) + ": row " + std::to_string(ia.row) + " [" +
                                           ia.sample + "] is Weyl equivalent to row " + std::to_string(ib.row) +
                                           " [" + ib.sample + "]");
                else if (keys[a] != keys[b])
                    rep.failures.push_back("T" + std::to_string(table) + " row " + std::to_string(ia.row) +
                                           ": samples [" + ia.sample + "] and [" + ib.sample +
                                           "] share only part of their diagram graphs");
            }

        // Representative matrix: first sample of each row.
        const auto rows = catalog.rows(table);
        std::vector<std::size_t> rep_of(rows.size(), SIZE_MAX);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const auto pos = std::find(rows.begin(), rows.end(), rep.instances[idx[k]].row) - rows.begin();
            if (rep_of[pos] == SIZE_MAX) rep_of[pos] = k;
        }
        auto& m = rep.cross_row[table];
        m.assign(rows.size(), std::vector<bool>(rows.size(), false));
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < rows.size(); ++b)
                if (rep_of[a] != SIZE_MAX && rep_of[b] != SIZE_MAX)
                    m[a][b] = detail::intersects(keys[rep_of[a]], keys[rep_of[b]]);
    }
    return rep;
}

// matching against the tables -------------------------------------------------------------------

struct TemplateMatch {
    const CatalogTemplate* entry = nullptr;
    Assignment values;
};

/**
 * A table template twist equivalent to d, with parameter values drawn from
 * the labels of d, their inverses and negatives, and the torsion elements of
 * the context. Works in the context of d.
 */
inline std::optional<TemplateMatch> match_template(const Catalog& catalog, int table, const DynkinDiagram& d) {
    const auto ctx = d.context();
    const auto key = canonical_form(d).key;
    std::vector<GroupElement> candidates;
    for (int i = 0; i < d.size(); ++i) {
        candidates.push_back(d.vertex(i));
        for (int j = i + 1; j < d.size(); ++j) candidates.push_back(d.edge(i, j));
    }
    const std::size_t base = candidates.size();
    for (std::size_t k = 0; k < base; ++k) candidates.push_back(inv(candidates[k]));
    if (ctx.torsion_order % 2 == 0) {
        const std::size_t signed_base = candidates.size();
        for (std::size_t k = 0; k < signed_base; ++k) candidates.push_back(GroupElement::minus_one(ctx) * candidates[k]);
    }
    // A parameter such as a primitive 12th root may occur only through its powers.
    if (ctx.torsion_order <= 64)
        for (std::int64_t k = 0; k < ctx.torsion_order; ++k) candidates.push_back(GroupElement::root_of_unity(ctx, k));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    for (const auto& t : catalog.templates) {
        if (t.table != table || t.rank() != d.size()) continue;
        const std::size_t np = t.params.size();
        std::vector<std::size_t> pick(np, 0);
        while (true) {
            Assignment a;
            for (std::size_t k = 0; k < np; ++k) a.emplace(t.params[k], candidates[pick[k]]);
            try {
                if (!violated_constraint(t, a, ctx) && canonical_form(template_diagram(t, a, ctx)).key == key)
                    return TemplateMatch{&t, a};
            } catch (const InputError&) {
                // -1 not representable in an odd context
            }
            std::size_t k = 0;
            while (k < np && ++pick[k] == candidates.size()) pick[k++] = 0;
            if (k == np) break;
        }
    }
    return std::nullopt;
}

// rank-3 classification by search -----------------------------------------------------------------

struct ClassificationReport {
    std::int64_t torsion = 0;
    GroupContext context;
    std::size_t candidates = 0;                ///< connected diagrams up to relabeling
    std::vector<DynkinDiagram> arithmetic;     ///< canonical, sorted by key
    std::vector<DynkinDiagram> exceeded;       ///< a cap was hit before the search finished
    std::vector<DynkinDiagram> expected;       ///< from the catalog, canonical, sorted
    std::vector<std::string> unexpressible;    ///< rows with no instance over mu_N
    std::vector<DynkinDiagram> missing;        ///< expected but not found
    std::vector<DynkinDiagram> unexpected;     ///< found but not expected

    bool matches() const { return missing.empty() && unexpected.empty(); }
};

namespace detail {

inline std::vector<DynkinDiagram> sorted_unique(std::vector<DynkinDiagram> v) {
    std::map<std::vector<std::int64_t>, DynkinDiagram> m;
    for (auto& d : v) {
        auto cf = canonical_form(d);
        m.emplace(cf.key, std::move(cf.diagram));
    }
    std::vector<DynkinDiagram> out;
    for (auto& [k, d] : m) out.push_back(std::move(d));
    return out;
}

inline bool labels_in(const DynkinDiagram& d, std::int64_t n) {
    auto ok = [&](const GroupElement& x) {
        auto o = order(x);
        return o && n % *o == 0;
    };
    for (int i = 0; i < d.size(); ++i) {
        if (!ok(d.vertex(i))) return false;
        for (int j = 0; j < d.size(); ++j)
            if (!ok(d.edge(i, j))) return false;
    }
    return true;
}

} // namespace detail

/// Canonical diagrams of all catalog rank-3 instances whose labels lie in mu_N.
inline std::vector<DynkinDiagram> catalog_classes(const Catalog& catalog, std::int64_t n,
                                                  std::vector<std::string>* unexpressible = nullptr) {
    const auto ctx = GroupContext::make(0, checked::lcm(2, n));
    const std::int64_t step = ctx.torsion_order / n;
    std::vector<DynkinDiagram> out;
    for (int row : catalog.rows(2)) {
        const auto templates = catalog.row(2, row);
        const auto& params = templates.front()->params;
        bool any = false;
        std::vector<std::int64_t> pick(params.size(), 0);
        while (true) {
            Assignment a;
            for (std::size_t k = 0; k < params.size(); ++k)
                a.emplace(params[k], GroupElement::root_of_unity(ctx, pick[k] * step));
            if (detail::admissible(templates, a, ctx)) {
                for (const auto* t : templates) {
                    auto d = template_diagram(*t, a, ctx);
                    if (detail::labels_in(d, n)) {
                        out.push_back(d);
                        any = true;
                    }
                }
            }
            std::size_t k = 0;
            while (k < params.size() && ++pick[k] == n) pick[k++] = 0;
            if (k == params.size()) break;
        }
        if (!any && unexpressible) unexpressible->push_back("row " + std::to_string(row));
    }
    return detail::sorted_unique(std::move(out));
}

/**
 * Exhaustive search over connected rank-3 diagrams with labels in mu_N.
 * Candidates are filtered by the diagram graph and W^B before the groupoid
 * itself is explored, then compared with the catalog.
 */
inline ClassificationReport classify_rank3(const Catalog& catalog, std::int64_t n, const Caps& caps = {},
                                           unsigned workers = 0) {
    if (n < 1 || n > 64) throw InputError("torsion order must lie in [1, 64]");
    ClassificationReport rep;
    rep.torsion = n;
    rep.context = GroupContext::make(0, checked::lcm(2, n));
    const auto& ctx = rep.context;
    const std::int64_t step = ctx.torsion_order / n;
    auto root = [&](std::int64_t k) { return GroupElement::root_of_unity(ctx, k * step); };

    // Connected graphs on three vertices are the path 0-1-2 and the triangle.
    std::map<std::vector<std::int64_t>, DynkinDiagram> unique;
    const std::vector<std::vector<std::pair<int, int>>> shapes = {{{0, 1}, {1, 2}}, {{0, 1}, {1, 2}, {0, 2}}};
    for (const auto& edges : shapes) {
        const std::size_t ne = edges.size();
        std::vector<std::int64_t> el(ne, 1);
        while (true) {
            std::vector<std::int64_t> vl(3, 0);
            while (true) {
                bool pruned = false;
                for (int v = 0; v < 3 && !pruned; ++v)
                    if (vl[v] == 0) pruned = true; // every vertex has an edge, label 1 leaves m undefined
                if (!pruned) {
                    auto d = DynkinDiagram::edgeless({root(vl[0]), root(vl[1]), root(vl[2])});
                    for (std::size_t k = 0; k < ne; ++k) d.set_edge(edges[k].first, edges[k].second, root(el[k]));
                    auto cf = canonical_form(d);
                    unique.emplace(cf.key, std::move(cf.diagram));
                }
                int k = 0;
                while (k < 3 && ++vl[k] == n) vl[k++] = 0;
                if (k == 3) break;
            }
            std::size_t k = 0;
            while (k < ne && ++el[k] == n) el[k++] = 1;
            if (k == ne) break;
        }
    }
    std::vector<DynkinDiagram> cands;
    for (auto& [k, d] : unique) cands.push_back(std::move(d));
    rep.candidates = cands.size();

    enum class Outcome { rejected, arithmetic, exceeded };
    std::vector<Outcome> outcome(cands.size(), Outcome::rejected);
    detail::parallel_for(
        cands.size(),
        [&](std::size_t i) {
            const auto chi = bicharacter_from_diagram(cands[i]);
            const auto graph = build_diagram_graph(cands[i], caps);
            if (graph.verdict == Verdict::not_full) return;
            if (graph.verdict == Verdict::exceeded) {
                outcome[i] = Outcome::exceeded;
                return;
            }
            const auto wb = generate_WB(chi, caps);
            if (wb.verdict == Verdict::not_full) return;
            if (wb.verdict == Verdict::exceeded) {
                outcome[i] = Outcome::exceeded;
                return;
            }
            const auto res = explore(chi, caps);
            if (res.verdict == Verdict::finite)
                outcome[i] = Outcome::arithmetic;
            else if (res.verdict == Verdict::exceeded)
                outcome[i] = Outcome::exceeded;
        },
        workers);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (outcome[i] == Outcome::arithmetic) rep.arithmetic.push_back(cands[i]);
        if (outcome[i] == Outcome::exceeded) rep.exceeded.push_back(cands[i]);
    }

    rep.expected = catalog_classes(catalog, n, &rep.unexpressible);
    auto key_set = [](const std::vector<DynkinDiagram>& v) {
        std::set<std::vector<std::int64_t>> s;
        for (const auto& d : v) s.insert(canonical_form(d).key);
        return s;
    };
    const auto found = key_set(rep.arithmetic), want = key_set(rep.expected);
    for (const auto& d : rep.expected)
        if (!found.contains(canonical_form(d).key)) rep.missing.push_back(d);
    for (const auto& d : rep.arithmetic)
        if (!want.contains(canonical_form(d).key)) rep.unexpected.push_back(d);
    return rep;
}

} // namespace arsys
