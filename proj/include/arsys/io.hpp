#pragma once

// JSON and DOT serialization. Group elements are written as
// {"free": [...], "tor": t}; on input the text form of to_string()
// ("g1^-1*z", "-1", "-z^2") is accepted as well.

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "arsys/catalog.hpp"
#include "arsys/subsystems.hpp"

namespace arsys::io {

using nlohmann::json;

inline json to_json(const GroupContext& c) { return {{"free_rank", c.free_rank}, {"torsion_order", c.torsion_order}}; }

inline GroupContext context_from_json(const json& j) {
    if (!j.is_object()) throw InputError("context must be an object");
    return GroupContext::make(j.value("free_rank", 0), j.value("torsion_order", std::int64_t{1}));
}

inline json to_json(const GroupElement& g) {
    std::vector<std::int64_t> f(g.free_part().begin(), g.free_part().end());
    return {{"free", f}, {"tor", g.torsion_part()}, {"text", to_string(g)}};
}

/// Parses the text form: factors g<k>^e and z^e joined by '*', optional leading '-'.
inline GroupElement element_from_text(const std::string& s, const GroupContext& ctx) {
    Assignment names;
    for (int k = 0; k < ctx.free_rank; ++k) names.emplace("g" + std::to_string(k + 1), GroupElement::free_generator(ctx, k));
    names.emplace("z", GroupElement::root_of_unity(ctx, 1));
    return evaluate(s, names, ctx);
}

inline GroupElement element_from_json(const json& j, const GroupContext& ctx) {
    if (j.is_string()) return element_from_text(j.get<std::string>(), ctx);
    if (j.is_number_integer()) return GroupElement::root_of_unity(ctx, j.get<std::int64_t>());
    if (!j.is_object()) throw InputError("group element must be an object, a string or an integer");
    std::vector<std::int64_t> f = j.value("free", std::vector<std::int64_t>(ctx.free_rank, 0));
    return GroupElement::from_parts(ctx, f, j.value("tor", std::int64_t{0}));
}

inline json to_json(const Bicharacter& chi) {
    json q = json::array();
    for (int i = 0; i < chi.rank(); ++i) {
        json row = json::array();
        for (int j = 0; j < chi.rank(); ++j) row.push_back(to_json(chi.q(i, j)));
        q.push_back(row);
    }
    return {{"context", to_json(chi.context())}, {"n", chi.rank()}, {"q", q}};
}

inline json to_json(const DynkinDiagram& d) {
    json v = json::array(), e = json::array();
    for (int i = 0; i < d.size(); ++i) {
        v.push_back(to_json(d.vertex(i)));
        for (int j = i + 1; j < d.size(); ++j)
            if (d.has_edge(i, j)) e.push_back({i, j, to_json(d.edge(i, j))});
    }
    return {{"context", to_json(d.context())}, {"vertices", v}, {"edges", e}};
}

inline DynkinDiagram diagram_from_json(const json& j) {
    const auto ctx = context_from_json(j.at("context"));
    std::vector<GroupElement> v;
    for (const auto& x : j.at("vertices")) v.push_back(element_from_json(x, ctx));
    if (v.empty()) throw InputError("diagram needs at least one vertex");
    auto d = DynkinDiagram::edgeless(std::move(v));
    for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 3) throw InputError("edge must be [i, j, label]");
        const int a = e.at(0).get<int>(), b = e.at(1).get<int>();
        if (a < 0 || b < 0 || a >= d.size() || b >= d.size() || a == b) throw InputError("edge endpoints out of range");
        d.set_edge(a, b, element_from_json(e.at(2), ctx));
    }
    return d;
}

inline Bicharacter bicharacter_from_json(const json& j) {
    if (!j.is_object()) throw InputError("input must be a JSON object");
    if (j.contains("vertices")) return bicharacter_from_diagram(diagram_from_json(j));
    if (!j.contains("q")) throw InputError("input needs either \"q\" (bicharacter) or \"vertices\" (diagram)");
    const auto ctx = context_from_json(j.at("context"));
    const auto& q = j.at("q");
    const int n = j.contains("n") ? j.at("n").get<int>() : static_cast<int>(q.size());
    if (n < 1 || static_cast<int>(q.size()) != n) throw InputError("\"q\" must have n rows");
    std::vector<GroupElement> c;
    for (const auto& row : q) {
        if (!row.is_array() || static_cast<int>(row.size()) != n) throw InputError("every row of \"q\" must have n entries");
        for (const auto& x : row) c.push_back(element_from_json(x, ctx));
    }
    return Bicharacter(ctx, n, std::move(c));
}

inline json to_json(const IntVector& v) { return json(std::vector<std::int64_t>(v.begin(), v.end())); }

inline json to_json(const std::vector<IntVector>& vs) {
    json a = json::array();
    for (const auto& v : vs) a.push_back(to_json(v));
    return a;
}

inline json to_json(const IntMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.size(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.size(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

inline json to_json(const Caps& c) {
    return {{"max_objects", c.max_objects}, {"max_root_norm", c.max_root_norm}, {"max_depth", c.max_depth}};
}

inline json to_json(const GroupDescriptor& d) {
    json orders = json::object();
    for (const auto& [k, v] : d.element_orders) orders[std::to_string(k)] = v;
    return {{"order", d.order},
            {"name", d.name},
            {"names", d.names},
            {"element_orders", orders},
            {"abelian_invariants", d.abelian_invariants}};
}

inline std::string diagram_text(const DynkinDiagram& d) {
    std::string s = "[";
    for (int i = 0; i < d.size(); ++i) s += (i ? ", " : "") + to_string(d.vertex(i));
    s += "]";
    for (int i = 0; i < d.size(); ++i)
        for (int j = i + 1; j < d.size(); ++j)
            if (d.has_edge(i, j)) s += " " + std::to_string(i + 1) + "-" + std::to_string(j + 1) + ":" + to_string(d.edge(i, j));
    return s;
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '"' || c == '\\') o += '\\';
        o += c;
    }
    return o;
}
} // namespace detail

inline std::string to_dot(const DynkinDiagram& d, const std::string& name = "diagram") {
    std::ostringstream o;
    o << "graph " << name << " {\n";
    for (int i = 0; i < d.size(); ++i)
        o << "  v" << i + 1 << " [label=\"" << detail::dot_escape(to_string(d.vertex(i))) << "\"];\n";
    for (int i = 0; i < d.size(); ++i)
        for (int j = i + 1; j < d.size(); ++j)
            if (d.has_edge(i, j))
                o << "  v" << i + 1 << " -- v" << j + 1 << " [label=\"" << detail::dot_escape(to_string(d.edge(i, j)))
                  << "\"];\n";
    o << "}\n";
    return o.str();
}

inline std::string to_dot(const DiagramGraph& g) {
    std::ostringstream o;
    o << "digraph diagram_graph {\n";
    for (std::size_t k = 0; k < g.nodes.size(); ++k)
        o << "  n" << k << " [label=\"" << detail::dot_escape(diagram_text(g.nodes[k])) << "\"];\n";
    for (std::size_t k = 0; k < g.arrows.size(); ++k)
        for (std::size_t i = 0; i < g.arrows[k].size(); ++i)
            if (g.arrows[k][i] >= 0)
                o << "  n" << k << " -> n" << g.arrows[k][i] << " [label=\"" << i + 1 << "\"];\n";
    o << "}\n";
    return o.str();
}

inline json to_json(const DiagramGraph& g) {
    json nodes = json::array();
    for (std::size_t k = 0; k < g.nodes.size(); ++k)
        nodes.push_back({{"id", k}, {"diagram", to_json(g.nodes[k])}, {"text", diagram_text(g.nodes[k])},
                         {"arrows", g.arrows[k]}});
    json j = {{"verdict", to_string(g.verdict)}, {"nodes", nodes}};
    if (g.exceeded_cap) j["exceeded_cap"] = to_string(*g.exceeded_cap);
    if (g.undefined_at)
        j["undefined_at"] = {{"node", g.undefined_at->first},
                             {"source", g.undefined_at->second.first + 1},
                             {"target", g.undefined_at->second.second + 1}};
    return j;
}

inline json to_json(const Subsystem& s) {
    return {{"span", to_json(s.span_basis)},
            {"E_H", to_json(s.E_H)},
            {"roots_in_H", to_json(s.roots_in_H)},
            {"positive_roots_in_H", to_json(s.positive_in_H)},
            {"restricted_diagram", to_json(s.restricted_diagram)},
            {"restricted_diagram_text", diagram_text(s.restricted_diagram)},
            {"lattice_saturated", s.lattice_saturated},
            {"functional_fallback", s.used_functional_fallback}};
}

inline json to_json(const VerificationReport& r) {
    json inst = json::array();
    for (const auto& i : r.instances) {
        json x = {{"table", i.table}, {"row", i.row}, {"sample", i.sample}, {"ok", i.ok()},
                  {"templates", i.template_diagrams.size()}, {"graph_nodes", i.graph_nodes.size()},
                  {"roots", i.root_count}, {"unlisted_graph_nodes", i.extra_nodes}};
        if (i.wb) x["wb"] = to_json(*i.wb);
        if (!i.failures.empty()) x["failures"] = i.failures;
        inst.push_back(x);
    }
    json cross = json::object();
    for (const auto& [t, m] : r.cross_row) cross[std::to_string(t)] = m;
    return {{"ok", r.ok()}, {"templates_checked", r.templates_checked}, {"instances", inst},
            {"cross_row_equivalence", cross}, {"failures", r.failures}};
}

inline json to_json(const ClassificationReport& r) {
    auto list = [](const std::vector<DynkinDiagram>& v) {
        json a = json::array();
        for (const auto& d : v) a.push_back(diagram_text(d));
        return a;
    };
    return {{"torsion", r.torsion},
            {"context", to_json(r.context)},
            {"candidates", r.candidates},
            {"arithmetic", list(r.arithmetic)},
            {"exceeded", r.exceeded.size()},
            {"expected", r.expected.size()},
            {"not_expressible", r.unexpressible},
            {"missing", list(r.missing)},
            {"unexpected", list(r.unexpected)},
            {"matches_catalog", r.matches()}};
}

} // namespace arsys::io
