#pragma once

// Command-line front end. run() parses arguments, executes one subcommand
// and returns the exit status:
//   0  definitive success (yes, finite, no failures)
//   1  definitive negative (no, not full, failures found)
//   2  indeterminate (a cap was hit)
//   3  input error

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arsys/io.hpp"

namespace arsys::cli {

enum Status : int { ok = 0, negative = 1, indeterminate = 2, input_error = 3 };

struct Options {
    std::string input;
    std::string format = "text";
    std::string catalog;
    std::string roots;
    std::int64_t torsion = 0;
    std::vector<int> tables;
    Caps caps;
};

namespace detail {

inline std::int64_t env_or(const char* name, std::int64_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    try {
        std::size_t used = 0;
        const auto x = std::stoll(v, &used);
        if (used != std::string(v).size()) throw InputError("");
        return x;
    } catch (...) {
        throw InputError(std::string("environment variable ") + name + " is not an integer");
    }
}

inline std::string read_input(const std::string& input) {
    const auto first = input.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && input[first] == '{') return input;
    if (input == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(input);
    if (!in) throw InputError("cannot open " + input);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Bicharacter load_bicharacter(const std::string& input) {
    const std::string text = read_input(input);
    io::json j;
    try {
        j = io::json::parse(text);
    } catch (const io::json::parse_error& e) {
        throw InputError(std::string("malformed JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
    }
    try {
        return io::bicharacter_from_json(j);
    } catch (const io::json::exception& e) {
        throw InputError(std::string("input does not match the schema: ") + e.what());
    }
}

/// Parses "1,1,0;0,1,1" into vectors.
inline std::vector<IntVector> parse_roots(const std::string& s, int n) {
    std::vector<IntVector> out;
    std::stringstream outer(s);
    std::string part;
    while (std::getline(outer, part, ';')) {
        IntVector v;
        std::stringstream inner(part);
        std::string x;
        while (std::getline(inner, x, ',')) {
            try {
                std::size_t used = 0;
                v.push_back(std::stoll(x, &used));
                if (x.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(x);
            } catch (const std::exception&) {
                throw InputError("bad root coordinate \"" + x + "\"");
            }
        }
        if (static_cast<int>(v.size()) != n) throw InputError("root " + part + " needs " + std::to_string(n) + " coordinates");
        out.push_back(std::move(v));
    }
    if (out.empty()) throw InputError("--roots needs at least one root");
    return out;
}

inline int status_of(Verdict v) {
    switch (v) {
    case Verdict::finite: return ok;
    case Verdict::not_full: return negative;
    case Verdict::exceeded: return indeterminate;
    }
    return input_error;
}

inline int status_of(ArithmeticDecision::Kind k) {
    switch (k) {
    case ArithmeticDecision::Kind::yes: return ok;
    case ArithmeticDecision::Kind::no: return negative;
    case ArithmeticDecision::Kind::indeterminate: return indeterminate;
    }
    return input_error;
}

inline Catalog catalog_for(const Options& o) {
    return o.catalog.empty() ? load_catalog() : load_catalog(o.catalog);
}

inline std::string verdict_text(const ExplorationResult& r) {
    const auto d = decide(r);
    return d.kind == ArithmeticDecision::Kind::yes ? "yes" : to_string(d.kind) + " (" + d.reason + ")";
}

// subcommands ---------------------------------------------------------------------------

inline int cmd_check(const Options& o, std::ostream& out) {
    const auto chi = load_bicharacter(o.input);
    const auto res = explore(chi, o.caps);
    const auto dec = decide(res);
    const auto cartan = cartan_verdict(chi);
    std::optional<TemplateMatch> match;
    if (dec.yes() && (chi.rank() == 2 || chi.rank() == 3) && is_connected(diagram(chi))) {
        try {
            match = match_template(catalog_for(o), chi.rank() == 2 ? 1 : 2, diagram(chi));
        } catch (const InputError&) {
            // no catalog available: matching is optional
        }
    }
    if (o.format == "json") {
        io::json j = {{"verdict", to_string(dec.kind)}, {"rank", chi.rank()}, {"objects", res.objects.size()},
                      {"caps", io::to_json(o.caps)}, {"cartan_type", cartan.is_cartan}};
        if (cartan.is_cartan) j["finite_cartan_type"] = cartan.is_finite_type;
        if (dec.yes()) {
            j["roots"] = res.roots.size();
            j["positive_roots"] = io::to_json(positive_roots(res));
        } else {
            j["reason"] = dec.reason;
        }
        if (res.exceeded_cap) j["exceeded_cap"] = to_string(*res.exceeded_cap);
        if (match) j["table_entry"] = match->entry->id();
        out << j.dump(2) << "\n";
    } else {
        out << "verdict: " << verdict_text(res) << "\n";
        out << "objects visited: " << res.objects.size() << "\n";
        if (dec.yes()) out << "roots: " << res.roots.size() << " (" << res.roots.size() / 2 << " positive)\n";
        if (cartan.is_cartan) out << "Cartan type: " << (cartan.is_finite_type ? "finite" : "not finite") << "\n";
        if (match) out << "table entry: " << match->entry->id() << " (" << describe(match->values) << ")\n";
    }
    return status_of(dec.kind);
}

inline int cmd_roots(const Options& o, std::ostream& out) {
    const auto chi = load_bicharacter(o.input);
    const auto res = explore(chi, o.caps);
    const auto dec = decide(res);
    if (!dec.yes()) {
        if (o.format == "json")
            out << io::json{{"verdict", to_string(dec.kind)}, {"reason", dec.reason}}.dump(2) << "\n";
        else
            out << "verdict: " << verdict_text(res) << "\n";
        return status_of(dec.kind);
    }
    const auto pos = positive_roots(res);
    if (o.format == "json") {
        out << io::json{{"verdict", "yes"}, {"positive_roots", io::to_json(pos)}, {"count", pos.size()}}.dump(2) << "\n";
    } else {
        for (const auto& r : pos) out << to_string(r) << "\n";
    }
    return ok;
}

inline int cmd_diagram(const Options& o, std::ostream& out) {
    const auto d = diagram(load_bicharacter(o.input));
    if (o.format == "json")
        out << io::to_json(d).dump(2) << "\n";
    else if (o.format == "dot")
        out << io::to_dot(d);
    else
        out << io::diagram_text(d) << "\n";
    return ok;
}

inline int cmd_graph(const Options& o, std::ostream& out) {
    const auto g = build_diagram_graph(load_bicharacter(o.input), o.caps);
    if (o.format == "json") {
        out << io::to_json(g).dump(2) << "\n";
    } else if (o.format == "dot") {
        out << io::to_dot(g);
    } else {
        out << "verdict: " << to_string(g.verdict) << "\nnodes: " << g.nodes.size() << "\n";
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
            out << "  " << k << ": " << io::diagram_text(g.nodes[k]) << "  ->";
            for (int a : g.arrows[k]) out << " " << (a < 0 ? std::string("-") : std::to_string(a));
            out << "\n";
        }
    }
    return status_of(g.verdict);
}

inline int cmd_wb(const Options& o, std::ostream& out) {
    const auto chi = load_bicharacter(o.input);
    const auto wb = generate_WB(chi, o.caps);
    if (!wb.finite()) {
        std::string why = to_string(wb.verdict);
        if (wb.exceeded_cap) why += "(" + to_string(*wb.exceeded_cap) + ")";
        if (o.format == "json")
            out << io::json{{"verdict", to_string(wb.verdict)}, {"detail", why}}.dump(2) << "\n";
        else
            out << "verdict: " << why << "\n";
        return status_of(wb.verdict);
    }
    const auto d = describe_group(wb.group);
    if (o.format == "json") {
        io::json gens = io::json::array();
        for (const auto& g : wb.group.generators) gens.push_back(io::to_json(g.matrix));
        io::json j = io::to_json(d);
        j["verdict"] = to_string(wb.verdict);
        j["diagram_graph_nodes"] = wb.graph_nodes;
        j["generators"] = gens;
        out << j.dump(2) << "\n";
    } else {
        out << "W^B: " << d.name << ", order " << d.order << "\n";
        if (d.names.size() > 1) {
            out << "isomorphic symbols:";
            for (const auto& n : d.names) out << " " << n;
            out << "\n";
        }
        out << "element orders:";
        for (const auto& [k, v] : d.element_orders) out << " " << k << "^" << v;
        out << "\ndiagram graph nodes: " << wb.graph_nodes << "\n";
    }
    return ok;
}

inline int cmd_restrict(const Options& o, std::ostream& out) {
    const auto chi = load_bicharacter(o.input);
    const auto parent = explore(chi, o.caps);
    if (!parent.finite()) {
        out << "verdict: " << verdict_text(parent) << "\n";
        return status_of(parent.verdict);
    }
    const auto s = restrict(chi, parent, parse_roots(o.roots, chi.rank()), o.caps);
    if (o.format == "json") {
        out << io::to_json(s).dump(2) << "\n";
    } else {
        out << "E_H:";
        for (const auto& v : s.E_H) out << " " << to_string(v);
        out << "\nroots in H: " << s.roots_in_H.size() << "\nrestricted diagram: " << io::diagram_text(s.restricted_diagram)
            << "\n";
    }
    return ok;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
    const auto cat = catalog_for(o);
    const auto rep = verify_tables(cat, o.caps, o.tables.empty() ? std::vector<int>{1, 2} : o.tables);
    if (o.format == "json") {
        out << io::to_json(rep).dump(2) << "\n";
    } else {
        out << rep.templates_checked << " template instances over " << rep.instances.size()
            << " parameter samples + equivalence matrix " << (rep.ok() ? "verified" : "FAILED") << "\n";
        for (const auto& f : rep.failures) out << "  " << f << "\n";
    }
    return rep.ok() ? ok : negative;
}

inline int cmd_classify(const Options& o, std::ostream& out) {
    const auto rep = classify_rank3(catalog_for(o), o.torsion, o.caps);
    if (o.format == "json") {
        out << io::to_json(rep).dump(2) << "\n";
    } else {
        out << "N = " << rep.torsion << ": " << rep.candidates << " connected diagrams, " << rep.arithmetic.size()
            << " arithmetic, " << rep.exceeded.size() << " past the caps\n";
        for (const auto& d : rep.arithmetic) out << "  " << io::diagram_text(d) << "\n";
        out << "catalog instances over mu_N: " << rep.expected.size() << " ("
            << (rep.matches() ? "match" : "MISMATCH") << ")\n";
        for (const auto& d : rep.missing) out << "  missing: " << io::diagram_text(d) << "\n";
        for (const auto& d : rep.unexpected) out << "  unexpected: " << io::diagram_text(d) << "\n";
        if (!rep.unexpressible.empty()) {
            out << "not expressible at this N:";
            for (const auto& r : rep.unexpressible) out << " " << r;
            out << "\n";
        }
    }
    return rep.matches() ? ok : negative;
}

} // namespace detail

/// Runs one command; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Exact engine for arithmetic root systems and Weyl groupoids", "arsys"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::int64_t caps_objects = 0, caps_norm = 0, caps_depth = 0;
    std::vector<CLI::Option*> cap_options[3];
    auto add_common = [&](CLI::App* sub, bool needs_input) {
        if (needs_input) sub->add_option("input", o.input, "JSON file, '-' for stdin, or inline JSON")->required();
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "dot", "text"}));
        cap_options[0].push_back(sub->add_option("--caps-objects", caps_objects, "maximum number of objects"));
        cap_options[1].push_back(sub->add_option("--caps-norm", caps_norm, "maximum root coordinate"));
        cap_options[2].push_back(sub->add_option("--caps-depth", caps_depth, "maximum reflection depth"));
        sub->add_option("--catalog", o.catalog, "catalog file (JSON lines)");
    };
    auto* check = app.add_subcommand("check", "decide whether the input is an arithmetic root system");
    add_common(check, true);
    auto* roots = app.add_subcommand("roots", "list the positive roots");
    add_common(roots, true);
    auto* dia = app.add_subcommand("diagram", "print the generalized Dynkin diagram");
    add_common(dia, true);
    auto* graph = app.add_subcommand("graph", "build the diagram graph");
    add_common(graph, true);
    graph->add_flag_callback("--dot", [&] { o.format = "dot"; }, "same as --format dot");
    auto* wb = app.add_subcommand("wb-group", "compute the group W^B");
    add_common(wb, true);
    auto* res = app.add_subcommand("restrict", "restrict to the span of some roots");
    add_common(res, true);
    res->add_option("--roots", o.roots, "roots as '1,1,0;0,1,1'")->required();
    auto* ver = app.add_subcommand("verify", "verify both classification tables");
    add_common(ver, false);
    ver->add_option("--table", o.tables, "restrict to table 1 or 2")->check(CLI::IsMember({1, 2}));
    auto* cls = app.add_subcommand("classify", "search all connected rank-3 diagrams over mu_N");
    add_common(cls, false);
    cls->add_option("--torsion", o.torsion, "N")->required()->check(CLI::Range(1, 64));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "arsys: " << e.what() << "\n";
        return input_error;
    }

    try {
        auto given = [](const std::vector<CLI::Option*>& opts) {
            return std::any_of(opts.begin(), opts.end(), [](const CLI::Option* p) { return p->count() > 0; });
        };
        o.caps.max_objects = given(cap_options[0]) ? caps_objects : detail::env_or("ARSYS_CAPS_OBJECTS", o.caps.max_objects);
        o.caps.max_root_norm = given(cap_options[1]) ? caps_norm : detail::env_or("ARSYS_CAPS_NORM", o.caps.max_root_norm);
        o.caps.max_depth = given(cap_options[2]) ? caps_depth : detail::env_or("ARSYS_CAPS_DEPTH", o.caps.max_depth);
        o.caps.validate();

        if (check->parsed()) return detail::cmd_check(o, out);
        if (roots->parsed()) return detail::cmd_roots(o, out);
        if (dia->parsed()) return detail::cmd_diagram(o, out);
        if (graph->parsed()) return detail::cmd_graph(o, out);
        if (wb->parsed()) return detail::cmd_wb(o, out);
        if (res->parsed()) return detail::cmd_restrict(o, out);
        if (ver->parsed()) return detail::cmd_verify(o, out);
        if (cls->parsed()) return detail::cmd_classify(o, out);
    } catch (const InputError& e) {
        err << "arsys: input error: " << e.what() << "\n";
        return input_error;
    } catch (const ContextMismatch& e) {
        err << "arsys: input error: " << e.what() << "\n";
        return input_error;
    } catch (const OverflowError& e) {
        err << "arsys: arithmetic overflow: " << e.what() << "\n";
        return indeterminate;
    } catch (const Error& e) {
        err << "arsys: " << e.what() << "\n";
        return negative;
    }
    return input_error;
}

} // namespace arsys::cli
