#pragma once

#include <string>
#include <vector>

#include "arsys/arsys.hpp"

namespace fixtures {

inline const arsys::Catalog& catalog() {
    static const arsys::Catalog c = arsys::load_catalog();
    return c;
}

struct Instance {
    std::string name;
    const arsys::CatalogTemplate* entry;
    arsys::Bicharacter chi;
};

/// Every template of the given table at every sampled parameter value.
inline const std::vector<Instance>& instances(int table) {
    static std::map<int, std::vector<Instance>> cache;
    auto& out = cache[table];
    if (!out.empty()) return out;
    for (int row : catalog().rows(table)) {
        const auto templates = catalog().row(table, row);
        for (const auto& s : arsys::row_samples(templates))
            for (const auto* t : templates)
                out.push_back({t->id() + " [" + s.label + "]", t, arsys::instantiate(*t, s.values, s.context)});
    }
    return out;
}

inline arsys::DynkinDiagram chain(std::vector<arsys::GroupElement> v, std::vector<arsys::GroupElement> e) {
    auto d = arsys::DynkinDiagram::edgeless(std::move(v));
    for (std::size_t k = 0; k < e.size(); ++k) d.set_edge(static_cast<int>(k), static_cast<int>(k) + 1, e[k]);
    return d;
}

/// Table 2 row 1 with a free parameter q: chain q - q - q, edges q^-1.
inline arsys::Bicharacter a3_generic() {
    const auto ctx = arsys::GroupContext::make(1, 1);
    const auto q = arsys::GroupElement::free_generator(ctx, 0);
    return arsys::bicharacter_from_diagram(chain({q, q, q}, {inv(q), inv(q)}));
}

} // namespace fixtures
