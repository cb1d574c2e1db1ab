#pragma once

#include "tdlc/finite/finite_group.hpp"
#include "tdlc/finite/finite_universe.hpp"
#include "tdlc/laurent/banded_endo.hpp"
#include "tdlc/laurent/epc.hpp"
#include "tdlc/laurent/laurent_universe.hpp"

#include "json.hpp"

#include <map>
#include <string>
#include <variant>

namespace tdlc::io {

using json = nlohmann::json;

/* JSON wire formats.  Every parser throws InputError with a message naming
   the offending field; unknown extra fields are ignored so richer documents
   (fixtures, reports) can embed the same descriptors.

   row            [[coord, coeff], ...]                  coords absolute ints,
                                                         coeffs ints mod p
   laurent
     subgroup     {"p", "base", "constraints": [row...],
                   "periodic": {"anchor", "period", "templates": [row...]}}
                  "periodic" absent or null means an open subgroup; a list of
                  such objects is accepted for multi-family input.  "anchor"
                  is documentation: templates carry absolute positions.
     endo         {"p", "exceptional": {"n": row, ...},
                   "up_tail": {"period", "shift" | "shifts", "templates"},
                   "down_tail": "zero" | {"period", "shift", "templates"},
                   "m_minus"?, "m_plus"?}
                  band bounds default to the exceptional key range.
   finite
     group        {"kind": "cyclic-product", "factors": [...]} |
                  {"kind": "cayley", "table": [[...]], "name"?}
     endo         {"map": [...]} | {"gens": [...], "images": [...]}
     subgroup     [elt, ...] | {"gens": [elt, ...]}
   case file      {"schema": 1, "universe": "finite" | "laurent", ...}
                  finite: group, endo, subgroups{name: ...}
                  laurent: endo, subgroups{name: ...}, ambient? */

laurent::Row row_from_json(int p, const json& j);
json row_to_json(const laurent::Row& r);

laurent::EPC subgroup_from_json(const json& j);
json subgroup_to_json(const laurent::EPC& s);

laurent::BandedEndo endo_from_json(const json& j);
json endo_to_json(const laurent::BandedEndo& e);

finite::FiniteGroup group_from_json(const json& j);
json group_to_json(const finite::FiniteGroup& g);

finite::FiniteEndo finite_endo_from_json(const finite::FiniteGroup& g, const json& j);
json finite_endo_to_json(const finite::FiniteEndo& e);

finite::Subgroup finite_subgroup_from_json(const finite::FiniteGroup& g, const json& j);
json finite_subgroup_to_json(const finite::Subgroup& s);

struct FiniteCase {
    finite::FiniteUniverse universe;
    finite::FiniteEndo endo;
    std::map<std::string, finite::Subgroup> subgroups;
};

struct LaurentCase {
    laurent::LaurentUniverse universe;
    laurent::BandedEndo endo;
    std::map<std::string, laurent::EPC> subgroups;
};

using LoadedCase = std::variant<FiniteCase, LaurentCase>;

/* Single-file input: validates the schema version, the universe tag, and
   prime agreement between all Laurent parts. */
LoadedCase case_from_json(const json& j);

json parse_json_text(const std::string& text);  // InputError on syntax errors

}  // namespace tdlc::io
