#include "tdlc/io/descriptors.hpp"

#include "tdlc/finite/catalog.hpp"

#include <algorithm>
#include <limits>

namespace tdlc::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InputError(what); }

const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) bad(std::string("missing field \"") + name + "\"");
    return *it;
}

int int_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number_integer()) bad(std::string("field \"") + name + "\" must be an integer");
    return v.get<int>();
}

int prime_of(const json& j) {
    int p = int_field(j, "p");
    if (!laurent::is_prime(p)) bad("\"p\" must be a prime");
    return p;
}

std::vector<laurent::Row> rows_from_json(int p, const json& j, const char* what) {
    if (!j.is_array()) bad(std::string(what) + " must be a list of rows");
    std::vector<laurent::Row> out;
    out.reserve(j.size());
    for (const auto& r : j) out.push_back(row_from_json(p, r));
    return out;
}

json rows_to_json(const std::vector<laurent::Row>& rows) {
    json out = json::array();
    for (const auto& r : rows) out.push_back(row_to_json(r));
    return out;
}

laurent::PeriodicRows family_from_json(int p, const json& j) {
    if (!j.is_object()) bad("\"periodic\" entries must be objects");
    laurent::PeriodicRows fam;
    fam.period = int_field(j, "period");
    if (fam.period < 1) bad("\"period\" must be positive");
    fam.templates = rows_from_json(p, field(j, "templates"), "\"templates\"");
    return fam;
}

}  // namespace

laurent::Row row_from_json(int p, const json& j) {
    if (!j.is_array()) bad("a row must be a list of [coord, coeff] pairs");
    std::vector<std::pair<int, int>> terms;
    terms.reserve(j.size());
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() ||
            !t[1].is_number_integer())
            bad("row terms must be [coord, coeff] integer pairs");
        terms.emplace_back(t[0].get<int>(), t[1].get<int>());
    }
    return laurent::Row(p, std::move(terms));
}

json row_to_json(const laurent::Row& r) {
    json out = json::array();
    for (const auto& [c, v] : r.terms()) out.push_back(json::array({c, v}));
    return out;
}

laurent::EPC subgroup_from_json(const json& j) {
    if (!j.is_object()) bad("a subgroup descriptor must be an object");
    int p = prime_of(j);
    int base = int_field(j, "base");
    std::vector<laurent::Row> constraints;
    if (auto it = j.find("constraints"); it != j.end())
        constraints = rows_from_json(p, *it, "\"constraints\"");
    std::vector<laurent::PeriodicRows> fams;
    if (auto it = j.find("periodic"); it != j.end() && !it->is_null()) {
        if (it->is_array())
            for (const auto& f : *it) fams.push_back(family_from_json(p, f));
        else
            fams.push_back(family_from_json(p, *it));
    }
    return laurent::EPC::from_constraints(p, base, std::move(constraints), std::move(fams));
}

json subgroup_to_json(const laurent::EPC& s) {
    json out;
    out["p"] = s.p();
    out["base"] = s.base();
    out["constraints"] = rows_to_json(s.exceptional());
    if (!s.open())
        out["periodic"] = {{"anchor", s.anchor()},
                           {"period", s.period()},
                           {"templates", rows_to_json(s.templates())}};
    return out;
}

laurent::BandedEndo endo_from_json(const json& j) {
    if (!j.is_object()) bad("an endo descriptor must be an object");
    int p = prime_of(j);

    const json& exc = field(j, "exceptional");
    if (!exc.is_object()) bad("\"exceptional\" must map row indices to rows");
    int mn = std::numeric_limits<int>::max(), mx = std::numeric_limits<int>::min();
    std::vector<std::pair<int, laurent::Row>> keyed;
    for (const auto& [k, v] : exc.items()) {
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(k, &used);
            if (used != k.size()) throw std::invalid_argument(k);
        } catch (const std::exception&) {
            bad("\"exceptional\" keys must be integer row indices, got \"" + k + "\"");
        }
        keyed.emplace_back(n, row_from_json(p, v));
        mn = std::min(mn, n);
        mx = std::max(mx, n + 1);
    }
    int m_minus = keyed.empty() ? 0 : mn;
    int m_plus = keyed.empty() ? 0 : mx;
    if (auto it = j.find("m_minus"); it != j.end()) m_minus = it->get<int>();
    if (auto it = j.find("m_plus"); it != j.end()) m_plus = it->get<int>();
    if (m_minus > m_plus) bad("band bounds out of order");
    std::vector<laurent::Row> exceptional(static_cast<std::size_t>(m_plus - m_minus),
                                          laurent::Row(p, {}));
    for (auto& [n, r] : keyed) {
        if (n < m_minus || n >= m_plus) bad("exceptional row index outside the declared band");
        exceptional[static_cast<std::size_t>(n - m_minus)] = std::move(r);
    }

    const json& upj = field(j, "up_tail");
    laurent::UpTail up;
    up.period = int_field(upj, "period");
    up.templates = rows_from_json(p, field(upj, "templates"), "\"templates\"");
    if (auto it = upj.find("shifts"); it != upj.end()) {
        if (!it->is_array()) bad("\"shifts\" must be a list of integers");
        for (const auto& s : *it) up.shifts.push_back(s.get<int>());
    } else {
        up.shifts.assign(up.templates.size(), int_field(upj, "shift"));
    }

    std::optional<laurent::DownTail> down;
    if (auto it = j.find("down_tail"); it != j.end() && !it->is_null() && *it != json("zero")) {
        laurent::DownTail d;
        d.period = int_field(*it, "period");
        d.shift = int_field(*it, "shift");
        d.templates = rows_from_json(p, field(*it, "templates"), "\"templates\"");
        down = std::move(d);
    }

    auto problems = laurent::BandedEndo::validate(p, m_minus, m_plus, exceptional, up, down);
    if (!problems.empty()) {
        std::string msg = "invalid endo descriptor:";
        for (const auto& m : problems) msg += " " + m + ";";
        msg.pop_back();
        bad(msg);
    }
    return laurent::BandedEndo(p, m_minus, m_plus, std::move(exceptional), std::move(up),
                               std::move(down));
}

json endo_to_json(const laurent::BandedEndo& e) {
    json out;
    out["p"] = e.p();
    out["m_minus"] = e.m_minus();
    out["m_plus"] = e.m_plus();
    json exc = json::object();
    for (int n = e.m_minus(); n < e.m_plus(); ++n) {
        laurent::Row r = e.row(n);
        if (!r.zero()) exc[std::to_string(n)] = row_to_json(r);
    }
    out["exceptional"] = std::move(exc);
    json up;
    up["period"] = e.up().period;
    const auto& shifts = e.up().shifts;
    if (std::all_of(shifts.begin(), shifts.end(), [&](int s) { return s == shifts.front(); }) &&
        !shifts.empty())
        up["shift"] = shifts.front();
    else
        up["shifts"] = shifts;
    up["templates"] = rows_to_json(e.up().templates);
    out["up_tail"] = std::move(up);
    if (e.down())
        out["down_tail"] = {{"period", e.down()->period},
                            {"shift", e.down()->shift},
                            {"templates", rows_to_json(e.down()->templates)}};
    else
        out["down_tail"] = "zero";
    return out;
}

finite::FiniteGroup group_from_json(const json& j) {
    if (!j.is_object()) bad("a group descriptor must be an object");
    const json& kind = field(j, "kind");
    if (kind == "cyclic-product") {
        const json& f = field(j, "factors");
        if (!f.is_array() || f.empty()) bad("\"factors\" must be a nonempty integer list");
        std::vector<int> factors;
        for (const auto& n : f) {
            if (!n.is_number_integer() || n.get<int>() < 1) bad("cyclic factors must be >= 1");
            factors.push_back(n.get<int>());
        }
        return finite::cyclic_product(factors);
    }
    if (kind == "cayley") {
        const json& t = field(j, "table");
        if (!t.is_array()) bad("\"table\" must be a square matrix");
        std::vector<std::vector<finite::Elt>> table;
        for (const auto& row : t) {
            if (!row.is_array()) bad("\"table\" must be a square matrix");
            std::vector<finite::Elt> r;
            for (const auto& x : row) r.push_back(static_cast<finite::Elt>(x.get<int>()));
            table.push_back(std::move(r));
        }
        try {
            return finite::FiniteGroup(std::move(table), j.value("name", std::string{}));
        } catch (const std::exception& e) {
            bad(std::string("invalid Cayley table: ") + e.what());
        }
    }
    bad("unknown group kind \"" + kind.dump() + "\"");
}

json group_to_json(const finite::FiniteGroup& g) {
    json out;
    out["kind"] = "cayley";
    if (!g.name().empty()) out["name"] = g.name();
    json table = json::array();
    for (const auto& row : g.table()) {
        json r = json::array();
        for (auto x : row) r.push_back(static_cast<int>(x));
        table.push_back(std::move(r));
    }
    out["table"] = std::move(table);
    return out;
}

finite::FiniteEndo finite_endo_from_json(const finite::FiniteGroup& g, const json& j) {
    if (!j.is_object()) bad("an endo descriptor must be an object");
    try {
        if (auto it = j.find("map"); it != j.end()) {
            std::vector<finite::Elt> map;
            for (const auto& x : *it) map.push_back(static_cast<finite::Elt>(x.get<int>()));
            return finite::FiniteEndo(g, std::move(map));
        }
        if (j.contains("gens") && j.contains("images")) {
            std::vector<finite::Elt> gens, images;
            for (const auto& x : field(j, "gens")) gens.push_back(static_cast<finite::Elt>(x.get<int>()));
            for (const auto& x : field(j, "images"))
                images.push_back(static_cast<finite::Elt>(x.get<int>()));
            return finite::endo_from_map(g, gens, images);
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        bad(std::string("invalid finite endo: ") + e.what());
    }
    bad("a finite endo needs either \"map\" or \"gens\"+\"images\"");
}

json finite_endo_to_json(const finite::FiniteEndo& e) {
    json map = json::array();
    for (auto x : e.map()) map.push_back(static_cast<int>(x));
    return json{{"map", std::move(map)}};
}

finite::Subgroup finite_subgroup_from_json(const finite::FiniteGroup& g, const json& j) {
    std::vector<finite::Elt> elts;
    bool close = false;
    const json* list = &j;
    if (j.is_object()) {
        list = &field(j, "gens");
        close = true;
    }
    if (!list->is_array()) bad("a finite subgroup must be an element list or {\"gens\": [...]}");
    for (const auto& x : *list) {
        if (!x.is_number_integer() || x.get<int>() < 0 || x.get<int>() >= g.order())
            bad("subgroup element index out of range");
        elts.push_back(static_cast<finite::Elt>(x.get<int>()));
    }
    if (close) return finite::closure(g, std::move(elts));
    std::sort(elts.begin(), elts.end());
    elts.erase(std::unique(elts.begin(), elts.end()), elts.end());
    if (!finite::is_subgroup(g, elts)) bad("element list is not closed under the group operation");
    return elts;
}

json finite_subgroup_to_json(const finite::Subgroup& s) {
    json out = json::array();
    for (auto x : s) out.push_back(static_cast<int>(x));
    return out;
}

LoadedCase case_from_json(const json& j) {
    if (!j.is_object()) bad("the input must be a JSON object");
    if (!j.contains("schema") || j["schema"] != 1) bad("unsupported or missing \"schema\" (want 1)");
    const json& uni = field(j, "universe");

    if (uni == "finite") {
        finite::FiniteGroup g = group_from_json(field(j, "group"));
        finite::FiniteUniverse u(std::move(g));
        finite::FiniteEndo e = finite_endo_from_json(u.group(), field(j, "endo"));
        std::map<std::string, finite::Subgroup> subs;
        if (auto it = j.find("subgroups"); it != j.end()) {
            if (!it->is_object()) bad("\"subgroups\" must map names to descriptors");
            for (const auto& [name, sj] : it->items())
                subs.emplace(name, finite_subgroup_from_json(u.group(), sj));
        }
        return FiniteCase{std::move(u), std::move(e), std::move(subs)};
    }
    if (uni == "laurent") {
        laurent::BandedEndo e = endo_from_json(field(j, "endo"));
        int p = e.p();
        if (j.contains("p") && j["p"].get<int>() != p) bad("top-level \"p\" disagrees with the endo");
        std::optional<laurent::EPC> ambient;
        if (auto it = j.find("ambient"); it != j.end() && !it->is_null()) {
            ambient = subgroup_from_json(*it);
            if (ambient->p() != p) bad("ambient subgroup built over a different prime");
        }
        laurent::LaurentUniverse u(p, std::move(ambient));
        std::map<std::string, laurent::EPC> subs;
        if (auto it = j.find("subgroups"); it != j.end()) {
            if (!it->is_object()) bad("\"subgroups\" must map names to descriptors");
            for (const auto& [name, sj] : it->items()) {
                laurent::EPC s = subgroup_from_json(sj);
                if (s.p() != p) bad("subgroup \"" + name + "\" built over a different prime");
                subs.emplace(name, std::move(s));
            }
        }
        return LaurentCase{std::move(u), std::move(e), std::move(subs)};
    }
    bad("\"universe\" must be \"finite\" or \"laurent\"");
}

json parse_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) bad("malformed JSON input");
    return j;
}

}  // namespace tdlc::io
