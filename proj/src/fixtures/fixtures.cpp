#include "tdlc/fixtures/fixtures.hpp"

#include "tdlc/core/chains.hpp"
#include "tdlc/core/scale.hpp"
#include "tdlc/core/tidiness.hpp"
#include "tdlc/fixtures/embedded.hpp"
#include "tdlc/io/descriptors.hpp"

#include <map>
#include <sstream>
#include <type_traits>

namespace tdlc::fixtures {

using io::json;

namespace {

const std::map<std::string, json>& docs() {
    static const std::map<std::string, json> m = [] {
        std::map<std::string, json> out;
        const auto* files = detail::embedded_files();
        for (int i = 0; i < detail::embedded_file_count(); ++i)
            out.emplace(files[i].name, io::parse_json_text(files[i].body));
        return out;
    }();
    return m;
}

const json& embedded_doc(const std::string& file) {
    auto it = docs().find(file);
    if (it == docs().end()) throw InputError("no embedded fixture file \"" + file + "\"");
    return it->second;
}

bool index_matches(const Index& got, const json& want) {
    if (want.is_string()) return got.str() == want.get<std::string>();
    if (want.is_number_integer()) return got == Index(want.get<long long>());
    return false;
}

std::string dump_index(const Index& i) { return i.str(); }

/* --- per-universe glue ------------------------------------------------- */

finite::Subgroup expect_subgroup(const io::FiniteCase& c, const json& j) {
    return io::finite_subgroup_from_json(c.universe.group(), j);
}

laurent::EPC expect_subgroup(const io::LaurentCase& c, const json& j) {
    laurent::EPC s = io::subgroup_from_json(j);
    if (s.p() != c.universe.p()) throw InputError("expected subgroup built over a different prime");
    return s;
}

/* --- entry evaluation --------------------------------------------------- */

struct EntryFail {
    std::string message;
};

void fail(std::string expected, std::string got) {
    throw EntryFail{"expected " + std::move(expected) + ", got " + std::move(got)};
}

void need_conclusive(const Certificate& c, const char* what) {
    if (!c.conclusive())
        throw EntryFail{std::string(what) + " inconclusive: " + c.evidence};
}

template <class Case>
void run_entry(const Case& c, const json& entry, const Horizon& h) {
    constexpr bool kLaurent = std::is_same_v<Case, io::LaurentCase>;
    const auto& u = c.universe;
    const std::string op = entry.at("op").get<std::string>();
    const json args = entry.value("args", json::object());
    const json& want = entry.at("expect");

    auto endo = [&] {
        int power = args.value("power", 1);
        if (power < 1) throw InputError("\"power\" must be >= 1");
        return power == 1 ? c.endo : u.endo_power(c.endo, power);
    }();
    auto subgroup = [&]() -> const auto& {
        const std::string name = args.value("subgroup", "");
        auto it = c.subgroups.find(name);
        if (it == c.subgroups.end())
            throw InputError("fixture has no subgroup named \"" + name + "\"");
        return it->second;
    };
    auto check_subgroup = [&](const auto& got, const json& w) {
        auto wanted = expect_subgroup(c, w);
        if (!u.equal(got, wanted)) fail(u.describe(wanted), u.describe(got));
    };
    auto check_index = [&](const Index& got, const json& w) {
        if (!index_matches(got, w)) fail(w.dump(), dump_index(got));
    };
    auto check_flag = [&](const char* key, bool got, const json& w) {
        if (w.contains(key) && w.at(key).get<bool>() != got)
            fail(std::string(key) + "=" + w.at(key).dump(), got ? "true" : "false");
    };

    if (op == "displacement") {
        check_index(core::displacement_index(u, endo, subgroup()), want);
    } else if (op == "scale" || op == "scale-power") {
        auto e = op == "scale" ? endo : u.endo_power(c.endo, args.at("n").get<int>());
        auto r = core::scale(u, e, subgroup(), h);
        need_conclusive(r.cert, "scale");
        if (want.is_object()) {
            check_index(r.scale, want.at("value"));
            if (want.contains("method") && want.at("method").get<std::string>() != r.method)
                fail(want.at("method").dump(), r.method);
        } else {
            check_index(r.scale, want);
        }
    } else if (op == "moller") {
        auto r = core::moller_scale(u, endo, subgroup(), h);
        need_conclusive(r.cert, "index growth");
        check_index(r.scale, want.at("scale"));
        if (want.contains("log")) {
            const auto& log = want.at("log");
            if (log.size() > r.index_log.size())
                fail(std::to_string(log.size()) + " log entries",
                     std::to_string(r.index_log.size()));
            for (std::size_t i = 0; i < log.size(); ++i)
                if (!index_matches(r.index_log[i].second, log[i]))
                    fail("a_" + std::to_string(i) + " = " + log[i].dump(),
                         dump_index(r.index_log[i].second));
        }
    } else if (op == "tidy") {
        auto rep = core::check_tidy(u, endo, subgroup(), h);
        need_conclusive(rep.cert, "tidiness check");
        check_flag("ta", rep.ta, want);
        check_flag("tb1", rep.tb1, want);
        check_flag("tb2", rep.tb2, want);
        check_flag("tidy", rep.tidy, want);
        if (want.contains("displacement")) check_index(rep.displacement, want.at("displacement"));
        if (want.contains("tb2-prefix")) {
            const auto& pre = want.at("tb2-prefix");
            if (rep.tb2_sequence.size() < pre.size())
                fail(std::to_string(pre.size()) + " image step indices",
                     std::to_string(rep.tb2_sequence.size()));
            for (std::size_t i = 0; i < pre.size(); ++i)
                if (!index_matches(rep.tb2_sequence[i], pre[i]))
                    fail("step index " + pre[i].dump() + " at stage " + std::to_string(i),
                         dump_index(rep.tb2_sequence[i]));
        }
    } else if (op == "tidy-trace") {
        auto t = core::tidying_procedure(u, endo, subgroup(), h);
        need_conclusive(t.cert, "tidying procedure");
        if (want.contains("displacements")) {
            const auto& d = want.at("displacements");
            if (d.size() != t.displacements.size())
                fail(std::to_string(d.size()) + " displacements",
                     std::to_string(t.displacements.size()));
            for (std::size_t i = 0; i < d.size(); ++i)
                if (!index_matches(t.displacements[i], d[i]))
                    fail("displacement " + d[i].dump() + " at stage " + std::to_string(i),
                         dump_index(t.displacements[i]));
        }
        bool tidy = t.final_report && t.final_report->tidy;
        check_flag("tidy", tidy, want);
        if (want.contains("final")) {
            if (!t.step3) throw EntryFail{"tidying stopped before its last step"};
            check_subgroup(t.step3->w, want.at("final"));
        }
    } else if (op == "tidy-above") {
        auto r = core::tidy_above_step(u, endo, subgroup(), h);
        need_conclusive(r.cert, "tidy-above walk");
        if (want.contains("steps") && want.at("steps").get<int>() != r.steps)
            fail(want.at("steps").dump() + " steps", std::to_string(r.steps));
        if (want.contains("displacement")) check_index(r.displacement, want.at("displacement"));
        if (want.contains("term")) check_subgroup(r.V, want.at("term"));
    } else if (op == "u-plus" || op == "u-minus" || op == "script-l") {
        auto r = op == "u-plus"    ? core::u_plus(u, endo, subgroup(), h)
                 : op == "u-minus" ? core::u_minus(u, endo, subgroup(), h)
                                   : core::script_l(u, endo, subgroup(), h);
        need_conclusive(r.cert, op.c_str());
        check_subgroup(r.value, want);
    } else if (op == "image") {
        auto im = u.image(endo, subgroup(), h);
        need_conclusive(im.cert, "image");
        check_subgroup(im.value, want);
    } else if (op == "image-index") {
        auto im = u.image(endo, subgroup(), h);
        need_conclusive(im.cert, "image");
        auto idx = u.index(im.value, subgroup());
        if (idx.infinite) throw EntryFail{"image index is infinite"};
        check_index(idx.value, want);
    } else if (op == "minus-chain" || op == "plus-chain") {
        int steps = args.at("steps").get<int>();
        auto r = op == "minus-chain" ? core::minus_chain(u, endo, subgroup(), steps)
                                     : core::plus_chain(u, endo, subgroup(), steps, h);
        need_conclusive(r.cert, "chain");
        if (want.contains("terms")) {
            const auto& terms = want.at("terms");
            if (terms.size() > r.terms.size())
                fail(std::to_string(terms.size()) + " chain terms",
                     std::to_string(r.terms.size()));
            for (std::size_t i = 0; i < terms.size(); ++i) {
                auto wanted = expect_subgroup(c, terms[i]);
                if (!u.equal(r.terms[i], wanted))
                    fail("term " + std::to_string(i) + " = " + u.describe(wanted),
                         u.describe(r.terms[i]));
            }
        }
        if (want.contains("indices")) {
            const auto& idx = want.at("indices");
            if (idx.size() > r.step_indices.size())
                fail(std::to_string(idx.size()) + " step indices",
                     std::to_string(r.step_indices.size()));
            for (std::size_t i = 0; i < idx.size(); ++i)
                if (!index_matches(r.step_indices[i], idx[i]))
                    fail("step index " + idx[i].dump() + " at stage " + std::to_string(i),
                         dump_index(r.step_indices[i]));
        }
    } else if (op == "iterated-image-meet") {
        int n = args.at("n").get<int>();
        auto acc = subgroup();
        auto cur = subgroup();
        Certificate cert = Certificate::exact();
        for (int k = 1; k <= n; ++k) {
            auto im = u.image(endo, cur, h);
            cert = Certificate::combine(cert, im.cert);
            cur = im.value;
            acc = u.intersect(acc, cur);
        }
        need_conclusive(cert, "image iteration");
        check_subgroup(acc, want);
    } else if constexpr (kLaurent) {
        if (op == "valuation-growth") {
            int nmin = args.at("n-min").get<int>();
            int nmax = args.at("n-max").get<int>();
            int kmax = args.at("k-max").get<int>();
            json k0s = json::array(), finals = json::array();
            for (int n = nmin; n <= nmax; ++n) {
                laurent::SeqVector x = laurent::basis_row(u.p(), n);
                int prev = n, k0 = 0;
                for (int k = 1; k <= kmax; ++k) {
                    x = u.apply(c.endo, x);
                    auto v = laurent::valuation(x);
                    if (!v) throw EntryFail{"orbit of t^" + std::to_string(n) + " died"};
                    if (*v < prev) k0 = k;
                    prev = *v;
                }
                k0s.push_back(k0);
                finals.push_back(prev);
            }
            if (want.at("k0") != k0s) fail(want.at("k0").dump(), k0s.dump());
            if (want.at("final") != finals) fail(want.at("final").dump(), finals.dump());
        } else if (op == "solve-power-member") {
            laurent::SeqVector y = io::row_from_json(u.p(), args.at("vector"));
            int n = args.at("n").get<int>();
            for (int k = 1; k <= n; ++k) {
                auto x = laurent::solve_power(c.endo, y, k);
                bool member = x.has_value();
                if (member != want.at("member").get<bool>())
                    fail("member=" + want.at("member").dump() + " under power " + std::to_string(k),
                         member ? "true" : "false");
            }
        } else {
            throw InputError("unknown fixture operation \"" + op + "\"");
        }
    } else {
        throw InputError("unknown fixture operation \"" + op + "\"");
    }
}

}  // namespace

const std::vector<FixtureInfo>& registry() {
    static const std::vector<FixtureInfo> reg = [] {
        const json& r = embedded_doc("registry.json");
        if (!r.contains("schema") || r["schema"] != 1)
            throw InputError("fixture registry has an unsupported schema");
        std::vector<FixtureInfo> out;
        for (const auto& e : r.at("fixtures")) {
            FixtureInfo info;
            info.name = e.at("name").get<std::string>();
            info.file = e.at("file").get<std::string>();
            info.universe = e.at("universe").get<std::string>();
            info.source = e.at("source").get<std::string>();
            info.note = e.value("note", "");
            const json& doc = embedded_doc(info.file);
            if (doc.value("name", "") != info.name)
                throw InputError("fixture file \"" + info.file + "\" does not declare name \"" +
                                 info.name + "\"");
            out.push_back(std::move(info));
        }
        return out;
    }();
    return reg;
}

std::vector<std::string> fixture_names() {
    std::vector<std::string> out;
    for (const auto& f : registry()) out.push_back(f.name);
    return out;
}

bool has_fixture(const std::string& name) {
    for (const auto& f : registry())
        if (f.name == name) return true;
    return false;
}

const json& fixture_doc(const std::string& name) {
    for (const auto& f : registry())
        if (f.name == name) return embedded_doc(f.file);
    throw InputError("unknown fixture \"" + name + "\"");
}

bool FixtureReport::pass() const {
    for (const auto& c : checks)
        if (!c.ok) return false;
    return !checks.empty();
}

FixtureReport run_fixture(const std::string& name, const Horizon& h) {
    const json& doc = fixture_doc(name);
    io::LoadedCase lc = io::case_from_json(doc);
    FixtureReport rep;
    rep.name = name;
    if (!doc.contains("expected") || !doc.at("expected").is_array())
        throw InputError("fixture \"" + name + "\" has no expected list");
    for (const auto& entry : doc.at("expected")) {
        CheckOutcome out;
        out.op = entry.value("op", "?");
        out.detail = entry.value("args", json::object()).dump();
        try {
            std::visit([&](const auto& c) { run_entry(c, entry, h); }, lc);
            out.ok = true;
        } catch (const EntryFail& f) {
            out.ok = false;
            out.message = f.message;
        } catch (const std::exception& e) {
            out.ok = false;
            out.message = std::string("error: ") + e.what();
        }
        rep.checks.push_back(std::move(out));
    }
    return rep;
}

}  // namespace tdlc::fixtures
