#include "tdlc/core/properties.hpp"

#include "tdlc/core/dynamics.hpp"
#include "tdlc/core/scale.hpp"
#include "tdlc/finite/catalog.hpp"
#include "tdlc/finite/finite_universe.hpp"

#include <algorithm>
#include <sstream>

namespace tdlc::props {
namespace {

using finite::catalog_up_to;
using finite::Elt;
using finite::FiniteEndo;
using finite::FiniteGroup;
using finite::FiniteUniverse;
using finite::Subgroup;

void record(PropertyReport& rep, const std::string& group, const FiniteEndo* e, const Subgroup* s,
            std::string detail) {
    ++rep.failures;
    if (rep.counterexamples.size() >= 3) return;
    Counterexample c;
    c.group = group;
    if (e) c.endo_map = e->map();
    if (s) c.subgroup = *s;
    c.detail = std::move(detail);
    rep.counterexamples.push_back(std::move(c));
}

template <class Fn>
void for_each_endo(const PropertyOptions& opt, Fn&& fn) {
    for (const auto* entry : catalog_up_to(opt.max_order)) {
        FiniteUniverse u(entry->group);
        for (const auto& e : u.enumerate_endos(opt.endo_cap, opt.seed)) fn(u, entry->name, e);
    }
}

template <class Fn>
void for_each_case(const PropertyOptions& opt, Fn&& fn) {
    for (const auto* entry : catalog_up_to(opt.max_order)) {
        FiniteUniverse u(entry->group);
        auto subs = u.all_subgroups();
        for (const auto& e : u.enumerate_endos(opt.endo_cap, opt.seed))
            for (const auto& s : subs) fn(u, entry->name, e, s);
    }
}

bool invariant_under(const FiniteUniverse& u, const FiniteEndo& e, const Subgroup& s) {
    return u.contains(s, u.image(e, s).value);
}

/* Elements with a predecessor chain of every length: peel anything without
   a predecessor until stable. */
Subgroup par_minus_elements(const FiniteGroup& g, const FiniteEndo& f) {
    std::vector<char> in(g.order(), 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (Elt x = 0; x < g.order(); ++x) {
            if (!in[x]) continue;
            bool pred = false;
            for (Elt y = 0; y < g.order(); ++y)
                if (in[y] && f.apply(y) == x) {
                    pred = true;
                    break;
                }
            if (!pred) {
                in[x] = 0;
                changed = true;
            }
        }
    }
    Subgroup r;
    for (Elt x = 0; x < g.order(); ++x)
        if (in[x]) r.push_back(x);
    return r;
}

Subgroup iterated_kernel_elements(const FiniteGroup& g, const FiniteEndo& f) {
    Subgroup r;
    for (Elt x = 0; x < g.order(); ++x) {
        Elt cur = x;
        bool dies = cur == g.identity();
        for (int k = 0; k < g.order() && !dies; ++k) {
            cur = f.apply(cur);
            dies = cur == g.identity();
        }
        if (dies) r.push_back(x);
    }
    return r;
}

/* The subgroup generated by {alpha^m(y) : y in V_+, alpha^n(y) in V_- for
   some n >= m}; orbits are walked for 2|G| steps so that cyclic revisits of
   V_- are seen past their first pass. */
Subgroup existential_l(const FiniteUniverse& u, const FiniteEndo& e, const Subgroup& v) {
    const FiniteGroup& g = u.group();
    Subgroup vp = core::u_plus(u, e, v).value;
    Subgroup vm = core::u_minus(u, e, v).value;
    std::vector<Elt> pts{g.identity()};
    for (Elt y : vp) {
        std::vector<Elt> orbit{y};
        Elt cur = y;
        for (int k = 0; k < 2 * g.order(); ++k) {
            cur = e.apply(cur);
            orbit.push_back(cur);
        }
        int last = -1;
        for (int n = static_cast<int>(orbit.size()) - 1; n >= 0 && last < 0; --n)
            if (finite::member(vm, orbit[n])) last = n;
        for (int m = 0; m <= last; ++m) pts.push_back(orbit[m]);
    }
    return finite::closure(g, pts);
}

Index image_side_index(const FiniteGroup& g, const FiniteEndo& f, const Subgroup& s, int n) {
    FiniteEndo fn = n == 0 ? finite::identity_endo(g) : finite::endo_pow(g, f, n);
    Subgroup im = finite::endo_image(g, fn, s);
    Subgroup cap = finite::intersect(im, s);
    return Index(im.size()) / Index(cap.size());
}

/* --- suites --- */

PropertyReport p_index_bridge(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "index-bridge";
    for_each_case(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e,
                           const Subgroup& s) {
        auto mc = core::minus_chain(u, e, s, 8);
        auto pc = core::plus_chain(u, e, s, 4);
        ++rep.cases;
        for (int j = 0; j <= 4; ++j)
            for (int l = 0; l <= 4; ++l)
                for (int m = l; m <= 4; ++m) {
                    auto a = finite::intersect(pc.terms[j], mc.terms[l]);
                    auto b = finite::intersect(pc.terms[j], mc.terms[m]);
                    auto lhs = u.index(a, b);
                    auto rhs = u.index(mc.terms[j + l], mc.terms[j + m]);
                    if (lhs.infinite || rhs.infinite || lhs.value != rhs.value) {
                        std::ostringstream os;
                        os << "index bridge failed at j=" << j << " l=" << l << " m=" << m;
                        record(rep, gname, &e, &s, os.str());
                        return;
                    }
                }
    });
    return rep;
}

PropertyReport p_monotone_stabilization(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "monotone-stabilization";
    for_each_case(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e,
                           const Subgroup& s) {
        ++rep.cases;
        auto pc = core::plus_chain(u, e, s, 8);
        for (std::size_t i = 1; i < pc.step_indices.size(); ++i)
            if (pc.step_indices[i] > pc.step_indices[i - 1]) {
                record(rep, gname, &e, &s, "step index sequence increased");
                return;
            }
        auto up = core::u_plus(u, e, s).value;
        auto um1 = u.preimage(e, s, s);
        auto tail = u.index(up, finite::intersect(up, um1));
        if (tail.infinite || pc.step_indices.back() != tail.value)
            record(rep, gname, &e, &s, "sequence did not stabilize at the fixpoint value");
    });
    return rep;
}

PropertyReport p_ta_equivalences(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "ta-equivalences";
    for_each_case(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e,
                           const Subgroup& s) {
        ++rep.cases;
        auto up = core::u_plus(u, e, s).value;
        auto mc = core::minus_chain(u, e, s, 4);
        auto um = core::u_minus(u, e, s).value;
        bool at1 = u.product(up, mc.terms[1]) == s;
        bool atn = true;
        for (int n = 2; n <= 4; ++n) atn = atn && u.product(up, mc.terms[n]) == s;
        bool atinf = u.product(up, um) == s;
        if (at1 != (at1 && atn) || at1 != atinf)
            record(rep, gname, &e, &s, "product factorizations disagree across depths");
    });
    return rep;
}

PropertyReport p_script_l_identity(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "script-l-identity";
    for_each_case(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e,
                           const Subgroup& s) {
        ++rep.cases;
        auto engine = core::script_l(u, e, s, opt.horizon);
        if (!engine.cert.conclusive() || engine.value != existential_l(u, e, s))
            record(rep, gname, &e, &s, "chain-computed L differs from the existential set");
    });
    return rep;
}

PropertyReport p_l_invariance(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "l-invariance";
    for_each_case(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e,
                           const Subgroup& s) {
        ++rep.cases;
        auto l0 = core::script_l(u, e, s, opt.horizon).value;
        auto um0 = core::u_minus(u, e, s).value;
        auto mc = core::minus_chain(u, e, s, 3);
        for (int n = 1; n <= 3; ++n) {
            if (core::script_l(u, e, mc.terms[n], opt.horizon).value != l0) {
                record(rep, gname, &e, &s, "L changed along the minus chain at depth " +
                                               std::to_string(n));
                return;
            }
            if (core::u_minus(u, e, mc.terms[n]).value != um0) {
                record(rep, gname, &e, &s, "U_- changed along the minus chain at depth " +
                                               std::to_string(n));
                return;
            }
        }
    });
    return rep;
}

PropertyReport p_regressive_membership(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "regressive-membership";
    for (const auto* entry : catalog_up_to(opt.max_order)) {
        FiniteUniverse u(entry->group);
        auto subs = u.all_subgroups();
        for (const auto& e : u.enumerate_endos(opt.endo_cap, opt.seed)) {
            auto pm = par_minus_elements(u.group(), e);
            for (const auto& s : subs) {
                if (!invariant_under(u, e, s)) continue;  // tidy subgroups only
                ++rep.cases;
                if (core::u_minus(u, e, s).value != s) {
                    record(rep, entry->name, &e, &s, "tidy W with W_- smaller than W");
                    continue;
                }
                if (core::u_plus(u, e, s).value != finite::intersect(s, pm))
                    record(rep, entry->name, &e, &s,
                           "W_+ differs from the regressive members of W");
            }
        }
    }
    return rep;
}

PropertyReport p_tidy_iff_minimizing(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "tidy-iff-minimizing";
    for_each_case(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e,
                           const Subgroup& s) {
        ++rep.cases;
        auto tr = core::check_tidy(u, e, s, opt.horizon);
        bool inv = invariant_under(u, e, s);
        if (!tr.cert.conclusive() || tr.tidy != inv)
            record(rep, gname, &e, &s,
                   inv ? "invariant subgroup but a tidiness verdict is negative"
                       : "tidy verdict on a non-invariant subgroup");
        else if (tr.tidy && tr.displacement != 1)
            record(rep, gname, &e, &s, "tidy subgroup with displacement above 1");
    });
    return rep;
}

PropertyReport p_intersection_stability(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "intersection-stability";
    for (const auto* entry : catalog_up_to(opt.max_order)) {
        FiniteUniverse u(entry->group);
        auto subs = u.all_subgroups();
        for (const auto& e : u.enumerate_endos(opt.endo_cap, opt.seed)) {
            std::vector<const Subgroup*> tidy;
            for (const auto& s : subs)
                if (invariant_under(u, e, s)) tidy.push_back(&s);
            for (std::size_t i = 0; i < tidy.size(); ++i)
                for (std::size_t j = i; j < tidy.size(); ++j) {
                    ++rep.cases;
                    auto meet = finite::intersect(*tidy[i], *tidy[j]);
                    if (!core::check_tidy(u, e, meet, opt.horizon).tidy) {
                        record(rep, entry->name, &e, &meet, "meet of tidy subgroups not tidy");
                        continue;
                    }
                    auto pi = core::u_plus(u, e, *tidy[i]).value;
                    auto pj = core::u_plus(u, e, *tidy[j]).value;
                    if (core::u_plus(u, e, meet).value != finite::intersect(pi, pj)) {
                        record(rep, entry->name, &e, &meet, "plus part of the meet mismatched");
                        continue;
                    }
                    auto mi = core::u_minus(u, e, *tidy[i]).value;
                    auto mj = core::u_minus(u, e, *tidy[j]).value;
                    if (core::u_minus(u, e, meet).value != finite::intersect(mi, mj))
                        record(rep, entry->name, &e, &meet, "minus part of the meet mismatched");
                }
        }
    }
    return rep;
}

PropertyReport p_scalesame(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "scalesame";
    for (const auto* entry : catalog_up_to(opt.max_order)) {
        FiniteUniverse u(entry->group);
        auto subs = u.all_subgroups();
        for (const auto& e : u.enumerate_endos(opt.endo_cap, opt.seed)) {
            ++rep.cases;
            Index first = 0;
            for (const auto& s : subs) {
                if (!invariant_under(u, e, s)) continue;
                Index d = core::displacement_index(u, e, s);
                if (first == 0) first = d;
                if (d != first) {
                    record(rep, entry->name, &e, &s, "tidy subgroups with different displacement");
                    break;
                }
            }
        }
    }
    return rep;
}

PropertyReport p_powers(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "powers";
    for_each_case(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e,
                           const Subgroup& s) {
        if (!invariant_under(u, e, s)) return;
        if (!core::check_tidy(u, e, s, opt.horizon).tidy) return;  // covered elsewhere
        ++rep.cases;
        for (int k = 2; k <= 4; ++k)
            if (!core::check_tidy(u, u.endo_power(e, k), s, opt.horizon).tidy) {
                record(rep, gname, &e, &s,
                       "tidy for the map but not for its power k=" + std::to_string(k));
                return;
            }
    });
    return rep;
}

PropertyReport p_powers_converse_fails(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "powers-converse-fails";
    for (int p : {2, 3}) {
        ++rep.cases;
        std::vector<int> factors{p, p};
        FiniteUniverse u(finite::cyclic_product(factors));
        auto e = finite::endo_from_tuple_rule(u.group(), factors, [](const std::vector<int>& t) {
            return std::vector<int>{t[1], t[0]};
        });
        Subgroup w = finite::closure(u.group(), {finite::tuple_to_index(factors, {0, 1})});
        bool square_tidy = core::check_tidy(u, u.endo_power(e, 2), w, opt.horizon).tidy;
        bool self_tidy = core::check_tidy(u, e, w, opt.horizon).tidy;
        if (!square_tidy || self_tidy)
            record(rep, "C" + std::to_string(p) + "xC" + std::to_string(p), &e, &w,
                   "expected: tidy for the square, not tidy for the map itself");
    }
    return rep;
}

PropertyReport p_tidy_family(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "tidy-family";
    for_each_case(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e,
                           const Subgroup& s) {
        if (!invariant_under(u, e, s)) return;
        ++rep.cases;
        try {
            auto fam = core::iterate_tidy_family(u, e, s, 2, opt.horizon);
            for (const auto& a : fam.family)
                if (!u.contains(a, core::u_plus(u, e, s).value)) {
                    record(rep, gname, &e, &s, "family member lost the plus part");
                    return;
                }
        } catch (const std::exception& ex) {
            record(rep, gname, &e, &s, std::string("family iteration failed: ") + ex.what());
        }
    });
    return rep;
}

PropertyReport p_tidy_subgroups(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "tidy-subgroups";
    for (const auto* entry : catalog_up_to(opt.max_order)) {
        FiniteUniverse u(entry->group);
        auto subs = u.all_subgroups();
        for (const auto& e : u.enumerate_endos(opt.endo_cap, opt.seed)) {
            std::vector<char> tidy(subs.size(), 0);
            for (std::size_t i = 0; i < subs.size(); ++i)
                tidy[i] = invariant_under(u, e, subs[i]) ? 1 : 0;
            for (std::size_t i = 0; i < subs.size(); ++i) {
                if (!tidy[i]) continue;
                const auto& w = subs[i];
                ++rep.cases;
                auto mc = core::minus_chain(u, e, w, 3);
                bool ok = true;
                for (int n = 1; n <= 3 && ok; ++n)
                    ok = core::check_tidy(u, e, mc.terms[n], opt.horizon).tidy;
                if (!ok) {
                    record(rep, entry->name, &e, &w, "minus-chain term of a tidy W not tidy");
                    continue;
                }
                auto core_part = finite::intersect(core::u_plus(u, e, w).value,
                                                   core::u_minus(u, e, w).value);
                Subgroup meet = w;
                for (std::size_t j = 0; j < subs.size(); ++j)
                    if (tidy[j] && finite::subset(core_part, subs[j]) &&
                        finite::subset(subs[j], w))
                        meet = finite::intersect(meet, subs[j]);
                if (meet != core_part)
                    record(rep, entry->name, &e, &w,
                           "meet of sandwiched tidy subgroups misses W_+ meet W_-");
            }
        }
    }
    return rep;
}

PropertyReport p_exposure_factorization(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "exposure-factorization";
    for_each_case(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e,
                           const Subgroup& s) {
        if (!core::is_tidy_above(u, e, s, opt.horizon).value) return;
        ++rep.cases;
        auto l = core::script_l(u, e, s, opt.horizon).value;
        auto vp = core::u_plus(u, e, s).value;
        auto vm_part = finite::intersect(core::u_minus(u, e, s).value, l);
        Subgroup a = vp;
        for (int exp = 0; exp <= u.group().order(); ++exp) {
            if (u.product(finite::intersect(a, l), vm_part) == l) return;  // found
            a = u.image(e, a).value;
        }
        record(rep, gname, &e, &s, "no exponent factorizes L within the group order");
    });
    return rep;
}

PropertyReport p_moller_bridge(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "moller-bridge";
    for_each_case(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e,
                           const Subgroup& s) {
        ++rep.cases;
        for (int n = 1; n <= 4; ++n) {
            auto pre = u.preimage(u.endo_power(e, n), s, s);
            auto idx = u.index(s, pre);
            if (idx.infinite || idx.value != image_side_index(u.group(), e, s, n)) {
                record(rep, gname, &e, &s,
                       "image and preimage index counts differ at n=" + std::to_string(n));
                return;
            }
        }
    });
    return rep;
}

PropertyReport p_dynamics_chain(const PropertyOptions& opt) {
    PropertyReport rep;
    rep.name = "dynamics-chain";
    for_each_endo(opt, [&](const FiniteUniverse& u, const std::string& gname, const FiniteEndo& e) {
        ++rep.cases;
        try {
            auto d = core::dynamics_subgroups(u, e, opt.horizon);
            auto pm = par_minus_elements(u.group(), e);
            if (d.par_minus.value != pm) {
                record(rep, gname, &e, nullptr, "par_minus differs from element peeling");
                return;
            }
            auto bik = finite::intersect(iterated_kernel_elements(u.group(), e), pm);
            if (d.bik.value != bik) {
                record(rep, gname, &e, nullptr, "bik differs from orbit search");
                return;
            }
            Subgroup meet = u.whole_subgroup();
            for (const auto& s : u.all_subgroups())
                if (invariant_under(u, e, s)) meet = finite::intersect(meet, s);
            if (d.nub.value != meet) {
                record(rep, gname, &e, nullptr, "nub differs from the subgroup sweep");
                return;
            }
            if (!finite::subset(d.bik.value, d.nub.value) ||
                !finite::subset(d.nub.value, d.lev.value))
                record(rep, gname, &e, nullptr, "bik <= nub <= lev violated");
        } catch (const std::exception& ex) {
            record(rep, gname, &e, nullptr, std::string("dynamics failed: ") + ex.what());
        }
    });
    return rep;
}

}  // namespace

const std::vector<std::pair<std::string, PropertyFn>>& property_registry() {
    static const std::vector<std::pair<std::string, PropertyFn>> reg = {
        {"index-bridge", p_index_bridge},
        {"monotone-stabilization", p_monotone_stabilization},
        {"ta-equivalences", p_ta_equivalences},
        {"script-l-identity", p_script_l_identity},
        {"l-invariance", p_l_invariance},
        {"regressive-membership", p_regressive_membership},
        {"tidy-iff-minimizing", p_tidy_iff_minimizing},
        {"intersection-stability", p_intersection_stability},
        {"scalesame", p_scalesame},
        {"powers", p_powers},
        {"powers-converse-fails", p_powers_converse_fails},
        {"tidy-family", p_tidy_family},
        {"tidy-subgroups", p_tidy_subgroups},
        {"exposure-factorization", p_exposure_factorization},
        {"moller-bridge", p_moller_bridge},
        {"dynamics-chain", p_dynamics_chain},
    };
    return reg;
}

std::vector<std::string> property_names() {
    std::vector<std::string> v;
    for (const auto& [name, fn] : property_registry()) v.push_back(name);
    return v;
}

bool has_property(const std::string& name) {
    for (const auto& [n, fn] : property_registry())
        if (n == name) return true;
    return false;
}

PropertyReport run_property(const std::string& name, const PropertyOptions& opt) {
    for (const auto& [n, fn] : property_registry())
        if (n == name) return fn(opt);
    throw InputError("unknown property suite: " + name);
}

}  // namespace tdlc::props
