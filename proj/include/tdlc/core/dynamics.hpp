#pragma once

#include "tdlc/core/tidiness.hpp"

#include <algorithm>

namespace tdlc::core {

template <class Un>
struct TidyFamily {
    std::vector<typename Un::Subgroup> brackets;  // W_[0..n]
    std::vector<typename Un::Subgroup> family;    // W^[alpha,0..n]
    Certificate cert;
};

/* From one tidy W, build the family W_[k+1] = {x in W_[k] : x A_k included
   in A_k W_[k]} and W^[alpha,k] = A_k W_[k], where A_k = alpha^k(W_+).
   Every member is again tidy and A_k sits inside W^[alpha,k]; both facts
   are re-verified.  Needs exact images and element tests, so the finite
   universe only. */
template <class Un>
TidyFamily<Un> iterate_tidy_family(const Un& u, const typename Un::Endo& e,
                                   const typename Un::Subgroup& W, int n, const Horizon& h = {}) {
    if constexpr (!Un::kHasEnumeration) {
        (void)u; (void)e; (void)W; (void)n; (void)h;
        throw CapabilityError("tidy family iteration needs the finite universe");
    } else {
        auto seed = check_tidy(u, e, W, h);
        if (!seed.cert.conclusive()) return {{}, {}, seed.cert};
        if (!seed.tidy) throw InputError("tidy family iteration needs a tidy seed");

        TidyFamily<Un> out;
        auto up = u_plus(u, e, W, h);
        out.cert = Certificate::combine(seed.cert, up.cert);
        typename Un::Subgroup a = up.value;  // A_0 = W_+
        out.brackets.push_back(W);
        out.family.push_back(u.product_with(a, W, h).value);  // W_+ W = W
        for (int k = 0; k < n; ++k) {
            auto next = u.tilde(out.brackets.back(), a);
            auto im = u.image(e, a, h);
            out.cert = Certificate::combine(out.cert, im.cert);
            a = im.value;  // A_{k+1}
            auto fam = u.product_with(a, next, h);
            out.cert = Certificate::combine(out.cert, fam.cert);
            if (!u.contains(fam.value, a))
                throw std::logic_error("tidy family lost alpha^k(W_+)");
            out.brackets.push_back(std::move(next));
            out.family.push_back(std::move(fam.value));
        }
        for (const auto& s : out.brackets)
            if (!check_tidy(u, e, s, h).tidy) throw std::logic_error("W_[k] is not tidy");
        for (const auto& s : out.family)
            if (!check_tidy(u, e, s, h).tidy) throw std::logic_error("W^[alpha,k] is not tidy");
        return out;
    }
}

template <class Un>
struct DynamicsReport {
    Certified<typename Un::Subgroup> par;        // forward orbit bounded
    Certified<typename Un::Subgroup> par_minus;  // bounded regressive sequence exists
    Certified<typename Un::Subgroup> lev;        // par meet par_minus
    Certified<typename Un::Subgroup> bik;        // closed iterated kernel meet par_minus
    Certified<typename Un::Subgroup> nub;        // meet of all minimizing subgroups
};

/* The subgroups the endomorphism carries with it.  Finite universe: all
   five, exactly; the structural facts (bik inside nub inside lev, bik
   normal in par_minus, induced map on par_minus/bik bijective) are
   re-verified and violations are engine bugs.  Sequence universe: only
   par_minus and bik, as unions over the declared compact ambient, never
   better than horizon-certified. */
template <class Un>
DynamicsReport<Un> dynamics_subgroups(const Un& u, const typename Un::Endo& e,
                                      const Horizon& h = {}) {
    DynamicsReport<Un> rep;
    if constexpr (Un::kHasEnumeration) {
        const auto exact = Certificate::exact();
        rep.par = {u.whole_subgroup(), Certificate::exact("finite group: every orbit is bounded")};

        auto istep = [&](int, const typename Un::Subgroup& cur) {
            return u.image(e, cur, h).value;
        };
        auto pm = u.limit_decreasing(u.whole_subgroup(), istep, h);
        rep.par_minus = {pm.value, pm.cert};
        rep.lev = {u.intersect(rep.par.value, rep.par_minus.value),
                   Certificate::combine(rep.par.cert, rep.par_minus.cert)};

        auto kstep = [&](int n, const typename Un::Subgroup&) {
            return u.preimage(u.endo_power(e, n + 1), u.trivial_subgroup(), u.whole_subgroup());
        };
        auto ik = u.limit_increasing(u.trivial_subgroup(), kstep, h);
        rep.bik = {u.intersect(ik.value, rep.par_minus.value),
                   Certificate::combine(ik.cert, rep.par_minus.cert)};

        /* in a compact group, minimizing means displacement 1: alpha(U) <= U */
        typename Un::Subgroup meet = u.whole_subgroup();
        for (const auto& s : u.all_subgroups()) {
            auto im = u.image(e, s, h);
            if (u.contains(s, im.value)) meet = u.intersect(meet, s);
        }
        rep.nub = {meet, exact};

        if (!u.contains(rep.nub.value, rep.bik.value) ||
            !u.contains(rep.lev.value, rep.nub.value))
            throw std::logic_error("bik <= nub <= lev failed");

        /* bik is normal in par_minus and the induced map on the quotient is
           an automorphism; verified on the quotient itself */
        auto rest = u.restrict_to(rep.par_minus.value);
        typename Un::Subgroup bik_r;
        for (auto x : rep.bik.value) bik_r.push_back(rest.to_sub[x]);
        std::sort(bik_r.begin(), bik_r.end());
        if (!rest.universe.is_normal(bik_r))
            throw std::logic_error("bik is not normal in par_minus");
        auto q = rest.universe.quotient(bik_r);
        const int qn = q.group.order();
        std::vector<typename Un::Element> qmap(qn, Un::kNotInSub);
        for (auto x : rep.par_minus.value) {
            auto y = u.apply(e, x);
            if (rest.to_sub[y] == Un::kNotInSub)
                throw std::logic_error("par_minus is not invariant");
            auto src = q.projection[rest.to_sub[x]];
            auto dst = q.projection[rest.to_sub[y]];
            if (qmap[src] != Un::kNotInSub && qmap[src] != dst)
                throw std::logic_error("induced map on par_minus/bik is ill-defined");
            qmap[src] = dst;
        }
        typename Un::Endo induced(q.group, std::vector<typename Un::Element>(qmap));
        (void)induced;  // the constructor is the multiplicativity check
        std::vector<char> hit(qn, 0);
        for (auto v : qmap) hit[v] = 1;
        for (int i = 0; i < qn; ++i)
            if (!hit[i]) throw std::logic_error("induced map on par_minus/bik is not onto");
    } else {
        auto none = [&](const char* why) {
            return Certified<typename Un::Subgroup>{u.trivial_subgroup(),
                                                    Certificate::inconclusive(why)};
        };
        rep.par = none("forward boundedness is not decidable here");
        rep.lev = none("needs par");
        rep.nub = none("needs subgroup enumeration");
        auto amb = u.declared_ambient();
        if (!amb) {
            rep.par_minus = none("no declared compact ambient");
            rep.bik = none("no declared compact ambient");
            return rep;
        }
        /* par_minus from below: V_{++} of the ambient; never exact because
           only one ambient is unioned over */
        const Certificate amb_only = Certificate::horizon("union over the declared ambient only");
        auto up = u_plus(u, e, *amb, h);
        Certificate acc = Certificate::combine(amb_only, up.cert);
        if (!acc.conclusive()) {
            rep.par_minus = {*amb, acc};
            rep.bik = {*amb, acc};
            return rep;
        }
        auto istep = [&](int, const typename Un::Subgroup& cur) {
            auto im = u.image(e, cur, h);
            acc = Certificate::combine(acc, im.cert);
            return im.value;
        };
        auto vpp = u.limit_increasing(up.value, istep, h);
        acc = Certificate::combine(acc, vpp.cert);
        rep.par_minus = {vpp.value, acc};
        if (!acc.conclusive()) {
            rep.bik = {vpp.value, acc};
            return rep;
        }
        auto kstep = [&](int n, const typename Un::Subgroup&) {
            return u.preimage(u.endo_power(e, n + 1), u.trivial_subgroup(), *amb);
        };
        auto ik = u.limit_increasing(u.trivial_subgroup(), kstep, h);
        rep.bik = {u.intersect(ik.value, rep.par_minus.value),
                   Certificate::combine(acc, ik.cert)};
    }
    return rep;
}

}  // namespace tdlc::core
