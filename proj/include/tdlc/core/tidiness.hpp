#pragma once

#include "tdlc/core/chains.hpp"

#include <optional>
#include <sstream>

namespace tdlc::core {

/* U is tidy above iff U = U_+ U_{-1}.  The decision procedure avoids the
   product set: U_+ U_{-1} is a union of exactly [U_+ : U_+ meet U_{-1}]
   left cosets of the open subgroup U_{-1}, so it fills U iff that count
   equals the displacement [U : U_{-1}]. */
template <class Un>
Certified<bool> is_tidy_above(const Un& u, const typename Un::Endo& e,
                              const typename Un::Subgroup& U, const Horizon& h = {}) {
    auto um1 = u.preimage(e, U, U);
    auto up = u_plus(u, e, U, h);
    if (!up.cert.conclusive()) return {false, up.cert};
    auto lhs = u.index(U, um1);
    auto rhs = u.index(up.value, u.intersect(up.value, um1));
    if (lhs.infinite || rhs.infinite) throw std::logic_error("tidy-above indices must be finite");
    return {lhs.value == rhs.value, up.cert};
}

template <class Un>
struct TidyAboveResult {
    int steps = 0;                  // minimal N with U_{-N} tidy above
    typename Un::Subgroup V;        // U_{-N}
    Index displacement = 1;         // [V : V_{-1}]
    Certificate cert;
};

/* Walk down the minus chain until its term becomes tidy above.  The
   fixpoint U_+ is computed once; (U_{-n})_+ = U_+ meet U_{-n} supplies the
   per-term fixpoint for free.  The per-term displacement [U_{-n} : U_{-n-1}]
   never increases along the walk. */
template <class Un>
TidyAboveResult<Un> tidy_above_step(const Un& u, const typename Un::Endo& e,
                                    const typename Un::Subgroup& U, const Horizon& h = {}) {
    TidyAboveResult<Un> out;
    auto up = u_plus(u, e, U, h);
    if (!up.cert.conclusive()) {
        out.V = U;
        out.cert = up.cert;
        return out;
    }
    typename Un::Subgroup cur = U;
    Index prev_disp = 0;
    for (int n = 0; n <= h.fixpoint; ++n) {
        auto next = u.preimage(e, cur, cur);  // cur_{-1} = U_{-(n+1)}
        auto lhs = u.index(cur, next);
        auto vplus = u.intersect(up.value, cur);
        auto rhs = u.index(vplus, u.intersect(vplus, next));
        if (lhs.infinite || rhs.infinite) throw std::logic_error("tidy-above indices must be finite");
        if (n > 0 && lhs.value > prev_disp)
            throw std::logic_error("minus chain displacement increased");
        prev_disp = lhs.value;
        if (lhs.value == rhs.value) {
            out.steps = n;
            out.V = cur;
            out.displacement = lhs.value;
            out.cert = up.cert;
            return out;
        }
        cur = std::move(next);
    }
    out.V = cur;
    out.cert = Certificate::inconclusive("no tidy-above term within horizon");
    return out;
}

/* L_V: closure of the set of points of the form alpha^m(y) with y in V_+
   and alpha^n(y) eventually in V_-.  Computed from the stabilized image
   chain of V_+ (an alpha-invariant V_++) by growing the preimages of
   V_++ meet V_- inside it. */
template <class Un>
Certified<typename Un::Subgroup> script_l(const Un& u, const typename Un::Endo& e,
                                          const typename Un::Subgroup& V, const Horizon& h = {}) {
    auto up = u_plus(u, e, V, h);
    auto um = u_minus(u, e, V, h);
    Certificate acc = Certificate::combine(up.cert, um.cert);
    if (!acc.conclusive()) return {V, acc};

    auto istep = [&](int, const typename Un::Subgroup& cur) {
        auto im = u.image(e, cur, h);
        acc = Certificate::combine(acc, im.cert);
        return im.value;
    };
    auto vpp = u.limit_increasing(up.value, istep, h);
    acc = Certificate::combine(acc, vpp.cert);
    if (!acc.conclusive()) return {V, acc};
    {
        auto im = u.image(e, vpp.value, h);
        acc = Certificate::combine(acc, im.cert);
        if (acc.conclusive() && !u.equal(im.value, vpp.value))
            return {V, Certificate::inconclusive("image chain limit is not alpha-invariant")};
    }

    auto fstep = [&](int, const typename Un::Subgroup& cur) {
        return u.preimage(e, cur, vpp.value);
    };
    auto lim = u.limit_increasing(u.intersect(vpp.value, um.value), fstep, h);
    acc = Certificate::combine(acc, lim.cert);
    if (!acc.conclusive()) return {lim.value, acc};

    auto im = u.image(e, lim.value, h);
    acc = Certificate::combine(acc, im.cert);
    if (acc.conclusive() && !u.equal(im.value, lim.value))
        return {lim.value, Certificate::inconclusive("L_V failed alpha-stability check")};
    return {lim.value, acc};
}

/* K_V: closure of the forward orbits of the elements of V_+ that die under
   some power of alpha.  Always sits inside L_V; that containment is
   re-checked and an exactly certified violation is an engine bug. */
template <class Un>
Certified<typename Un::Subgroup> k_group(const Un& u, const typename Un::Endo& e,
                                         const typename Un::Subgroup& V, const Horizon& h = {}) {
    auto up = u_plus(u, e, V, h);
    Certificate acc = up.cert;
    if (!acc.conclusive()) return {V, acc};

    auto kstep = [&](int n, const typename Un::Subgroup&) {
        return u.preimage(u.endo_power(e, n + 1), u.trivial_subgroup(), up.value);
    };
    auto tlim = u.limit_increasing(u.trivial_subgroup(), kstep, h);
    acc = Certificate::combine(acc, tlim.cert);
    if (!acc.conclusive()) return {tlim.value, acc};

    auto ostep = [&](int, const typename Un::Subgroup& cur) {
        auto im = u.image(e, cur, h);
        acc = Certificate::combine(acc, im.cert);
        auto j = u.join(cur, im.value, h);
        acc = Certificate::combine(acc, j.cert);
        return j.value;
    };
    auto lim = u.limit_increasing(tlim.value, ostep, h);
    acc = Certificate::combine(acc, lim.cert);

    if (acc.conclusive()) {
        auto l = script_l(u, e, V, h);
        if (l.cert.conclusive() && !u.contains(l.value, lim.value)) {
            if (acc.exact_kind() && l.cert.exact_kind())
                throw std::logic_error("K_V escaped L_V");
            acc = Certificate::inconclusive("K_V not certified inside L_V");
        }
    }
    return {lim.value, acc};
}

template <class Un>
struct TidinessReport {
    bool ta = false;
    bool tb1 = false;
    bool tb2 = false;
    bool tidy = false;
    Index displacement = 1;
    std::vector<Index> tb2_sequence;  // [alpha^{n+1}(V_+) : alpha^n(V_+)], non-increasing
    Certificate ta_cert, tb1_cert, tb2_cert;
    std::optional<typename Un::Subgroup> tb1_witness;  // stage with alpha^n(V_+) meet V > V_+
    std::vector<std::string> witnesses;
    Certificate cert;  // meet of the three
};

/* Structural tidiness check: TA via the index test, TB1 via the stabilized
   V_++ meet V = V_+ criterion, TB2 via constancy of the image-step
   indices.  A strict counterexample at a finite stage makes the negative
   verdict exact even when the positive direction is only horizon-certified. */
template <class Un>
TidinessReport<Un> check_tidy(const Un& u, const typename Un::Endo& e,
                              const typename Un::Subgroup& V, const Horizon& h = {}) {
    TidinessReport<Un> rep;
    rep.displacement = displacement_index(u, e, V);

    auto up = u_plus(u, e, V, h);
    if (!up.cert.conclusive()) {
        rep.cert = rep.ta_cert = rep.tb1_cert = rep.tb2_cert = up.cert;
        return rep;
    }
    {
        auto um1 = u.preimage(e, V, V);
        auto rhs = u.index(up.value, u.intersect(up.value, um1));
        rep.ta = !rhs.infinite && rhs.value == rep.displacement;
        rep.ta_cert = up.cert;
    }

    /* one shared walk along the image chain A_n = alpha^n(V_+) */
    const int run = std::min(h.fixpoint, 24);
    typename Un::Subgroup a = up.value;
    Certificate walk = up.cert;
    bool tb1_false = false, tb2_false = false, stabilized = false;
    int steps = 0;
    for (int n = 0; n < run; ++n) {
        auto im = u.image(e, a, h);
        walk = Certificate::combine(walk, im.cert);
        if (!walk.conclusive()) break;
        auto idx = u.index(im.value, a);
        if (idx.infinite) throw std::logic_error("image chain index must be finite");
        if (!rep.tb2_sequence.empty() && idx.value > rep.tb2_sequence.back())
            throw std::logic_error("image step indices increased");
        rep.tb2_sequence.push_back(idx.value);
        if (idx.value != rep.tb2_sequence.front()) tb2_false = true;
        auto c = u.intersect(im.value, V);
        if (!tb1_false && !u.equal(c, up.value)) {
            tb1_false = true;
            rep.tb1_witness = c;
            rep.witnesses.push_back("alpha^" + std::to_string(n + 1) + "(V_+) meet V = " +
                                    u.describe(c) + " exceeds V_+ = " + u.describe(up.value));
        }
        ++steps;
        if (u.equal(im.value, a)) {
            stabilized = true;
            break;
        }
        a = std::move(im.value);
        if (tb1_false && tb2_false) break;  // both verdicts already exact
    }

    auto verdict = [&](bool is_false) -> std::pair<bool, Certificate> {
        if (is_false) return {false, Certificate::exact("counterexample stage within walk")};
        if (stabilized)
            /* a genuine image-chain fixpoint freezes every later term */
            return {true, Certificate::combine(
                              walk, Certificate::exact("image chain fixpoint at step " +
                                                       std::to_string(steps)))};
        if (!walk.conclusive() || steps < run)
            return {true, Certificate::inconclusive("image chain walk incomplete")};
        return {true, Certificate::combine(walk, Certificate::horizon(
                                                     "stable over " + std::to_string(steps) +
                                                     " image steps"))};
    };
    auto v1 = verdict(tb1_false);
    rep.tb1 = v1.first;
    rep.tb1_cert = v1.second;
    auto v2 = verdict(tb2_false);
    rep.tb2 = v2.first;
    rep.tb2_cert = v2.second;
    if (tb2_false) {
        std::ostringstream os;
        os << "image step indices:";
        for (const auto& i : rep.tb2_sequence) os << ' ' << i;
        rep.witnesses.push_back(os.str());
    }

    rep.cert = Certificate::combine(rep.ta_cert, Certificate::combine(rep.tb1_cert, rep.tb2_cert));
    rep.tidy = rep.ta && rep.tb1 && rep.tb2 && rep.cert.conclusive();
    return rep;
}

template <class Un>
struct Step3Result {
    typename Un::Subgroup v_tilde;
    typename Un::Subgroup w;
    Certificate cert;
};

/* Step 3: pass from a tidy-above V to W = V~ L, where V~ keeps exactly the
   elements of V that slide L through to the other side. */
template <class Un>
Step3Result<Un> tidy_step3(const Un& u, const typename Un::Endo& e, const typename Un::Subgroup& V,
                           const typename Un::Subgroup& L, const Horizon& h = {}) {
    (void)e;
    Step3Result<Un> out;
    out.v_tilde = u.tilde(V, L);
    auto w = u.product_with(out.v_tilde, L, h);
    out.w = w.value;
    out.cert = w.cert;
    if (out.cert.conclusive()) {
        if (!u.contains(out.w, L) || !u.contains(out.w, out.v_tilde))
            throw std::logic_error("step 3 product lost a factor");
    }
    return out;
}

template <class Un>
struct TidyTrace {
    TidyAboveResult<Un> step1;
    std::optional<Certified<typename Un::Subgroup>> step2_l;
    std::optional<Step3Result<Un>> step3;
    std::optional<TidinessReport<Un>> final_report;
    std::vector<Index> displacements;  // at U, at V, at W
    Certificate cert;
};

/* Full three-step tidying run from a seed U.  Displacements never increase
   along the trace; the last step keeps the displacement exactly when L_V
   was already inside V. */
template <class Un>
TidyTrace<Un> tidying_procedure(const Un& u, const typename Un::Endo& e,
                                const typename Un::Subgroup& U, const Horizon& h = {}) {
    TidyTrace<Un> t;
    t.displacements.push_back(displacement_index(u, e, U));
    t.step1 = tidy_above_step(u, e, U, h);
    t.cert = t.step1.cert;
    if (!t.cert.conclusive()) return t;
    t.displacements.push_back(t.step1.displacement);

    auto l = script_l(u, e, t.step1.V, h);
    t.step2_l = l;
    t.cert = Certificate::combine(t.cert, l.cert);
    if (!t.cert.conclusive()) return t;

    auto s3 = tidy_step3(u, e, t.step1.V, l.value, h);
    t.step3 = s3;
    t.cert = Certificate::combine(t.cert, s3.cert);
    if (!t.cert.conclusive()) return t;

    Index dw = displacement_index(u, e, s3.w);
    t.displacements.push_back(dw);
    if (dw > t.step1.displacement) throw std::logic_error("tidying increased the displacement");
    bool l_inside = u.contains(t.step1.V, l.value);
    if (l_inside != (dw == t.step1.displacement))
        throw std::logic_error("displacement drop disagrees with L_V containment");

    t.final_report = check_tidy(u, e, s3.w, h);
    t.cert = Certificate::combine(t.cert, t.final_report->cert);
    return t;
}

}  // namespace tdlc::core
