#include "doctest.h"

#include "tdlc/certificate.hpp"
#include "tdlc/core/chains.hpp"
#include "tdlc/core/dynamics.hpp"
#include "tdlc/core/scale.hpp"
#include "tdlc/core/tidiness.hpp"
#include "tdlc/laurent/catalog.hpp"
#include "tdlc/laurent/laurent_universe.hpp"

#include <string>
#include <vector>

using namespace tdlc;
using namespace tdlc::core;
using namespace tdlc::laurent;

namespace {

Row R(int p, std::vector<std::pair<int, int>> t) { return Row(p, std::move(t)); }

/* the open subgroup {g : g_2 = 0, g_6 = g_8} of the power series ball */
EPC sample_u(int p) {
    return EPC::from_constraints(p, 0, {R(p, {{2, 1}}), R(p, {{6, 1}, {8, p - 1}})}, {});
}

/* {g : g_2 = 0, g_6 = g_8, g_{2j+1} + g_{2j+2} = 0 for all j >= 1} */
EPC sample_u_minus(int p) {
    return EPC::from_constraints(p, 0, {R(p, {{2, 1}}), R(p, {{6, 1}, {8, p - 1}})},
                                 {PeriodicRows{2, {R(p, {{3, 1}, {4, 1}})}}});
}

/* every odd coordinate zero */
EPC evens(int p) { return EPC::from_constraints(p, 0, {}, {PeriodicRows{2, {R(p, {{1, 1}})}}}); }

/* supports in {b, b+2, b+4, ...} */
EPC evens_from(int p, int b) {
    return EPC::from_constraints(p, b, {}, {PeriodicRows{2, {R(p, {{b + 1, 1}})}}});
}

/* the seed of the shift example: {g in F_2[[t]] : g_0 = 0, g_2 = 0} */
EPC shift_seed() { return EPC::from_constraints(2, 0, {R(2, {{0, 1}}), R(2, {{2, 1}})}, {}); }

}  // namespace

TEST_CASE("chains of the pair collapse reach their frozen terms") {
    for (int p : {2, 3}) {
        LaurentUniverse u(p);
        BandedEndo a = even_pair_collapse(p);
        EPC U = sample_u(p);

        CHECK(displacement_index(u, a, U) == index_pow(p, 2));

        auto mc = minus_chain(u, a, U, 4);
        REQUIRE(mc.step_indices.size() == 4);
        CHECK(mc.step_indices[0] == index_pow(p, 2));
        CHECK(mc.step_indices[1] == index_pow(p, 2));
        CHECK(mc.step_indices[2] == index_pow(p, 2));
        CHECK(mc.step_indices[3] == Index(p));

        auto pc = plus_chain(u, a, U, 4);
        REQUIRE(pc.terms.size() == 5);
        CHECK(pc.terms[3] == evens_from(p, 10));
        CHECK(pc.terms[4] == pc.terms[3]);  // the plus chain has stabilized
        CHECK(pc.step_indices[0] == index_pow(p, 2));
    }
}

TEST_CASE("fixpoint limits of the pair collapse") {
    for (int p : {2, 3}) {
        LaurentUniverse u(p);
        BandedEndo a = even_pair_collapse(p);
        EPC U = sample_u(p);

        auto up = u_plus(u, a, U);
        CHECK(up.cert.kind == Certificate::Kind::HorizonCertified);
        CHECK(up.value == evens_from(p, 10));

        /* the decreasing preimage chain never reaches its limit at a finite
           stage; the window of surviving constraints certifies it instead */
        auto um = u_minus(u, a, U);
        CHECK(um.cert.kind == Certificate::Kind::HorizonCertified);
        CHECK(um.value == sample_u_minus(p));
        CHECK(um.value.anchor() == 7);
        CHECK(um.value.period() == 2);
    }
}

TEST_CASE("walking down the minus chain to a tidy-above term") {
    for (int p : {2, 3}) {
        LaurentUniverse u(p);
        BandedEndo a = even_pair_collapse(p);
        EPC U = sample_u(p);

        auto ta = tidy_above_step(u, a, U);
        CHECK(ta.cert.conclusive());
        CHECK(ta.steps == 3);
        CHECK(ta.displacement == Index(p));
        CHECK(ta.V == minus_chain(u, a, U, 3).terms.back());

        auto direct = is_tidy_above(u, a, ta.V);
        CHECK(direct.cert.conclusive());
        CHECK(direct.value);
        CHECK_FALSE(is_tidy_above(u, a, U).value);
    }
}

TEST_CASE("tidying the pair collapse seed lands on scale one") {
    for (int p : {2, 3}) {
        LaurentUniverse u(p);
        BandedEndo a = even_pair_collapse(p);
        EPC U = sample_u(p);

        auto sc = scale(u, a, U);
        CHECK(sc.method == "tidying");
        CHECK(sc.cert.conclusive());
        CHECK(sc.scale == Index(1));
        REQUIRE(sc.trace.has_value());
        REQUIRE(sc.trace->displacements.size() == 3);
        CHECK(sc.trace->displacements[0] == index_pow(p, 2));
        CHECK(sc.trace->displacements[1] == Index(p));
        CHECK(sc.trace->displacements[2] == Index(1));

        REQUIRE(sc.trace->step2_l.has_value());
        CHECK(sc.trace->step2_l->value == evens(p));
        REQUIRE(sc.trace->step3.has_value());
        CHECK(sc.trace->step3->w == EPC::from_constraints(p, 0, {R(p, {{5, 1}, {7, p - 1}})}, {}));
        REQUIRE(sc.trace->final_report.has_value());
        CHECK(sc.trace->final_report->tidy);

        auto rep = check_tidy(u, a, sc.trace->step3->w);
        CHECK(rep.tidy);
        CHECK(rep.displacement == Index(1));
        CHECK_FALSE(check_tidy(u, a, U).tidy);
    }
}

TEST_CASE("shift of the series ball: chains and the failing tidiness axiom") {
    LaurentUniverse u(2);
    BandedEndo sh = truncating_shift(2);
    EPC V = shift_seed();

    CHECK(displacement_index(u, sh, V) == Index(4));

    auto vp = u_plus(u, sh, V);
    CHECK(vp.cert.conclusive());
    CHECK(vp.value == EPC::open_ball(2, 3));

    auto im = u.image(sh, vp.value, {});
    REQUIRE(im.cert.conclusive());
    auto growth = u.index(im.value, vp.value);
    REQUIRE_FALSE(growth.infinite);
    CHECK(growth.value == Index(2));

    auto vm = u_minus(u, sh, V);
    CHECK(vm.cert.kind == Certificate::Kind::HorizonCertified);
    CHECK(vm.value.is_trivial());

    auto rep = check_tidy(u, sh, V);
    CHECK_FALSE(rep.ta);
    CHECK_FALSE(rep.tidy);
    CHECK(rep.displacement == Index(4));
    REQUIRE(rep.tb2_sequence.size() == 4);
    CHECK(rep.tb2_sequence[0] == Index(2));
    CHECK(rep.tb2_sequence[1] == Index(2));
    CHECK(rep.tb2_sequence[2] == Index(2));
    CHECK(rep.tb2_sequence[3] == Index(1));
    CHECK_FALSE(rep.tb2);
}

TEST_CASE("tidying the shift seed ends on the full ball") {
    LaurentUniverse u(2);
    BandedEndo sh = truncating_shift(2);
    EPC V = shift_seed();

    auto ta = tidy_above_step(u, sh, V);
    CHECK(ta.steps == 1);
    CHECK(ta.V == EPC::open_ball(2, 4));
    CHECK(ta.displacement == Index(2));

    auto sc = scale(u, sh, V);
    CHECK(sc.method == "tidying");
    CHECK(sc.scale == Index(1));
    REQUIRE(sc.trace.has_value());
    REQUIRE(sc.trace->displacements.size() == 3);
    CHECK(sc.trace->displacements[0] == Index(4));
    CHECK(sc.trace->displacements[1] == Index(2));
    CHECK(sc.trace->displacements[2] == Index(1));
    REQUIRE(sc.trace->step2_l.has_value());
    CHECK(sc.trace->step2_l->value == EPC::open_ball(2, 0));
    REQUIRE(sc.trace->step3.has_value());
    CHECK(sc.trace->step3->w == EPC::open_ball(2, 0));

    auto k = k_group(u, sh, V);
    CHECK(k.cert.conclusive());
    CHECK(k.value == EPC::open_ball(2, 0));
}

TEST_CASE("index growth certifies the scale of coordinate rescaling") {
    for (int p : {2, 3}) {
        LaurentUniverse u(p);
        BandedEndo tinv = mult_by_t_power(p, -1);
        EPC ball = EPC::open_ball(p, 0);

        auto ms = moller_scale(u, tinv, ball);
        CHECK(ms.cert.kind == Certificate::Kind::HorizonCertified);
        CHECK(ms.scale == Index(p));
        REQUIRE(ms.index_log.size() == 9);
        for (int n = 0; n <= 8; ++n) {
            CHECK(ms.index_log[n].first == n);
            CHECK(ms.index_log[n].second == index_pow(p, n));
        }

        /* the image chain of the ball falls without bound, so the tidying
           route cannot certify and the growth estimate takes over */
        auto sc = scale(u, tinv, ball);
        CHECK(sc.method == "index-growth");
        CHECK(sc.cert.conclusive());
        CHECK(sc.scale == Index(p));

        auto mc = moller_scale(u, even_pair_collapse(p), sample_u(p));
        CHECK(mc.cert.conclusive());
        CHECK(mc.scale == Index(1));
        for (int n = 1; n <= 8; ++n) CHECK(mc.index_log[n].second == index_pow(p, 2));
    }

    LaurentUniverse u2(2);
    auto m6 = moller_scale(u2, truncating_shift(2), shift_seed());
    CHECK(m6.cert.conclusive());
    CHECK(m6.scale == Index(1));
}

TEST_CASE("the scale of a power is the power of the scale") {
    for (int p : {2, 3}) {
        LaurentUniverse u(p);
        BandedEndo tinv = mult_by_t_power(p, -1);
        for (int n = 1; n <= 4; ++n) {
            auto sc = scale(u, u.endo_power(tinv, n), EPC::open_ball(p, 0));
            CHECK(sc.cert.conclusive());
            CHECK(sc.scale == index_pow(p, n));
        }
    }

    LaurentUniverse u2(2);
    BandedEndo t2inv = mult_by_t_power(2, -2);
    for (int n = 1; n <= 3; ++n) {
        auto sc = scale(u2, u2.endo_power(t2inv, n), EPC::open_ball(2, 0));
        CHECK(sc.cert.conclusive());
        CHECK(sc.scale == index_pow(2, 2 * n));
    }

    BandedEndo a = even_pair_collapse(2);
    for (int n = 1; n <= 3; ++n) {
        auto sc = scale(u2, u2.endo_power(a, n), sample_u(2));
        CHECK(sc.cert.conclusive());
        CHECK(sc.scale == Index(1));
    }
}

TEST_CASE("step-indexed kernel towers ride over bounded pauses") {
    LaurentUniverse u(2);
    BandedEndo sh = truncating_shift(2);
    EPC amb = EPC::open_ball(2, 4);

    /* ker(sh^{n+1}) meet t^4 F[[t]] stays trivial for four steps and only
       then starts climbing; a plain first-repeat exit would freeze it */
    auto kstep = [&](int n, const EPC&) {
        return u.preimage(u.endo_power(sh, n + 1), u.trivial_subgroup(), amb);
    };
    auto lim = u.limit_increasing(u.trivial_subgroup(), kstep, {});
    CHECK(lim.cert.kind == Certificate::Kind::HorizonCertified);
    CHECK(lim.value == amb);
}

TEST_CASE("dynamics report over a declared ambient ball") {
    LaurentUniverse amb(2, EPC::open_ball(2, 0));

    auto rep = dynamics_subgroups(amb, even_pair_collapse(2));
    CHECK(rep.par.cert.kind == Certificate::Kind::Inconclusive);
    CHECK(rep.par.cert.evidence == "forward boundedness is not decidable here");
    CHECK(rep.lev.cert.evidence == "needs par");
    CHECK(rep.nub.cert.evidence == "needs subgroup enumeration");
    CHECK(rep.par_minus.cert.kind == Certificate::Kind::HorizonCertified);
    CHECK(rep.par_minus.value == evens(2));
    CHECK(rep.bik.cert.kind == Certificate::Kind::HorizonCertified);
    CHECK(rep.bik.value == evens(2));

    auto shr = dynamics_subgroups(amb, truncating_shift(2));
    CHECK(shr.par_minus.value == EPC::open_ball(2, 0));
    CHECK(shr.bik.value == EPC::open_ball(2, 0));

    LaurentUniverse bare(2);
    auto none = dynamics_subgroups(bare, even_pair_collapse(2));
    CHECK(none.par_minus.cert.kind == Certificate::Kind::Inconclusive);
    CHECK(none.par_minus.cert.evidence == "no declared compact ambient");
    CHECK(none.bik.cert.evidence == "no declared compact ambient");
}

TEST_CASE("representation limits surface as typed errors") {
    LaurentUniverse u(2);
    CHECK_THROWS_AS(u.whole_subgroup(), CapabilityError);
    CHECK_THROWS_AS(LaurentUniverse(3, EPC::open_ball(2, 0)), InputError);
    /* mixed up/down drift admits pointwise evaluation but no subgroup
       transport, so chain machinery must refuse rather than guess */
    CHECK_THROWS_AS(u_plus(u, interleaving_fold(), EPC::open_ball(2, 0)), CapabilityError);
}
