#include "doctest.h"

#include "oracle/dense_window.hpp"
#include "tdlc/certificate.hpp"
#include "tdlc/laurent/banded_endo.hpp"
#include "tdlc/laurent/catalog.hpp"
#include "tdlc/laurent/epc.hpp"
#include "tdlc/laurent/maps.hpp"

#include <random>
#include <vector>

using namespace tdlc;
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

/* every output coordinate reads g_0 */
BandedEndo constant_rows(int p) {
    return BandedEndo(p, 0, 0, {}, UpTail{1, {0}, {R(p, {{0, 1}})}}, std::nullopt);
}

}  // namespace

TEST_CASE("images of balls under coordinate shifts") {
    for (int p : {2, 3}) {
        BandedEndo sh = truncating_shift(p);
        auto i0 = ep_image(sh, EPC::open_ball(p, 0));
        CHECK(i0.value == EPC::open_ball(p, 0));
        CHECK(i0.cert.kind == Certificate::Kind::HorizonCertified);
        CHECK(i0.cert.evidence.find("stable") != std::string::npos);
        CHECK(ep_image(sh, EPC::open_ball(p, 3)).value == EPC::open_ball(p, 2));

        BandedEndo t2 = mult_by_t_power(p, 2);
        CHECK(ep_image(t2, EPC::open_ball(p, 0)).value == EPC::open_ball(p, 2));
        // the down tail feeds outputs below the band start
        CHECK(ep_image(t2, EPC::open_ball(p, -4)).value == EPC::open_ball(p, -2));

        CHECK(ep_preimage(sh, EPC::open_ball(p, 2), EPC::open_ball(p, 0)) ==
              EPC::from_constraints(p, 0, {R(p, {{1, 1}}), R(p, {{2, 1}})}, {}));
        CHECK(ep_preimage(t2, EPC::open_ball(p, 0), EPC::open_ball(p, -5)) ==
              EPC::open_ball(p, -2));
    }
}

TEST_CASE("increasing chain of the pair-collapsing endomorphism") {
    for (int p : {2, 3}) {
        BandedEndo a = even_pair_collapse(p);
        EPC u = sample_u(p);

        auto au = ep_image(a, u);
        CHECK(au.value == evens(p));
        CHECK(ep_image(a, EPC::open_ball(p, 0)).value == evens(p));

        /* U_{n+1} = U meet a(U_n) stabilizes at the third step */
        EPC u1 = ep_intersect(u, au.value);
        CHECK(u1.base() == 0);
        CHECK(u1.exceptional() ==
              std::vector<Row>{R(p, {{1, 1}}), R(p, {{2, 1}}), R(p, {{3, 1}}), R(p, {{5, 1}}),
                               R(p, {{6, 1}, {8, p - 1}})});
        CHECK(u1.anchor() == 7);
        CHECK(u1.period() == 2);
        CHECK(u1.templates() == std::vector<Row>{R(p, {{7, 1}})});

        auto au1 = ep_image(a, u1);
        CHECK(au1.value == EPC::from_constraints(p, 2, {R(p, {{3, 1}}), R(p, {{4, 1}, {6, p - 1}})},
                                                 {PeriodicRows{2, {R(p, {{5, 1}})}}}));

        EPC u2 = ep_intersect(u, au1.value);
        CHECK(u2.base() == 4);
        CHECK(u2.exceptional() == std::vector<Row>{R(p, {{4, 1}, {6, p - 1}}), R(p, {{5, 1}}),
                                                   R(p, {{6, 1}, {8, p - 1}})});
        CHECK(u2.anchor() == 7);
        CHECK(u2.templates() == std::vector<Row>{R(p, {{7, 1}})});

        EPC u3 = ep_intersect(u, ep_image(a, u2).value);
        CHECK(u3.base() == 10);
        CHECK(u3.exceptional().empty());
        CHECK(u3.anchor() == 10);
        CHECK(u3.period() == 2);
        CHECK(u3.templates() == std::vector<Row>{R(p, {{11, 1}})});

        EPC u4 = ep_intersect(u, ep_image(a, u3).value);
        CHECK(u4 == u3);

        /* displacement of U is p^2; after the chain settles it is p */
        CHECK(ep_index(au.value, u1) == IndexOrInfinite::of(index_pow(p, 2)));
        EPC au3 = ep_image(a, u3).value;
        CHECK(ep_index(au3, ep_intersect(au3, u3)) == IndexOrInfinite::of(p));
    }
}

TEST_CASE("decreasing chain through exact preimages") {
    for (int p : {2, 3}) {
        BandedEndo a = even_pair_collapse(p);
        EPC u = sample_u(p);

        EPC um1 = ep_preimage(a, u, u);
        CHECK(um1.open());
        CHECK(um1.exceptional() ==
              std::vector<Row>{R(p, {{2, 1}}), R(p, {{3, 1}, {4, 1}}), R(p, {{6, 1}, {8, p - 1}}),
                               R(p, {{7, 1}, {8, 1}, {9, p - 1}, {10, p - 1}})});

        EPC um2 = ep_preimage(a, um1, u);
        CHECK(um2.open());
        CHECK(um2.exceptional() ==
              std::vector<Row>{R(p, {{2, 1}}), R(p, {{3, 1}, {4, 1}}), R(p, {{5, 1}, {6, 1}}),
                               R(p, {{6, 1}, {8, p - 1}}),
                               R(p, {{7, 1}, {8, 1}, {9, p - 1}, {10, p - 1}}),
                               R(p, {{9, 1}, {10, 1}, {11, p - 1}, {12, p - 1}})});

        EPC um3 = ep_preimage(a, um2, u);
        CHECK(um3.open());
        CHECK(um3.exceptional() ==
              std::vector<Row>{R(p, {{2, 1}}), R(p, {{3, 1}, {4, 1}}), R(p, {{5, 1}, {6, 1}}),
                               R(p, {{6, 1}, {7, 1}}), R(p, {{7, 1}, {8, 1}}),
                               R(p, {{9, 1}, {10, 1}}), R(p, {{11, 1}, {12, 1}}),
                               R(p, {{13, 1}, {14, 1}})});

        EPC um4 = ep_preimage(a, um3, u);
        CHECK(um4.open());
        CHECK(um4.exceptional().size() == 9);

        EPC umin = sample_u_minus(p);
        CHECK(ep_contains(u, um1));
        CHECK(ep_contains(um1, um2));
        CHECK(ep_contains(um2, um3));
        CHECK(ep_contains(um3, um4));
        CHECK(ep_contains(um4, umin));
        CHECK(!ep_contains(umin, um4));
    }
}

TEST_CASE("images of the decreasing limit collapse to a line then to nothing") {
    for (int p : {2, 3}) {
        BandedEndo a = even_pair_collapse(p);
        EPC umin = sample_u_minus(p);

        auto line = ep_image(a, umin);
        CHECK(line.value ==
              EPC::from_constraints(p, 0, {}, {PeriodicRows{1, {R(p, {{1, 1}})}}}));
        CHECK(line.cert.conclusive());

        auto dead = ep_image(a, line.value);
        CHECK(dead.value.is_trivial());
    }
}

TEST_CASE("kernels through preimages of the trivial subgroup") {
    for (int p : {2, 3}) {
        BandedEndo a = even_pair_collapse(p);
        EPC ker = ep_preimage(a, EPC::trivial(p), EPC::open_ball(p, 0));
        CHECK(ker == EPC::from_constraints(p, 0, {},
                                           {PeriodicRows{2, {R(p, {{1, 1}, {2, 1}})}}}));

        EPC keru = ep_preimage(a, EPC::trivial(p), sample_u(p));
        CHECK(keru.base() == 0);
        CHECK(keru.exceptional() ==
              std::vector<Row>{R(p, {{1, 1}}), R(p, {{2, 1}}), R(p, {{3, 1}, {4, 1}}),
                               R(p, {{5, 1}, {6, 1}}), R(p, {{6, 1}, {7, 1}})});
        CHECK(keru.anchor() == 7);
        CHECK(keru.period() == 2);
        CHECK(keru.templates() == std::vector<Row>{R(p, {{7, 1}, {8, 1}})});
    }
}

TEST_CASE("zero-drift rows produce constant-tail constraints") {
    for (int p : {2, 3}) {
        BandedEndo c = constant_rows(p);
        auto img = ep_image(c, EPC::open_ball(p, 0));
        CHECK(img.value == EPC::from_constraints(
                               p, 0, {}, {PeriodicRows{1, {R(p, {{0, 1}, {1, p - 1}})}}}));
        CHECK(ep_image(c, EPC::open_ball(p, 1)).value.is_trivial());

        CHECK(ep_preimage(c, EPC::trivial(p), EPC::open_ball(p, 0)) == EPC::open_ball(p, 1));
        CHECK(ep_preimage(c, img.value, EPC::open_ball(p, 0)) == EPC::open_ball(p, 0));
    }
}

TEST_CASE("round trips between image and preimage") {
    for (int p : {2, 3}) {
        std::vector<BandedEndo> endos{even_pair_collapse(p), truncating_shift(p),
                                      mult_by_t_power(p, 2)};
        std::vector<EPC> subs{EPC::open_ball(p, 0), sample_u(p), sample_u_minus(p), evens(p)};
        for (auto& e : endos)
            for (auto& s : subs) {
                EPC ball = EPC::open_ball(p, s.base());
                auto im = ep_image(e, s);
                REQUIRE(im.cert.conclusive());
                CHECK(ep_contains(ep_preimage(e, im.value, ball), s));
                auto back = ep_image(e, ep_preimage(e, s, ball));
                REQUIRE(back.cert.conclusive());
                CHECK(ep_contains(s, back.value));
            }
    }
}

TEST_CASE("windowed agreement with the dense image") {
    for (int p : {2, 3}) {
        std::vector<BandedEndo> endos{even_pair_collapse(p), truncating_shift(p),
                                      mult_by_t_power(p, 2), constant_rows(p)};
        std::vector<EPC> subs{EPC::open_ball(p, 0), sample_u(p), sample_u_minus(p), evens(p),
                              EPC::trivial(p)};
        for (auto& e : endos)
            for (auto& s : subs) {
                auto im = ep_image(e, s);
                REQUIRE(im.cert.conclusive());
                CHECK(oracle::project(im.value, -4, 32) == oracle::image_project(e, s, -4, 32));
            }
    }
}

TEST_CASE("membership transport on sampled elements") {
    std::mt19937 rng(20240811);
    for (int p : {2, 3}) {
        std::vector<BandedEndo> endos{even_pair_collapse(p), truncating_shift(p),
                                      mult_by_t_power(p, 2)};
        std::vector<EPC> targets{sample_u(p), evens(p), sample_u_minus(p)};
        EPC ambient = EPC::open_ball(p, 0);
        for (auto& e : endos)
            for (auto& s : targets) {
                EPC pre = ep_preimage(e, s, ambient);
                auto basis = oracle::kernel_basis(oracle::window_constraints(ambient, 0, 24), p, 24);
                for (int trial = 0; trial < 30; ++trial) {
                    std::vector<std::pair<int, int>> terms;
                    std::vector<int> acc(24, 0);
                    for (auto& b : basis) {
                        int c = (int)(rng() % (unsigned)p);
                        for (size_t j = 0; j < b.size(); ++j) acc[j] = (acc[j] + c * b[j]) % p;
                    }
                    for (int j = 0; j < 24; ++j)
                        if (acc[j]) terms.emplace_back(j, acc[j]);
                    SeqVector x(p, std::move(terms));
                    CHECK(ep_member(x, pre) == ep_member(e.apply(x), s));
                }
            }
    }
}

TEST_CASE("subgroup transport screens its arguments") {
    CHECK_THROWS_AS(ep_image(even_pair_collapse(2), sample_u(3)), InputError);
    CHECK_THROWS_AS(ep_preimage(even_pair_collapse(2), sample_u(3), sample_u(2)), InputError);
    // mixed up-tail shifts have no shift-equivariant constraint transport
    CHECK_THROWS_AS(ep_image(interleaving_fold(), EPC::open_ball(2, 0)), CapabilityError);
    CHECK_THROWS_AS(ep_preimage(interleaving_fold(), EPC::open_ball(2, 0), EPC::open_ball(2, 0)),
                    CapabilityError);
}
