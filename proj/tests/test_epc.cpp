#include "doctest.h"

#include "oracle/dense_window.hpp"
#include "tdlc/certificate.hpp"
#include "tdlc/laurent/epc.hpp"

#include <vector>

using namespace tdlc;
using namespace tdlc::laurent;

namespace {

Row R(int p, std::vector<std::pair<int, int>> t) { return Row(p, std::move(t)); }

/* g_{k} + g_{k+1} = 0 for k = start, start+2, start+4, ... */
PeriodicRows adjacent_pairs(int p, int start) {
    return PeriodicRows{2, {R(p, {{start, 1}, {start + 1, 1}})}};
}

/* the open subgroup {g : g_2 = 0, g_6 = g_8} of the power series ball */
EPC sample_u(int p) {
    return EPC::from_constraints(p, 0, {R(p, {{2, 1}}), R(p, {{6, 1}, {8, p - 1}})}, {});
}

/* {g : g_2 = 0, g_6 = g_8, g_{2j+1} + g_{2j+2} = 0 for all j >= 1} */
EPC sample_u_minus(int p) {
    return EPC::from_constraints(p, 0, {R(p, {{2, 1}}), R(p, {{6, 1}, {8, p - 1}})},
                                 {adjacent_pairs(p, 3)});
}

/* every odd coordinate zero */
EPC evens(int p) { return EPC::from_constraints(p, 0, {}, {PeriodicRows{2, {R(p, {{1, 1}})}}}); }

}  // namespace

TEST_CASE("open balls and base absorption") {
    for (int p : {2, 3}) {
        EPC b0 = EPC::open_ball(p, 0);
        CHECK(b0.open());
        CHECK(b0.base() == 0);
        CHECK(b0.exceptional().empty());
        CHECK(b0.templates().empty());
        CHECK(!b0.is_trivial());

        // leading singleton constraints fold into the base
        EPC b2 = EPC::from_constraints(p, 0, {R(p, {{0, 1}}), R(p, {{1, 1}})}, {});
        CHECK(b2 == EPC::open_ball(p, 2));

        EPC neg = EPC::open_ball(p, -3);
        CHECK(neg.base() == -3);
        CHECK(ep_member(R(p, {{-3, 1}}), neg));
        CHECK(!ep_member(R(p, {{-4, 1}}), neg));
    }
}

TEST_CASE("trivial subgroup normal forms") {
    for (int p : {2, 3}) {
        EPC t = EPC::trivial(p);
        CHECK(t.is_trivial());
        // every presentation of the all-zero subgroup lands on the same form
        CHECK(EPC::from_constraints(p, 5, {}, {PeriodicRows{1, {R(p, {{5, 1}})}}}) == t);
        CHECK(EPC::from_constraints(p, 0,
                                    {R(p, {{0, 1}, {1, 1}}), R(p, {{1, 1}})},
                                    {PeriodicRows{1, {R(p, {{2, 1}})}}}) == t);
        CHECK(EPC::from_constraints(p, -2, {}, {PeriodicRows{1, {R(p, {{-2, 1}})}}}) == t);
        CHECK(ep_member(Row(p, {}), t));
        CHECK(!ep_member(R(p, {{0, 1}}), t));
    }
}

TEST_CASE("canonical form is independent of the presentation") {
    for (int p : {2, 3}) {
        EPC a = sample_u_minus(p);
        // same subgroup with redundant and shuffled generators
        std::vector<Row> rows = {
            R(p, {{6, 1}, {8, p - 1}}),
            R(p, {{2, 1}}),
            R(p, {{3, 1}, {4, 1}}),
            R(p, {{5, 1}, {6, 1}}),
            // a combination: (g_3+g_4) + (g_6 - g_8)
            R(p, {{3, 1}, {4, 1}, {6, 1}, {8, p - 1}}),
        };
        EPC b = EPC::from_constraints(p, 0, rows, {adjacent_pairs(p, 7), adjacent_pairs(p, 5)});
        CHECK(a == b);
        CHECK(oracle::same_projection(a, b, 0, 32));

        // frozen canonical form: four exceptional rows, then a two-step tail
        CHECK(a.base() == 0);
        CHECK(a.anchor() == 7);
        CHECK(a.period() == 2);
        REQUIRE(a.templates().size() == 1);
        CHECK(a.templates()[0] == R(p, {{7, 1}, {8, 1}}));
        REQUIRE(a.exceptional().size() == 4);
        CHECK(a.exceptional()[0] == R(p, {{2, 1}}));
        CHECK(a.exceptional()[1] == R(p, {{3, 1}, {4, 1}}));
        CHECK(a.exceptional()[2] == R(p, {{5, 1}, {6, 1}}));
        // minimal-support-end representative at pivot 6 shortens g_6 - g_8
        CHECK(a.exceptional()[3] == R(p, {{6, 1}, {7, 1}}));
    }
}

TEST_CASE("canonical forms of the printed chain subgroups") {
    for (int p : {2, 3}) {
        EPC u = sample_u(p);
        CHECK(u.open());
        REQUIRE(u.exceptional().size() == 2);
        CHECK(u.exceptional()[0] == R(p, {{2, 1}}));
        CHECK(u.exceptional()[1] == R(p, {{6, 1}, {8, p - 1}}));

        EPC um1 = EPC::from_constraints(
            p, 0,
            {R(p, {{2, 1}}), R(p, {{3, 1}, {4, 1}}), R(p, {{6, 1}, {8, p - 1}}),
             R(p, {{7, 1}, {8, 1}, {9, p - 1}, {10, p - 1}})},
            {});
        CHECK(um1.open());
        REQUIRE(um1.exceptional().size() == 4);
        CHECK(um1.exceptional()[2] == R(p, {{6, 1}, {8, p - 1}}));
        CHECK(um1.exceptional()[3] == R(p, {{7, 1}, {8, 1}, {9, p - 1}, {10, p - 1}}));

        EPC um3 = EPC::from_constraints(
            p, 0,
            {R(p, {{2, 1}}), R(p, {{3, 1}, {4, 1}}), R(p, {{5, 1}, {6, 1}}),
             R(p, {{7, 1}, {8, 1}}), R(p, {{9, 1}, {10, 1}}), R(p, {{11, 1}, {12, 1}}),
             R(p, {{13, 1}, {14, 1}}), R(p, {{6, 1}, {8, p - 1}})},
            {});
        CHECK(um3.open());
        REQUIRE(um3.exceptional().size() == 8);
        CHECK(um3.exceptional()[3] == R(p, {{6, 1}, {7, 1}}));
        CHECK(um3.exceptional()[4] == R(p, {{7, 1}, {8, 1}}));

        // {g : g_n = 0 when n is odd or below 9}: base swallows the head
        EPC uplus = EPC::from_constraints(
            p, 0,
            {R(p, {{0, 1}}), R(p, {{1, 1}}), R(p, {{2, 1}}), R(p, {{3, 1}}), R(p, {{4, 1}}),
             R(p, {{5, 1}}), R(p, {{6, 1}}), R(p, {{7, 1}}), R(p, {{8, 1}})},
            {PeriodicRows{2, {R(p, {{9, 1}})}}});
        CHECK(uplus.base() == 10);
        CHECK(uplus.exceptional().empty());
        CHECK(uplus.anchor() == 10);
        CHECK(uplus.period() == 2);
        REQUIRE(uplus.templates().size() == 1);
        CHECK(uplus.templates()[0] == R(p, {{11, 1}}));

        EPC umin = sample_u_minus(p);
        CHECK(ep_contains(u, umin));
        CHECK(ep_contains(u, um1));
        CHECK(ep_contains(um1, um3));
        CHECK(ep_contains(um3, umin));
        CHECK(!ep_contains(umin, um3));
        CHECK(ep_contains(umin, EPC::trivial(p)));
    }
}

TEST_CASE("membership agrees with the dense oracle") {
    for (int p : {2, 3}) {
        EPC um = sample_u_minus(p);
        std::vector<SeqVector> samples = {
            Row(p, {}),
            R(p, {{3, 1}, {4, p - 1}}),
            R(p, {{0, 1}}),
            R(p, {{2, 1}}),
            R(p, {{3, 1}, {4, 1}}),
            R(p, {{5, 1}, {6, p - 1}, {7, 1}, {8, p - 1}}),
            R(p, {{6, 1}, {8, 1}}),
            R(p, {{7, 1}, {8, p - 1}}),
            R(p, {{9, 1}, {10, p - 1}, {11, 1}, {12, p - 1}}),
            R(p, {{6, 1}, {7, 1}}),
        };
        for (const auto& x : samples) {
            bool got = ep_member(x, um);
            // dense equivalence on a window clear of the support
            int hi = (x.zero() ? 1 : x.max_coord() + 1) + 24;
            oracle::DenseMat basis = oracle::project(um, 0, hi);
            std::vector<int> dense(hi, 0);
            for (auto& [c, v] : x.terms()) dense[c] = v;
            basis.push_back(dense);
            bool in_span = oracle::rref(basis, p).size() == oracle::project(um, 0, hi).size();
            CHECK(got == in_span);
        }
        // g_3 = -g_4 with opposite signs demanded by the pair constraint
        CHECK(ep_member(R(p, {{3, 1}, {4, p - 1}}), um));
        CHECK(ep_member(R(p, {{3, 1}, {4, 1}}), um) == (p == 2));
    }
}

TEST_CASE("row space membership certifies constraint consequences") {
    int p = 2;
    EPC um = sample_u_minus(p);
    CHECK(row_space_member(R(p, {{2, 1}}), um));
    CHECK(row_space_member(R(p, {{9, 1}, {10, 1}}), um));
    CHECK(row_space_member(R(p, {{41, 1}, {42, 1}}), um));
    CHECK(row_space_member(R(p, {{6, 1}, {8, 1}}), um));
    CHECK(row_space_member(R(p, {{5, 1}, {6, 1}, {7, 1}, {8, 1}}), um));
    CHECK(!row_space_member(R(p, {{0, 1}}), um));
    CHECK(!row_space_member(R(p, {{8, 1}, {9, 1}}), um));
    CHECK(!row_space_member(R(p, {{10, 1}, {11, 1}}), um));

    // five-step chase: consequences shift forever without repeating support
    EPC chase = EPC::from_constraints(p, 0, {}, {PeriodicRows{1, {R(p, {{0, 1}, {5, 1}})}}});
    CHECK(chase.anchor() == 0);
    CHECK(chase.period() == 1);
    CHECK(row_space_member(R(p, {{7, 1}, {12, 1}}), chase));
    CHECK(row_space_member(R(p, {{0, 1}, {10, 1}}), chase));
    CHECK(!row_space_member(R(p, {{0, 1}, {7, 1}}), chase));
    CHECK(!row_space_member(R(p, {{0, 1}}), chase));
}

TEST_CASE("intersection") {
    for (int p : {2, 3}) {
        EPC ev = evens(p);
        EPC pairs = EPC::from_constraints(p, 0, {}, {adjacent_pairs(p, 0)});
        // evens meet the pair system only at zero
        CHECK(ep_intersect(ev, pairs).is_trivial());

        // evens inside the chain subgroup leave just the constant coordinate
        EPC um = sample_u_minus(p);
        EPC meet = ep_intersect(ev, um);
        CHECK(meet.base() == 0);
        CHECK(meet.exceptional().empty());
        CHECK(meet.anchor() == 1);
        CHECK(meet.period() == 1);
        REQUIRE(meet.templates().size() == 1);
        CHECK(meet.templates()[0] == R(p, {{1, 1}}));
        CHECK(ep_member(R(p, {{0, 1}}), meet));
        CHECK(ep_contains(ev, meet));
        CHECK(ep_contains(um, meet));

        EPC u = sample_u(p);
        CHECK(ep_intersect(u, EPC::open_ball(p, 0)) == u);
        CHECK(ep_intersect(EPC::trivial(p), u).is_trivial());
    }
}

TEST_CASE("index computation") {
    for (int p : {2, 3}) {
        EPC b0 = EPC::open_ball(p, 0);
        EPC b5 = EPC::open_ball(p, 5);
        auto i5 = ep_index(b0, b5);
        CHECK(!i5.infinite);
        CHECK(i5.value == index_pow(p, 5));
        CHECK(prime_exponent(i5.value, p) == 5);

        EPC u = sample_u(p);
        CHECK(ep_index(b0, u).value == index_pow(p, 2));
        // multiplicative along the chain
        EPC b2 = EPC::open_ball(p, 2);
        CHECK(ep_index(b0, b2).value * ep_index(b2, b5).value == ep_index(b0, b5).value);

        // dropping one free coordinate from the evens costs p
        EPC ev = evens(p);
        EPC ev1 = ep_intersect(ev, EPC::from_constraints(p, 0, {R(p, {{0, 1}})}, {}));
        CHECK(ep_index(ev, ev1).value == p);
        CHECK(oracle::project_logdim_diff(ev, ev1, 0, 32) == 1);

        CHECK(ep_index(b0, EPC::trivial(p)).infinite);
        CHECK(ep_index(u, sample_u_minus(p)).infinite);
        CHECK(!ep_index(u, u).infinite);
        CHECK(ep_index(u, u).value == 1);
        CHECK_THROWS_AS(ep_index(u, b0), InputError);
    }
}

TEST_CASE("join") {
    for (int p : {2, 3}) {
        EPC b0 = EPC::open_ball(p, 0);
        EPC u = sample_u(p);
        // containment shortcut gives exact certificates
        auto j1 = ep_join(u, EPC::trivial(p), Horizon{});
        CHECK(j1.cert.exact_kind());
        CHECK(j1.value == u);
        auto j2 = ep_join(u, b0, Horizon{});
        CHECK(j2.cert.exact_kind());
        CHECK(j2.value == b0);

        // evens + pair system span the whole ball
        EPC ev = evens(p);
        EPC pairs = EPC::from_constraints(p, 0, {}, {adjacent_pairs(p, 0)});
        auto j3 = ep_join(ev, pairs, Horizon{});
        CHECK(j3.cert.conclusive());
        CHECK(j3.value == b0);

        // evens + deep ball leave two odd constraints
        EPC b4 = EPC::open_ball(p, 4);
        auto j4 = ep_join(ev, b4, Horizon{});
        CHECK(j4.cert.conclusive());
        CHECK(j4.value == EPC::from_constraints(p, 0, {R(p, {{1, 1}}), R(p, {{3, 1}})}, {}));
        CHECK(ep_contains(j4.value, ev));
        CHECK(ep_contains(j4.value, b4));

        // dense cross-check: projection of the join is the sum of projections
        oracle::DenseMat sum = oracle::project(ev, 0, 32);
        for (auto& r : oracle::project(b4, 0, 32)) sum.push_back(r);
        CHECK(oracle::rref(sum, p) == oracle::rref(oracle::project(j4.value, 0, 32), p));
    }
}

TEST_CASE("oracle equivalence on a 32 coordinate window") {
    for (int p : {2, 3}) {
        std::vector<EPC> xs = {EPC::open_ball(p, 0), sample_u(p), sample_u_minus(p), evens(p),
                               EPC::trivial(p)};
        for (const auto& a : xs) {
            CHECK(oracle::same_projection(a, a, 0, 32));
            for (const auto& b : xs) {
                bool cont = ep_contains(a, b);
                // containment implies dense window containment
                if (cont) {
                    oracle::DenseMat stack = oracle::project(a, 0, 32);
                    size_t ra = oracle::rref(stack, p).size();
                    for (auto& r : oracle::project(b, 0, 32)) stack.push_back(r);
                    CHECK(oracle::rref(stack, p).size() == ra);
                }
            }
        }
    }
}

TEST_CASE("long period constraint systems still normalize") {
    int p = 2;
    EPC s = EPC::from_constraints(p, 0, {},
                                  {PeriodicRows{7, {R(p, {{0, 1}, {3, 1}})}},
                                   PeriodicRows{5, {R(p, {{1, 1}, {2, 1}})}}});
    CHECK(s.period() >= 1);
    CHECK(s.period() <= 35);
    EPC t = EPC::from_constraints(p, 0, {},
                                  {PeriodicRows{5, {R(p, {{1, 1}, {2, 1}})}},
                                   PeriodicRows{7, {R(p, {{0, 1}, {3, 1}})}}});
    CHECK(s == t);
    CHECK(oracle::same_projection(s, t, 0, 32));
}
