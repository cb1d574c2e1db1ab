#include "tdlc/laurent/maps.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace tdlc::laurent {

namespace {

int cdiv_pos(int a, int b) {  // ceil(a / b), b >= 1
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

/* the constraint restricted to the ball: coordinates below base read zero */
Row chop(const Row& r, int p, int base) {
    std::vector<std::pair<int, int>> keep;
    for (auto& [c, v] : r.terms())
        if (c >= base) keep.emplace_back(c, v);
    return Row(p, std::move(keep));
}

/* leading down-tail blocks whose rows still meet [floor, infinity) */
int down_blocks_reaching(const BandedEndo& e, int floor) {
    if (!e.down()) return 0;
    const DownTail& dn = *e.down();
    int top = floor - 1;
    for (auto& t : dn.templates)
        if (!t.zero()) top = std::max(top, t.max_coord());
    if (top < floor) return 0;
    return (top - floor) / dn.shift + 1;
}

}  // namespace

EPC ep_preimage(const BandedEndo& e, const EPC& s, const EPC& ambient) {
    if (e.p() != s.p() || e.p() != ambient.p()) throw InputError("mixed coefficient primes");
    if (!e.uniform_up()) throw CapabilityError("subgroup transport needs a uniform up tail");
    const int p = e.p();
    const int d = e.drift();
    const int qe = e.up().period;

    std::vector<Row> finite;
    std::vector<PeriodicRows> fams;

    for (auto& r : ambient.exceptional()) finite.push_back(r);
    if (!ambient.open()) fams.push_back({ambient.period(), ambient.templates()});

    /* e(x) vanishes below s.base: one constraint per output coordinate whose
       row meets the ambient ball */
    for (int n = e.m_minus(); n < s.base(); ++n) finite.push_back(e.row(n));
    if (e.down()) {
        int blocks = down_blocks_reaching(e, ambient.base());
        for (int m = 0; m < blocks * e.down()->period; ++m) {
            int n = e.m_minus() - 1 - m;
            if (n < s.base()) finite.push_back(e.row(n));
        }
    }

    /* pullbacks of the constraints of s */
    for (auto& r : s.exceptional()) finite.push_back(pullback_row(e, r));
    if (!s.open()) {
        const int q = s.period();
        for (auto& tau : s.templates()) {
            if (tau.zero()) continue;
            /* once every read of a shifted copy lands in the pure up zone the
               pullbacks repeat with shift D after every B copies */
            int k0 = std::max(0, cdiv_pos(e.m_plus() - tau.min_coord(), q));
            for (int k = 0; k < k0; ++k) finite.push_back(pullback_row(e, tau.shifted(k * q)));
            long long Q = std::lcm((long long)q, (long long)qe);
            int B = (int)(Q / q);
            int D = (int)(Q / qe) * d;
            if (D == 0) {
                for (int k = k0; k < k0 + B; ++k)
                    finite.push_back(pullback_row(e, tau.shifted(k * q)));
            } else {
                PeriodicRows fam{D, {}};
                for (int j = 0; j < B; ++j)
                    fam.templates.push_back(pullback_row(e, tau.shifted((k0 + j) * q)));
                fams.push_back(std::move(fam));
            }
        }
    }

    return EPC::from_constraints(p, ambient.base(), std::move(finite), std::move(fams));
}

Certified<EPC> ep_image(const BandedEndo& e, const EPC& s, const Horizon& h) {
    if (e.p() != s.p()) throw InputError("mixed coefficient primes");
    if (!e.uniform_up()) throw CapabilityError("subgroup transport needs a uniform up tail");
    const int p = e.p();

    /* floor of the output support over the ball carrying s */
    int ylo = e.m_minus();
    if (e.down()) ylo -= down_blocks_reaching(e, s.base()) * e.down()->period;

    int espan = 1;
    auto see = [&](const Row& r) {
        if (!r.zero()) espan = std::max(espan, r.max_coord() - r.min_coord() + 1);
    };
    for (auto& r : e.exceptional()) see(r);
    for (auto& t : e.up().templates) see(t);
    if (e.down())
        for (auto& t : e.down()->templates) see(t);

    /* Pure-y constraint rows of the relation system {y = e(g), g in s},
       complete for supports inside [ylo, w).  The g coordinates are laid out
       above every y coordinate, so eliminating at maximum support clears g
       first and the surviving rows under w are exactly the image constraints
       of the window. */
    auto image_window = [&](int w) -> std::vector<Row> {
        int ghi = s.base() + 1;
        std::vector<std::pair<int, Row>> rel;
        rel.reserve((size_t)(w - ylo));
        for (int n = ylo; n < w; ++n) {
            Row rn = chop(e.row(n), p, s.base());
            if (!rn.zero()) ghi = std::max(ghi, rn.max_coord() + 1);
            rel.emplace_back(n, std::move(rn));
        }
        const int goff = w + 8 - s.base();
        std::vector<Row> mat;
        mat.reserve(rel.size() * 2);
        for (auto& [n, rn] : rel) {
            std::vector<std::pair<int, int>> t{{n, 1}};
            for (auto& [c, v] : rn.terms()) t.emplace_back(goff + c, p - v);
            mat.emplace_back(p, std::move(t));
        }
        for (auto& r : s.rows_in(s.base(), ghi + s.max_span() + 2)) {
            std::vector<std::pair<int, int>> t;
            for (auto& [c, v] : r.terms()) t.emplace_back(goff + c, v);
            mat.emplace_back(p, std::move(t));
        }
        std::map<int, Row> anti;
        for (Row r : mat) {
            while (!r.zero()) {
                int m = r.max_coord();
                auto it = anti.find(m);
                if (it == anti.end()) {
                    anti.emplace(m, r.scaled(mod_inverse(r.coeff(m), p)));
                    break;
                }
                r = r.plus_scaled(it->second, p - r.coeff(m));
            }
        }
        std::vector<Row> out;
        for (auto& [m, r] : anti)
            if (m < w) out.push_back(r);
        return out;
    };

    const int wcap = std::max(2048, 4 * h.state_bound);
    int w = std::max({s.anchor() + 2 * s.period(), e.m_plus(), ylo}) + 2 * s.max_span() +
            2 * espan + 96;
    std::optional<EPC> prev;
    int prev_w = 0;
    for (int tries = 0; tries < 6 && w <= wcap; ++tries, w += std::max(128, w / 2)) {
        auto cand = fold_complete_window(p, ylo, image_window(w), w);
        if (cand && prev && *prev == *cand) {
            /* the fold is sound iff s lies inside the exact preimage of the
               candidate; a broken extrapolation cuts elements of e(s) away
               and fails this check */
            bool sound = false;
            try {
                sound = ep_contains(ep_preimage(e, *cand, EPC::open_ball(p, s.base())), s);
            } catch (const CapabilityError&) {
            }
            if (sound) {
                std::ostringstream ev;
                ev << "image constraints stable on windows [" << ylo << ", " << prev_w
                   << ") and [" << ylo << ", " << w << "); pullback containment checked";
                return {*cand, Certificate::horizon(ev.str())};
            }
        }
        if (cand) {
            prev = std::move(cand);
            prev_w = w;
        }
    }
    return {EPC::open_ball(p, ylo),
            Certificate::inconclusive("image constraints did not stabilize within the window cap")};
}

}  // namespace tdlc::laurent
