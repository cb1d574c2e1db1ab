#include "tdlc/laurent/laurent_universe.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace tdlc::laurent {

namespace {

/* widest coordinate the normal form of s mentions, plus one period of tail */
int chain_extent(const EPC& s) {
    int e = std::max(s.base(), s.anchor() + 2 * s.period());
    for (auto& r : s.exceptional()) e = std::max(e, r.max_coord() + 1);
    return e;
}

/* Steps may depend on the step index, and index-dependent chains can pause
   for a few steps before growing again (kernel towers inside a deep ball do).
   A term only counts as settled when the next several indices reproduce it. */
bool settled(const LaurentUniverse::ChainStep& step, const EPC& v, int n, int run) {
    for (int j = 1; j <= run; ++j)
        if (!(step(n + j, v) == v)) return false;
    return true;
}

/* anti-echelon (eliminate at the maximal coordinate) of a row set, truncated
   to ends below wend; spans exactly the sub-window of the input span */
std::vector<Row> anti_window(int p, const std::vector<Row>& rows, int wend) {
    std::map<int, Row> anti;
    for (Row r : rows) {
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
        if (m < wend) out.push_back(r);
    return out;
}

}  // namespace

LaurentUniverse::LaurentUniverse(int p, std::optional<EPC> ambient)
    : p_(p), ambient_(std::move(ambient)) {
    if (ambient_ && ambient_->p() != p_)
        throw InputError("declared ambient built over a different prime");
}

LaurentUniverse::Subgroup LaurentUniverse::whole_subgroup() const {
    throw CapabilityError(
        "the whole Laurent group is not expressible as a constraint system value");
}

Certified<LaurentUniverse::Subgroup> LaurentUniverse::limit_decreasing(const Subgroup& first,
                                                                      const ChainStep& step,
                                                                      const Horizon& h) const {
    EPC cur = first;
    const int lo = first.base();
    const int w1 = chain_extent(first) + 56;
    const int w2 = w1 + 16;
    int rising = 0, rise_delta = 0;
    std::optional<EPC> prev_cand;
    for (int n = 0; n < h.fixpoint; ++n) {
        EPC nxt = step(n, cur);
        if (nxt == cur) {
            if (settled(step, cur, n, 5))
                return {cur, Certificate::horizon("one normal form repeated from step " +
                                                  std::to_string(n) + " through step " +
                                                  std::to_string(n + 5))};
            continue;  // an index-dependent pause; keep walking
        }
        if (!ep_contains(cur, nxt)) throw std::logic_error("decreasing chain gained elements");
        int delta = nxt.base() - cur.base();
        rising = delta >= 1 && (rising == 0 || delta == rise_delta) ? rising + 1 : 0;
        rise_delta = delta;
        if (rising >= 4) {
            /* supports retreat in even strides; if they never stop the meet is trivial */
            EPC t = EPC::trivial(p_);
            if (settled(step, t, n, 3))
                return {t, Certificate::horizon(
                               "term supports retreated by " + std::to_string(rise_delta) +
                               " on 4 consecutive steps and the trivial subgroup "
                               "reproduces itself under the step")};
        }
        if (n >= 2) {
            /* once no new constraint lands below w2, fold that window into a
               periodic tail and test the fold as the limit */
            std::vector<Row> win = constraint_window(nxt, lo, w2);
            bool saturated = true;
            for (auto& r : win)
                if (!row_space_member(r, cur)) {
                    saturated = false;
                    break;
                }
            if (saturated) {
                auto c2 = fold_complete_window(p_, lo, win, w2);
                auto c1 = fold_complete_window(p_, lo, constraint_window(nxt, lo, w1), w1);
                if (c1 && c2 && *c1 == *c2 && ep_contains(nxt, *c2)) {
                    if (prev_cand && *prev_cand == *c2 && step(n + 1, *c2) == *c2)
                        return {*c2,
                                Certificate::horizon(
                                    "constraint window [" + std::to_string(lo) + ", " +
                                    std::to_string(w2) +
                                    ") saturated on consecutive steps; its periodic fold "
                                    "reproduces itself under the step")};
                    prev_cand = std::move(c2);
                } else {
                    prev_cand.reset();
                }
            }
        }
        cur = std::move(nxt);
    }
    return {cur, Certificate::inconclusive("chain did not stabilize within the step horizon")};
}

Certified<LaurentUniverse::Subgroup> LaurentUniverse::limit_increasing(const Subgroup& first,
                                                                      const ChainStep& step,
                                                                      const Horizon& h) const {
    EPC cur = first;
    int lo = first.base();
    const int w1 = chain_extent(first) + 56;
    const int w2 = w1 + 16;
    int falling = 0;
    int march_run = 0, march_delta = 0;
    std::optional<std::vector<Row>> persist;
    std::optional<EPC> prev_cand;
    for (int n = 0; n < h.fixpoint; ++n) {
        EPC nxt = step(n, cur);
        if (nxt == cur) {
            if (settled(step, cur, n, 5))
                return {cur, Certificate::horizon("one normal form repeated from step " +
                                                  std::to_string(n) + " through step " +
                                                  std::to_string(n + 5))};
            continue;
        }
        if (!ep_contains(nxt, cur)) throw std::logic_error("increasing chain lost elements");
        falling = nxt.base() < cur.base() ? falling + 1 : 0;
        if (falling >= std::max(8, h.fixpoint / 2))
            return {nxt, Certificate::inconclusive(
                             "term supports keep growing downward; the chain reaches below "
                             "every ball this representation can express")};
        if (nxt.base() < lo) {
            /* the window floor moved; restart the running meet below it */
            lo = nxt.base();
            persist.reset();
            prev_cand.reset();
        }
        /* marching tail: same base and exceptional block while the periodic
           families migrate upward by a constant offset.  The migrating
           constraints then vanish from the limit. */
        int delta = nxt.anchor() - cur.anchor();
        bool marching = delta >= 1 && nxt.base() == cur.base() &&
                        nxt.exceptional() == cur.exceptional() &&
                        nxt.period() == cur.period() &&
                        nxt.templates().size() == cur.templates().size();
        if (marching)
            for (size_t i = 0; i < nxt.templates().size(); ++i)
                if (!(nxt.templates()[i] == cur.templates()[i].shifted(delta))) {
                    marching = false;
                    break;
                }
        march_run = marching && (march_run == 0 || delta == march_delta) ? march_run + 1 : 0;
        march_delta = delta;
        if (march_run >= 3) {
            EPC cand = EPC::from_constraints(p_, nxt.base(), nxt.exceptional(), {});
            EPC t1 = step(n + 1, nxt);
            EPC t2 = step(n + 2, t1);
            if (ep_contains(cand, t1) && ep_contains(cand, t2))
                return {cand, Certificate::horizon(
                                  "periodic constraint families migrated upward by " +
                                  std::to_string(march_delta) +
                                  " over 3 consecutive steps; later terms stay inside the "
                                  "extrapolated bound")};
        }
        /* running meet of constraint windows: what survives every term is the
           constraint window of the union's closure */
        std::vector<Row> win = constraint_window(nxt, lo, w2);
        persist = persist ? span_meet(p_, lo, w2, *persist, win) : std::move(win);
        if (n >= 2) {
            auto c2 = fold_complete_window(p_, lo, *persist, w2);
            auto c1 = fold_complete_window(p_, lo, anti_window(p_, *persist, w1), w1);
            if (c1 && c2 && *c1 == *c2 && ep_contains(*c2, nxt)) {
                if (prev_cand && *prev_cand == *c2) {
                    EPC t1 = step(n + 1, nxt);
                    EPC t2 = step(n + 2, t1);
                    if (ep_contains(*c2, t1) && ep_contains(*c2, t2)) {
                        std::string ev = "persistent constraint window [" + std::to_string(lo) +
                                         ", " + std::to_string(w2) +
                                         ") stable on consecutive steps and under two more "
                                         "steps of growth";
                        if (step(n + 1, *c2) == *c2)
                            ev += "; the fold reproduces itself under the step";
                        return {*c2, Certificate::horizon(ev)};
                    }
                }
                prev_cand = std::move(c2);
            } else {
                prev_cand.reset();
            }
        }
        cur = std::move(nxt);
    }
    return {cur, Certificate::inconclusive("chain did not stabilize within the step horizon")};
}

}  // namespace tdlc::laurent
