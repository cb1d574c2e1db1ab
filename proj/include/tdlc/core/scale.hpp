#pragma once

#include "tdlc/core/tidiness.hpp"

#include <optional>
#include <utility>

namespace tdlc::core {

template <class Un>
struct ScaleResult {
    Index scale = 1;
    Certificate cert;
    std::vector<std::pair<int, Index>> index_log;  // (n, index) pairs backing the answer
    std::string method;                            // "tidying" or "index-growth"
    std::optional<TidyTrace<Un>> trace;            // witness subgroup when tidying succeeded
};

/* Index-growth estimate: a_n = [V : V meet alpha^{-n}(V)], computed from
   preimages only.  The per-step growth factor a_{n+1}/a_n is eventually
   constant, and that constant is the scale.  Constancy of the ratio over
   the whole trailing half of the log is the certification rule; ratios are
   compared by cross-multiplication so no division happens until the final
   extraction, which must be exact. */
template <class Un>
ScaleResult<Un> moller_scale(const Un& u, const typename Un::Endo& e,
                             const typename Un::Subgroup& V, const Horizon& h = {}) {
    if (h.moller_n < 3) throw InputError("index-growth scale needs a horizon of at least 3");
    ScaleResult<Un> r;
    r.method = "index-growth";
    r.index_log.emplace_back(0, Index(1));
    std::vector<Index> a{Index(1)};
    for (int n = 1; n <= h.moller_n; ++n) {
        auto pre = u.preimage(u.endo_power(e, n), V, V);
        auto idx = u.index(V, pre);
        if (idx.infinite) throw std::logic_error("index-growth step index must be finite");
        a.push_back(idx.value);
        r.index_log.emplace_back(n, idx.value);
    }
    const int last = static_cast<int>(a.size()) - 1;
    /* trailing window: at least 3 ratios, at least half the log */
    const int window = std::max(3, last / 2);
    bool constant = last >= window;
    for (int i = last - window; constant && i < last - 1; ++i)
        if (a[i + 1] * a[i + 1] != a[i] * a[i + 2]) constant = false;
    if (!constant) {
        r.cert = Certificate::inconclusive("per-step growth did not stabilize within horizon");
        return r;
    }
    if (a[last] % a[last - 1] != 0) {
        r.cert = Certificate::inconclusive("stabilized growth factor is not an integer");
        return r;
    }
    r.scale = a[last] / a[last - 1];
    r.cert = Certificate::horizon("growth factor constant over final " + std::to_string(window) +
                                  " steps of " + std::to_string(last));
    return r;
}

/* The scale at a seed subgroup: run the tidying procedure; when it lands on
   a certified tidy W, the scale is the displacement of W.  Otherwise fall
   back to the index-growth estimate.  The scale never exceeds the
   displacement of the seed. */
template <class Un>
ScaleResult<Un> scale(const Un& u, const typename Un::Endo& e, const typename Un::Subgroup& U,
                      const Horizon& h = {}) {
    Index seed_disp = displacement_index(u, e, U);

    auto t = tidying_procedure(u, e, U, h);
    if (t.cert.conclusive() && t.final_report && !t.final_report->tidy)
        throw std::logic_error("tidying procedure landed on a certified non-tidy subgroup");

    ScaleResult<Un> r;
    if (t.cert.conclusive() && t.final_report && t.final_report->tidy) {
        r.scale = t.displacements.back();
        r.cert = t.cert;
        r.method = "tidying";
        for (std::size_t i = 0; i < t.displacements.size(); ++i)
            r.index_log.emplace_back(static_cast<int>(i), t.displacements[i]);
        r.trace = std::move(t);
    } else {
        r = moller_scale(u, e, U, h);
        if (r.cert.conclusive()) r.trace = std::move(t);  // partial trace, for diagnostics
    }
    if (r.cert.conclusive()) {
        if (r.scale > seed_disp) throw std::logic_error("scale exceeds seed displacement");
        if (seed_disp % r.scale != 0)
            throw std::logic_error("seed displacement is not a multiple of the scale");
    }
    return r;
}

}  // namespace tdlc::core
