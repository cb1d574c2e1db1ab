#pragma once

#include "tdlc/certificate.hpp"

#include <string>
#include <vector>

namespace tdlc::core {

/* The two canonical chains attached to a compact open subgroup U:
     plus:  U_0 = U,      U_{k+1} = U  meet  alpha(U_k)
     minus: U_0 = U,      U_{-(k+1)} = U  meet  alpha^{-1}(U_{-k})
   terms[k] holds U_{+-k}.  Step indices record
     minus: [U_{-k} : U_{-k-1}]
     plus:  [U_k : U_k meet U_{-1}]
   which are the two sides of the index-transfer identity and stabilize at
   the common value reached once U_{-N} is tidy above. */
template <class Un>
struct ChainRecord {
    bool minus = false;
    std::vector<typename Un::Subgroup> terms;
    std::vector<Index> step_indices;
    Certificate cert;
};

template <class Un>
ChainRecord<Un> minus_chain(const Un& u, const typename Un::Endo& e,
                            const typename Un::Subgroup& U, int n) {
    ChainRecord<Un> r;
    r.minus = true;
    r.cert = Certificate::exact();
    r.terms.push_back(U);
    for (int k = 0; k < n; ++k) {
        auto next = u.preimage(e, r.terms.back(), r.terms.back());
        auto idx = u.index(r.terms.back(), next);
        if (idx.infinite) throw std::logic_error("minus chain produced an infinite step index");
        r.step_indices.push_back(idx.value);
        r.terms.push_back(std::move(next));
    }
    return r;
}

/* Note U meet alpha^{-1}(U_{-k}) = U_{-(k+1)}: applying alpha^{-1} to an
   intersection of preimages shifts every exponent up by one, and the fresh
   meet with U restores exponent zero. */

template <class Un>
ChainRecord<Un> plus_chain(const Un& u, const typename Un::Endo& e,
                           const typename Un::Subgroup& U, int n, const Horizon& h = {}) {
    ChainRecord<Un> r;
    r.minus = false;
    r.cert = Certificate::exact();
    auto um1 = u.preimage(e, U, U);
    r.terms.push_back(U);
    for (int k = 0; k < n; ++k) {
        auto im = u.image(e, r.terms.back(), h);
        r.cert = Certificate::combine(r.cert, im.cert);
        if (!r.cert.conclusive()) break;
        auto next = u.intersect(U, im.value);
        auto idx = u.index(r.terms.back(), u.intersect(r.terms.back(), um1));
        if (idx.infinite) throw std::logic_error("plus chain produced an infinite step index");
        r.step_indices.push_back(idx.value);
        r.terms.push_back(std::move(next));
    }
    return r;
}

/* [U : U meet alpha^{-1}(U)], the index displaced by one application of the
   endomorphism; equal to [alpha(U) : alpha(U) meet U] without ever forming
   an image. */
template <class Un>
Index displacement_index(const Un& u, const typename Un::Endo& e, const typename Un::Subgroup& U) {
    auto idx = u.index(U, u.preimage(e, U, U));
    if (idx.infinite) throw std::logic_error("displacement index must be finite for open U");
    return idx.value;
}

/* Greatest fixpoint of X -> U meet alpha(X): the elements of U admitting a
   backward orbit inside U.  Conclusive results are re-checked against the
   defining equation. */
template <class Un>
Certified<typename Un::Subgroup> u_plus(const Un& u, const typename Un::Endo& e,
                                        const typename Un::Subgroup& U, const Horizon& h = {}) {
    Certificate acc = Certificate::exact();
    auto step = [&](int, const typename Un::Subgroup& cur) {
        auto im = u.image(e, cur, h);
        acc = Certificate::combine(acc, im.cert);
        return u.intersect(U, im.value);
    };
    auto lim = u.limit_decreasing(U, step, h);
    lim.cert = Certificate::combine(lim.cert, acc);
    if (lim.cert.conclusive()) {
        auto im = u.image(e, lim.value, h);
        lim.cert = Certificate::combine(lim.cert, im.cert);
        if (lim.cert.conclusive()) {
            if (!u.equal(u.intersect(U, im.value), lim.value))
                return {lim.value, Certificate::inconclusive("fixpoint check failed for U_+")};
            if (!u.contains(im.value, lim.value))
                throw std::logic_error("u_plus: alpha(U_+) does not contain U_+");
        }
    }
    return lim;
}

/* Greatest fixpoint of X -> U meet alpha^{-1}(X): elements whose entire
   forward orbit stays in U. */
template <class Un>
Certified<typename Un::Subgroup> u_minus(const Un& u, const typename Un::Endo& e,
                                         const typename Un::Subgroup& U, const Horizon& h = {}) {
    auto step = [&](int, const typename Un::Subgroup& cur) { return u.preimage(e, cur, U); };
    auto lim = u.limit_decreasing(U, step, h);
    if (lim.cert.conclusive()) {
        if (!u.equal(u.preimage(e, lim.value, U), lim.value))
            return {lim.value, Certificate::inconclusive("fixpoint check failed for U_-")};
        auto im = u.image(e, lim.value, h);
        if (im.cert.conclusive() && !u.contains(lim.value, im.value))
            throw std::logic_error("u_minus: alpha(U_-) not contained in U_-");
    }
    return lim;
}

}  // namespace tdlc::core
