#pragma once

#include "tdlc/certificate.hpp"
#include "tdlc/laurent/banded_endo.hpp"
#include "tdlc/laurent/epc.hpp"
#include "tdlc/laurent/maps.hpp"

#include <functional>
#include <optional>
#include <string>

namespace tdlc::laurent {

/* Engine adapter for closed subgroups of F_p((t)).
 *
 * Subgroup values are eventually periodic constraint systems, so strictly
 * monotone chains never exhaust; the limit operations certify instead:
 *
 *   - a chain that repeats one normal form over several consecutive steps is
 *     reported as settled (HorizonCertified: the witness is the repeated
 *     normal form, robust against short pauses of step-indexed chains);
 *   - a chain whose constraint window stops changing is extrapolated by
 *     folding that window into a periodic tail; the candidate must agree at
 *     two widths, on two consecutive steps, and absorb further steps;
 *   - decreasing chains whose supports retreat without rest converge to the
 *     trivial subgroup; increasing chains whose supports grow below every
 *     ball have no value in this representation and come back Inconclusive.
 *
 * The group is abelian, so conjugation-stable parts are the subgroups
 * themselves and internal products are sums.  The full Laurent group is not
 * expressible as a constraint system; operations that would need it throw
 * CapabilityError, and the dynamics report instead works inside an optional
 * declared compact ambient (an open ball or any compact open subgroup).
 */
class LaurentUniverse {
  public:
    using Subgroup = EPC;
    using Endo = BandedEndo;
    using Element = SeqVector;
    using ChainStep = std::function<Subgroup(int, const Subgroup&)>;

    static constexpr bool kExactLimits = false;
    static constexpr bool kHasEnumeration = false;

    explicit LaurentUniverse(int p, std::optional<EPC> ambient = std::nullopt);

    int p() const { return p_; }
    const std::optional<EPC>& declared_ambient() const { return ambient_; }

    bool member(const Element& x, const Subgroup& s) const { return ep_member(x, s); }
    bool equal(const Subgroup& a, const Subgroup& b) const { return a == b; }
    bool contains(const Subgroup& a, const Subgroup& b) const { return ep_contains(a, b); }
    bool is_trivial(const Subgroup& s) const { return s.is_trivial(); }
    Subgroup trivial_subgroup() const { return EPC::trivial(p_); }
    [[noreturn]] Subgroup whole_subgroup() const;
    std::string describe(const Subgroup& s) const { return s.str(); }

    Subgroup intersect(const Subgroup& a, const Subgroup& b) const { return ep_intersect(a, b); }
    Subgroup preimage(const Endo& e, const Subgroup& target, const Subgroup& ambient) const {
        return ep_preimage(e, target, ambient);
    }
    Certified<Subgroup> image(const Endo& e, const Subgroup& s, const Horizon& h) const {
        return ep_image(e, s, h);
    }
    IndexOrInfinite index(const Subgroup& a, const Subgroup& b) const { return ep_index(a, b); }
    Certified<Subgroup> join(const Subgroup& a, const Subgroup& b, const Horizon& h) const {
        return ep_join(a, b, h);
    }
    Subgroup tilde(const Subgroup& v, const Subgroup&) const { return v; }
    Certified<Subgroup> product_with(const Subgroup& a, const Subgroup& b,
                                     const Horizon& h) const {
        return ep_join(a, b, h);
    }

    Endo compose_endos(const Endo& a, const Endo& b) const {
        return tdlc::laurent::compose_endos(a, b);
    }
    Endo endo_power(const Endo& e, int n) const { return tdlc::laurent::endo_power(e, n); }
    Element apply(const Endo& e, const Element& x) const { return e.apply(x); }

    Certified<Subgroup> limit_decreasing(const Subgroup& first, const ChainStep& step,
                                         const Horizon& h) const;
    Certified<Subgroup> limit_increasing(const Subgroup& first, const ChainStep& step,
                                         const Horizon& h) const;

  private:
    int p_;
    std::optional<EPC> ambient_;
};

}  // namespace tdlc::laurent
