#pragma once

#include "tdlc/certificate.hpp"
#include "tdlc/finite/finite_group.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace tdlc::finite {

struct Restriction;

/* Engine-facing wrapper around one finite group.  All operations are exact;
   chain limits terminate because subgroup chains in a finite group do. */
class FiniteUniverse {
  public:
    using Subgroup = finite::Subgroup;
    using Endo = FiniteEndo;
    using Element = Elt;

    static constexpr bool kExactLimits = true;
    static constexpr bool kHasEnumeration = true;

    explicit FiniteUniverse(FiniteGroup g) : g_(std::make_shared<FiniteGroup>(std::move(g))) {}
    explicit FiniteUniverse(std::shared_ptr<const FiniteGroup> g) : g_(std::move(g)) {}

    const FiniteGroup& group() const { return *g_; }
    std::shared_ptr<const FiniteGroup> group_ptr() const { return g_; }

    bool member(Element x, const Subgroup& s) const { return finite::member(s, x); }
    bool equal(const Subgroup& a, const Subgroup& b) const { return a == b; }
    bool contains(const Subgroup& a, const Subgroup& b) const { return subset(b, a); }
    Subgroup intersect(const Subgroup& a, const Subgroup& b) const { return finite::intersect(a, b); }

    Subgroup preimage(const Endo& e, const Subgroup& target, const Subgroup& ambient) const {
        return endo_preimage(e, target, ambient);
    }
    Certified<Subgroup> image(const Endo& e, const Subgroup& s, const Horizon& = {}) const {
        return {endo_image(*g_, e, s), Certificate::exact()};
    }
    IndexOrInfinite index(const Subgroup& a, const Subgroup& b) const;
    Certified<Subgroup> join(const Subgroup& a, const Subgroup& b, const Horizon& = {}) const;

    /* {x in V : x L included in L V}; the subset of V that passes L through. */
    Subgroup tilde(const Subgroup& v, const Subgroup& l) const;
    Subgroup product(const Subgroup& a, const Subgroup& b) const { return product_set(*g_, a, b); }

    /* Product of two subgroups when one normalizes the passage, so the
       product set is itself a subgroup; throws if it is not. */
    Certified<Subgroup> product_with(const Subgroup& a, const Subgroup& b, const Horizon& = {}) const;

    Endo compose_endos(const Endo& a, const Endo& b) const { return finite::compose(*g_, a, b); }
    Endo endo_power(const Endo& e, int n) const { return endo_pow(*g_, e, n); }
    Element apply(const Endo& e, Element x) const { return e.apply(x); }

    Subgroup trivial_subgroup() const { return trivial(*g_); }
    Subgroup whole_subgroup() const { return whole(*g_); }
    bool is_trivial(const Subgroup& s) const { return s.size() == 1; }
    bool is_whole(const Subgroup& s) const { return static_cast<int>(s.size()) == g_->order(); }
    std::string describe(const Subgroup& s) const;

    using ChainStep = std::function<Subgroup(int, const Subgroup&)>;
    Certified<Subgroup> limit_decreasing(const Subgroup& first, const ChainStep& step,
                                         const Horizon& h) const;
    Certified<Subgroup> limit_increasing(const Subgroup& first, const ChainStep& step,
                                         const Horizon& h) const;

    /* --- finite-only capabilities --- */

    std::vector<Subgroup> all_subgroups(int order_bound = 64) const;

    /* Every endomorphism, found by assigning images to a minimal generating
       set; deterministic order.  Beyond `cap` candidate assignments a seeded
       uniform sample of the assignment space is used instead. */
    std::vector<Endo> enumerate_endos(std::size_t cap = 100000, std::uint64_t seed = 0) const;

    std::vector<Elt> generating_set() const;

    bool is_normal(const Subgroup& n) const;
    struct Quotient {
        FiniteGroup group;
        std::vector<Elt> projection;  // element index -> coset index
    };
    Quotient quotient(const Subgroup& n) const;

    /* The subgroup as a group in its own right.  to_sub maps parent element
       indices into the restricted group (kNotInSub outside); from_sub is the
       inverse embedding. */
    static constexpr Elt kNotInSub = 0xFFFF;
    Restriction restrict_to(const Subgroup& s) const;

  private:
    std::shared_ptr<const FiniteGroup> g_;
};

struct Restriction {
    FiniteUniverse universe;
    std::vector<Elt> to_sub;
    std::vector<Elt> from_sub;
};

}  // namespace tdlc::finite
