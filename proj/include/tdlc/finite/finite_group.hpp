#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tdlc::finite {

using Elt = std::uint16_t;

/* A finite group given by its full Cayley table.  The constructor verifies
   closure, associativity, identity and inverses; construction is the only
   gate, so everything downstream may assume a genuine group. */
class FiniteGroup {
  public:
    static constexpr int kMaxVerifiedOrder = 512;

    explicit FiniteGroup(std::vector<std::vector<Elt>> table, std::string name = "",
                         std::vector<std::string> labels = {});

    int order() const { return static_cast<int>(tab_.size()); }
    Elt identity() const { return id_; }
    Elt mul(Elt a, Elt b) const { return tab_[a][b]; }
    Elt inv(Elt a) const { return inv_[a]; }
    const std::string& name() const { return name_; }

    /* Optional human-readable element labels (tuples for cyclic products,
       cycle notation for permutation groups, ...). */
    const std::string& label(Elt a) const { return labels_[a]; }
    const std::vector<std::string>& labels() const { return labels_; }

    const std::vector<std::vector<Elt>>& table() const { return tab_; }

    bool is_abelian() const { return abelian_; }

  private:
    std::vector<std::vector<Elt>> tab_;
    std::vector<Elt> inv_;
    std::vector<std::string> labels_;
    std::string name_;
    Elt id_ = 0;
    bool abelian_ = true;
};

/* Subgroups are sorted, duplicate-free element vectors.  All set-level
   helpers preserve that normal form, so vector equality is subgroup
   equality. */
using Subgroup = std::vector<Elt>;

bool member(const Subgroup& s, Elt x);
bool subset(const Subgroup& a, const Subgroup& b);  // a included in b
Subgroup intersect(const Subgroup& a, const Subgroup& b);
Subgroup closure(const FiniteGroup& g, std::vector<Elt> gens);
bool is_subgroup(const FiniteGroup& g, const Subgroup& s);
Subgroup whole(const FiniteGroup& g);
Subgroup trivial(const FiniteGroup& g);

/* Product set {a*b : a in A, b in B}; a subgroup only when A,B commute as
   sets, which callers must decide for themselves. */
Subgroup product_set(const FiniteGroup& g, const Subgroup& a, const Subgroup& b);

/* Endomorphism as a total map on element indices, verified multiplicative
   at construction. */
class FiniteEndo {
  public:
    FiniteEndo(const FiniteGroup& g, std::vector<Elt> map);

    Elt apply(Elt x) const { return map_[x]; }
    const std::vector<Elt>& map() const { return map_; }

    bool operator==(const FiniteEndo& o) const { return map_ == o.map_; }

  private:
    std::vector<Elt> map_;
};

FiniteEndo compose(const FiniteGroup& g, const FiniteEndo& f1, const FiniteEndo& f2);  // f1 after f2
FiniteEndo endo_pow(const FiniteGroup& g, const FiniteEndo& f, int n);                 // n >= 1
FiniteEndo identity_endo(const FiniteGroup& g);

/* Fixed word for every element over a generating set (BFS tree), so an
   assignment of generator images extends to at most one candidate map. */
class GeneratorWords {
  public:
    GeneratorWords(const FiniteGroup& g, std::vector<Elt> gens);  // throws unless gens generate

    const std::vector<Elt>& gens() const { return gens_; }

    /* Extends images to the unique candidate map; false when the images
       break some relation. */
    bool extend(const std::vector<Elt>& images, std::vector<Elt>& out_map) const;

  private:
    const FiniteGroup* g_;
    std::vector<Elt> gens_;
    std::vector<int> parent_;   // -1 at the identity
    std::vector<int> via_gen_;  // generator index used on the last step
};

/* Unique homomorphic extension of generator images; throws when the images
   violate a relation. */
FiniteEndo endo_from_map(const FiniteGroup& g, const std::vector<Elt>& gens,
                                const std::vector<Elt>& images);

Subgroup endo_image(const FiniteGroup& g, const FiniteEndo& f, const Subgroup& s);
Subgroup endo_preimage(const FiniteEndo& f, const Subgroup& target, const Subgroup& ambient);

}  // namespace tdlc::finite
