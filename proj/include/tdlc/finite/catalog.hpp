#pragma once

#include "tdlc/finite/finite_group.hpp"

#include <functional>
#include <vector>

namespace tdlc::finite {

/* Direct product of cyclic groups C_{n1} x ... x C_{nk}, elements encoded in
   little-endian mixed radix: index = a1 + n1*(a2 + n2*(a3 + ...)). */
FiniteGroup cyclic_product(const std::vector<int>& factors);
std::vector<int> index_to_tuple(const std::vector<int>& factors, Elt x);
Elt tuple_to_index(const std::vector<int>& factors, const std::vector<int>& tuple);

/* Build an endomorphism of a cyclic product from a rule on coordinate
   tuples; the rule must return a valid tuple. */
FiniteEndo endo_from_tuple_rule(const FiniteGroup& g, const std::vector<int>& factors,
                                const std::function<std::vector<int>(const std::vector<int>&)>& rule);

FiniteGroup dihedral(int n);   // order 2n, n >= 1
FiniteGroup quaternion8();     // Q8
FiniteGroup alternating4();    // A4
FiniteGroup dicyclic3();       // C3 semidirect C4, order 12

/* Built-in groups: every group of order <= 12 in the families
   {cyclic, product of cyclics, S3, D4, Q8, A4, D6, C3:C4}, a spread of
   order 13..16 groups for the wider sweeps, and C_p^3 for p in {2,3}. */
struct CatalogEntry {
    std::string name;
    FiniteGroup group;
};
const std::vector<CatalogEntry>& catalog();
const FiniteGroup& catalog_group(const std::string& name);

/* Catalog restricted to order <= bound (the property sweeps use 12 and 16). */
std::vector<const CatalogEntry*> catalog_up_to(int max_order);

}  // namespace tdlc::finite
