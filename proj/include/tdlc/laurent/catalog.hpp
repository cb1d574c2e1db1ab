#pragma once

#include "tdlc/laurent/banded_endo.hpp"

namespace tdlc::laurent {

/* (e x)_n = x_{n+1} + x_{n+2} for even n >= 0, zero otherwise.  Restricts to
   an endomorphism of the power series ball that is neither injective nor
   surjective; its image meets only even coordinates. */
BandedEndo even_pair_collapse(int p);

/* (e x)_n = x_{n+1} for n >= 0, zero otherwise.  On the power series ball
   this is the coefficient shift, onto with one-dimensional kernel. */
BandedEndo truncating_shift(int p);

/* (e x)_n = x_{2n-2} for n <= 0, x_{-n} for odd n > 0, x_{n/2} for even
   n >= 2.  Every orbit converges to zero while finitely supported elements
   stay in the image of every power. */
BandedEndo interleaving_fold();

}  // namespace tdlc::laurent
