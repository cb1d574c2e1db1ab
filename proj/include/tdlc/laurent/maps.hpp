#pragma once

#include "tdlc/laurent/banded_endo.hpp"
#include "tdlc/laurent/epc.hpp"

namespace tdlc::laurent {

/* {x in ambient : e(x) in s}.  Exact: every constraint of s pulls back along
   e to finitely many rows plus eventually periodic families, and the
   coordinates of e(x) below s.base contribute only the finitely many rows of
   e whose support meets the ambient ball.  Requires a uniform up tail. */
EPC ep_preimage(const BandedEndo& e, const EPC& s, const EPC& ambient);

/* Closure of e(s).  The constraints of the image are read off sliding
   windows of the relation system {y = e(g), g in s}, which are exact per
   window; the folded tail is then verified in the expanding direction
   (the result contains e(s), checked through the exact preimage) and
   window-certified in the other.  Requires a uniform up tail. */
Certified<EPC> ep_image(const BandedEndo& e, const EPC& s, const Horizon& h = {});

}  // namespace tdlc::laurent
