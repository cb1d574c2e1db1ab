#include "tdlc/laurent/catalog.hpp"

namespace tdlc::laurent {

BandedEndo even_pair_collapse(int p) {
    UpTail up;
    up.period = 2;
    up.shifts = {2, 2};
    up.templates = {Row(p, {{1, 1}, {2, 1}}), Row(p, {})};
    return BandedEndo(p, 0, 0, {}, up, std::nullopt);
}

BandedEndo truncating_shift(int p) {
    UpTail up;
    up.period = 1;
    up.shifts = {1};
    up.templates = {basis_row(p, 1)};
    return BandedEndo(p, 0, 0, {}, up, std::nullopt);
}

BandedEndo interleaving_fold() {
    const int p = 2;
    UpTail up;
    up.period = 2;
    up.shifts = {1, -2};
    up.templates = {basis_row(p, 1), basis_row(p, -3)};
    DownTail down;
    down.period = 1;
    down.shift = 2;
    down.templates = {basis_row(p, -2)};
    return BandedEndo(p, 1, 2, {basis_row(p, -1)}, up, down);
}

}  // namespace tdlc::laurent
