#pragma once

/* Brute-force ground truth for the Laurent-series universe: subgroup
   operations recomputed by dense GF(p) row reduction over explicit
   coordinate windows, compared bit-exactly against the engine's
   eventually-periodic representations.

   Window semantics: the dense projection of a subgroup to [lo, hi) is
   annihilated exactly by the constraint-span rows supported inside the
   window.  Two facts make the truncations sound:
     - a span row ending before column W is a combination of generator copies
       that start before W (elimination at maximum coordinates is creep-free)
     - a span row starting at or after column c is a combination of echelon
       rows with pivot at or after c
   so materializing copies generously and reading off the appropriate rows of
   one reduction is exact. */

#include "tdlc/laurent/banded_endo.hpp"
#include "tdlc/laurent/epc.hpp"

#include <algorithm>
#include <vector>

namespace tdlc::oracle {

using laurent::BandedEndo;
using laurent::EPC;
using laurent::Row;

using DenseMat = std::vector<std::vector<int>>;

/* reduced row echelon form: pivots strictly increasing, pivot entries 1,
   pivot columns cleared elsewhere */
inline DenseMat rref(DenseMat m, int p) {
    size_t rows = m.size();
    if (!rows) return m;
    size_t cols = m[0].size(), rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t sel = rank;
        while (sel < rows && m[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[rank], m[sel]);
        int inv = laurent::mod_inverse(m[rank][c], p);
        for (size_t j = 0; j < cols; ++j) m[rank][j] = m[rank][j] * inv % p;
        for (size_t i = 0; i < rows; ++i) {
            if (i == rank || m[i][c] == 0) continue;
            int f = m[i][c];
            for (size_t j = 0; j < cols; ++j) m[i][j] = (m[i][j] + (p - f) * m[rank][j]) % p;
        }
        ++rank;
    }
    m.resize(rank);
    return m;
}

/* basis of the span rows supported entirely on columns [0, keep) */
inline DenseMat left_supported(const DenseMat& m, int p, size_t keep) {
    size_t cols = m.empty() ? 0 : m[0].size();
    std::vector<int> used(cols, -1);
    DenseMat store;
    for (auto& r : m) {
        std::vector<int> v = r;
        for (size_t cc = cols; cc-- > 0;) {
            if (v[cc] == 0) continue;
            if (used[cc] < 0) {
                int inv = laurent::mod_inverse(v[cc], p);
                for (auto& x : v) x = x * inv % p;
                used[cc] = (int)store.size();
                store.push_back(v);
                break;
            }
            const auto& w = store[(size_t)used[cc]];
            int f = v[cc];
            for (size_t j = 0; j <= cc; ++j) v[j] = (v[j] + (p - f) * w[j]) % p;
        }
    }
    DenseMat out;
    for (size_t cc = 0; cc < keep && cc < cols; ++cc)
        if (used[cc] >= 0) {
            auto v = store[(size_t)used[cc]];
            v.resize(keep);
            out.push_back(std::move(v));
        }
    return rref(std::move(out), p);
}

/* basis of the span rows supported entirely on columns [from, cols):
   RREF rows whose pivot lies at or beyond from */
inline DenseMat right_supported(const DenseMat& m, int p, size_t from) {
    DenseMat r = rref(m, p);
    DenseMat out;
    for (auto& v : r) {
        size_t piv = 0;
        while (piv < v.size() && v[piv] == 0) ++piv;
        if (piv < v.size() && piv >= from) out.push_back(v);
    }
    return out;
}

/* kernel basis of the constraint matrix over [0, n), in RREF form */
inline DenseMat kernel_basis(const DenseMat& constraints, int p, size_t n) {
    DenseMat r = rref(constraints, p);
    std::vector<int> pivot_of(n, -1);
    for (size_t i = 0; i < r.size(); ++i) {
        size_t c = 0;
        while (c < n && r[i][c] == 0) ++c;
        if (c < n) pivot_of[c] = (int)i;
    }
    DenseMat out;
    for (size_t fc = 0; fc < n; ++fc) {
        if (pivot_of[fc] >= 0) continue;
        std::vector<int> v(n, 0);
        v[fc] = 1;
        for (size_t c = 0; c < n; ++c)
            if (pivot_of[c] >= 0) v[c] = (p - r[(size_t)pivot_of[c]][fc] % p) % p;
        out.push_back(std::move(v));
    }
    return rref(std::move(out), p);
}

/* constraint rows of s supported inside [lo, hi), as dense rows on that
   window; complete by the creep-free truncation argument */
inline DenseMat window_constraints(const EPC& s, int lo, int hi) {
    const int p = s.p();
    int pad = s.max_span() + 8;
    int lo0 = std::min(lo, s.base());
    int hi2 = hi + pad;
    size_t wide = (size_t)(hi2 - lo0);
    DenseMat m;
    for (auto& r : s.rows_in(s.base(), hi)) {  // copies starting before hi suffice
        std::vector<int> v(wide, 0);
        for (auto& [c, cf] : r.terms()) v[(size_t)(c - lo0)] = cf;
        m.push_back(std::move(v));
    }
    DenseMat win = left_supported(m, p, (size_t)(hi - lo0));
    DenseMat inside = right_supported(win, p, (size_t)(lo - lo0));
    /* re-frame to [lo, hi) */
    DenseMat out;
    for (auto& v : inside)
        out.emplace_back(v.begin() + (lo - lo0), v.end());
    return out;
}

/* dense projection of the subgroup to coordinates [lo, hi): RREF basis */
inline DenseMat project(const EPC& s, int lo, int hi) {
    size_t n = (size_t)(hi - lo);
    DenseMat framed;
    if (hi > s.base()) {
        DenseMat cons = window_constraints(s, std::max(lo, s.base()), hi);
        for (auto& v : cons) {
            std::vector<int> w(n, 0);
            std::copy(v.begin(), v.end(), w.begin() + (std::max(lo, s.base()) - lo));
            framed.push_back(std::move(w));
        }
    }
    for (int c = lo; c < std::min(hi, s.base()); ++c) {
        std::vector<int> w(n, 0);
        w[(size_t)(c - lo)] = 1;
        framed.push_back(std::move(w));
    }
    return kernel_basis(framed, s.p(), n);
}

inline bool same_projection(const EPC& a, const EPC& b, int lo, int hi) {
    return project(a, lo, hi) == project(b, lo, hi);
}

inline long long project_logdim_diff(const EPC& a, const EPC& b, int lo, int hi) {
    return (long long)project(a, lo, hi).size() - (long long)project(b, lo, hi).size();
}

/* dense projection of e(s) to the y-window [ylo, yhi) */
inline DenseMat image_project(const BandedEndo& e, const EPC& s, int ylo, int yhi) {
    const int p = s.p();
    /* relation rows for every output in the window; g-columns sized to hold
       every row that feeds them plus the subgroup's own constraint creep */
    std::vector<std::pair<int, Row>> rels;
    int ghi = s.base() + 1;
    for (int n = ylo; n < yhi; ++n) {
        Row r = e.row(n);
        std::vector<std::pair<int, int>> keep;
        for (auto& [c, cf] : r.terms())
            if (c >= s.base()) keep.emplace_back(c, cf);
        Row rc(p, std::move(keep));
        if (!rc.zero()) ghi = std::max(ghi, rc.max_coord() + 1);
        rels.emplace_back(n, std::move(rc));
    }
    ghi += s.max_span() + 8;
    const int glo = s.base();
    size_t ng = (size_t)(ghi - glo), ny = (size_t)(yhi - ylo), width = ng + ny;
    /* columns: g first (to be eliminated), then y */
    DenseMat m;
    for (auto& [n, rc] : rels) {
        std::vector<int> v(width, 0);
        for (auto& [c, cf] : rc.terms()) v[(size_t)(c - glo)] = cf;
        v[ng + (size_t)(n - ylo)] = (p - 1) % p;  // y_n = row_n . g
        m.push_back(std::move(v));
    }
    for (auto& r : s.rows_in(s.base(), ghi)) {
        std::vector<int> v(width, 0);
        bool fits = true;
        for (auto& [c, cf] : r.terms()) {
            if (c >= ghi) fits = false;
            else v[(size_t)(c - glo)] = cf;
        }
        if (fits) m.push_back(std::move(v));
    }
    DenseMat ycons_wide = right_supported(m, p, ng);
    DenseMat ycons;
    for (auto& v : ycons_wide)
        ycons.emplace_back(v.begin() + ng, v.end());
    return kernel_basis(ycons, p, ny);
}

}  // namespace tdlc::oracle
