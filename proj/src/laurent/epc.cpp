#include "tdlc/laurent/epc.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace tdlc::laurent {

namespace {

Row chop_below(const Row& r, int floor) {
    std::vector<std::pair<int, int>> keep;
    for (auto& [c, v] : r.terms())
        if (c >= floor) keep.emplace_back(c, v);
    return Row(r.p() ? r.p() : 2, std::move(keep));
}

/* Reduce r at the maximum coordinate of "other" (anti-echelon direction). */
Row reduced_at_max(const Row& r, const Row& other, int p) {
    int m = other.max_coord();
    int c = r.coeff(m);
    if (c == 0) return r;
    int lead = other.coeff(m);
    return r.plus_scaled(other, (p - c * mod_inverse(lead, p) % p) % p);
}

struct CanonWindow {
    int wtrust = 0;             // rows are the true canonical rows for pivots < wtrust
    int span = 1;               // max support span seen
    std::map<int, Row> rows;    // pivot -> canonical row
};

/* Canonical constraint rows of the system spanned by the materialized copies,
   correct for every pivot below wtrust.  Soundness of the truncation: an
   element of the full span whose support ends at M is a combination of copies
   whose supports start at or before M, so the anti-echelon (elimination at
   maximum coordinates) computed from copies starting before wmat agrees with
   the full system on every row ending before wmat.  When the caller vouches
   that the input spans every constraint ending below wmat (complete = true)
   the whole window is trusted; otherwise the family materialization only
   guarantees completeness up to wmat minus the longest input span. */
CanonWindow canonical_window(int p, int base, const std::vector<Row>& finite,
                             const std::vector<PeriodicRows>& fams, int wmat,
                             bool complete = false) {
    std::vector<Row> mat;
    int span = 1;
    auto push = [&](const Row& r) {
        Row c = chop_below(r, base);
        if (c.zero()) return;
        span = std::max(span, c.max_coord() - c.min_coord() + 1);
        mat.push_back(std::move(c));
    };
    for (auto& r : finite) push(r);
    for (auto& f : fams) {
        if (f.period < 1) throw InputError("periodic constraint family needs period >= 1");
        for (auto& t : f.templates) {
            if (t.zero()) continue;
            for (int k = 0; t.min_coord() + k * f.period <= wmat; ++k) push(t.shifted(k * f.period));
        }
    }
    std::sort(mat.begin(), mat.end(), [](const Row& x, const Row& y) {
        if (x.min_coord() != y.min_coord()) return x.min_coord() < y.min_coord();
        return Row::lex_less(x, y);
    });

    /* anti-echelon: one row per support-end coordinate */
    std::map<int, Row> anti;
    for (Row r : mat) {
        while (!r.zero()) {
            int m = r.max_coord();
            auto it = anti.find(m);
            if (it == anti.end()) {
                anti.emplace(m, r.scaled(mod_inverse(r.coeff(m), p)));
                break;
            }
            r = reduced_at_max(r, it->second, p);
        }
    }

    /* forward pass in order of increasing support end; the step at which a
       pivot first appears bounds the minimal support end of its coset */
    std::map<int, Row> echelon;   // pivot -> first row (never rewritten)
    std::map<int, int> first_at;  // pivot -> support-end step of first appearance
    for (auto& [m, s] : anti) {
        Row r = s;
        while (!r.zero()) {
            int piv = r.min_coord();
            auto it = echelon.find(piv);
            if (it == echelon.end()) {
                echelon.emplace(piv, r.monic());
                first_at.emplace(piv, m);
                break;
            }
            r = r.reduced_by(it->second);
        }
    }

    /* refinement: zero out entries at every pivot already present when this
       pivot appeared; the result is the unique reduced representative and is
       independent of the generating presentation */
    CanonWindow out;
    out.span = span;
    out.wtrust = complete ? wmat : std::max(base, wmat - span - 1);
    for (auto& [piv, raw] : echelon) {
        if (piv >= out.wtrust) break;
        int cutoff = first_at.at(piv);
        Row r = raw;
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto& [c, v] : r.terms()) {
                if (c <= piv) continue;
                auto it = echelon.find(c);
                if (it != echelon.end() && first_at.at(c) <= cutoff) {
                    r = r.reduced_by(it->second);
                    changed = true;
                    break;
                }
            }
        }
        out.rows.emplace(piv, std::move(r));
    }
    return out;
}

struct Fold {
    std::vector<Row> exc;
    int anchor = 0;
    int period = 1;
    std::vector<Row> templates;
    bool operator==(const Fold&) const = default;
};

/* Detect the minimal shift period and minimal anchor of the canonical rows.
   Requires a comfortable verified run before the window edge. */
std::optional<Fold> fold_window(const CanonWindow& cw, int base) {
    const int wlim = cw.wtrust;
    auto row_at = [&](int piv) -> const Row* {
        auto it = cw.rows.find(piv);
        return it == cw.rows.end() ? nullptr : &it->second;
    };
    int qmax = std::max(1, (wlim - base) / 4);
    for (int q = 1; q <= qmax; ++q) {
        int need = std::max(3 * q, 48);
        /* find the least s such that every pivot from s on repeats with q */
        int s = base;
        for (int piv = wlim - q - 1; piv >= base; --piv) {
            const Row* lo = row_at(piv);
            const Row* hi = row_at(piv + q);
            bool ok = (lo == nullptr) == (hi == nullptr) &&
                      (lo == nullptr || *hi == lo->shifted(q));
            if (!ok) {
                s = piv + 1;
                break;
            }
        }
        if (wlim - q - s < need) continue;
        Fold f;
        f.anchor = s;
        f.period = q;
        for (auto& [piv, r] : cw.rows) {
            if (piv < s) f.exc.push_back(r);
            else if (piv < s + q) f.templates.push_back(r);
            else break;
        }
        return f;
    }
    return std::nullopt;
}

}  // namespace

struct EpcBuilder {
    static EPC assemble(int p, int base, Fold f) {
        auto row_at = [&](int piv) -> std::optional<Row> {
            for (auto& r : f.exc)
                if (r.min_coord() == piv) return r;
            for (auto& t : f.templates) {
                int tp = t.min_coord();
                if (piv >= tp && (piv - tp) % f.period == 0) return t.shifted(piv - tp);
            }
            return std::nullopt;
        };

        /* every coordinate from base on forced to zero: distinguished trivial form */
        bool trivial = f.period == 1 && f.templates.size() == 1 &&
                       f.templates.front() == basis_row(p, f.anchor) &&
                       static_cast<int>(f.exc.size()) == f.anchor - base;
        for (int c = base; trivial && c < f.anchor; ++c) {
            auto r = row_at(c);
            trivial = r && *r == basis_row(p, c);
        }
        if (trivial) {
            EPC t;
            t.p_ = p;
            t.base_ = 0;
            t.anchor_ = 0;
            t.period_ = 1;
            t.templates_ = {basis_row(p, 0)};
            return t;
        }

        /* absorb forced-zero leading coordinates, including periodic copies */
        int guard = static_cast<int>(f.exc.size()) + 4 * f.period + 4;
        while (guard-- > 0) {
            auto r = row_at(base);
            if (!r || *r != basis_row(p, base)) break;
            ++base;
        }

        EPC e;
        e.p_ = p;
        e.base_ = base;
        if (f.templates.empty()) {
            e.anchor_ = base;
            e.period_ = 1;
        } else {
            e.anchor_ = std::max(f.anchor, base);
            e.period_ = f.period;
            for (int piv = e.anchor_; piv < e.anchor_ + e.period_; ++piv)
                if (auto r = row_at(piv)) e.templates_.push_back(*r);
        }
        for (auto& r : f.exc)
            if (r.min_coord() >= base) e.except_.push_back(r);
        return e;
    }
};

EPC EPC::from_constraints(int p, int base, std::vector<Row> rows,
                          std::vector<PeriodicRows> families) {
    if (!is_prime(p)) throw InputError("coefficient modulus must be prime");
    int span = 1, extent = base;
    for (auto& r : rows)
        if (!r.zero()) {
            span = std::max(span, r.max_coord() - r.min_coord() + 1);
            extent = std::max(extent, r.max_coord() + 1);
        }
    long long q0 = 1;
    for (auto& f : families) {
        if (f.period < 1) throw InputError("periodic constraint family needs period >= 1");
        q0 = std::lcm(q0, (long long)f.period);
        for (auto& t : f.templates)
            if (!t.zero()) {
                span = std::max(span, t.max_coord() - t.min_coord() + 1);
                extent = std::max(extent, t.max_coord() + 1);
            }
    }
    q0 = std::min<long long>(q0, 1 << 12);
    int wmat = extent + 4 * ((int)q0 + span) + 96;
    for (int tries = 0; tries < 8 && wmat <= (1 << 15); ++tries) {
        CanonWindow c1 = canonical_window(p, base, rows, families, wmat);
        int wmat2 = wmat + std::max(160, wmat / 2);
        CanonWindow c2 = canonical_window(p, base, rows, families, wmat2);
        auto f1 = fold_window(c1, base);
        auto f2 = fold_window(c2, base);
        if (f1 && f2 && *f1 == *f2) return EpcBuilder::assemble(p, base, std::move(*f1));
        wmat = wmat2 * 2;
    }
    throw CapabilityError("constraint system did not reach a periodic normal form within the window cap");
}

EPC EPC::open_ball(int p, int base) {
    return from_constraints(p, base, {}, {});
}

EPC EPC::trivial(int p) {
    return from_constraints(p, 0, {}, {PeriodicRows{1, {basis_row(p, 0)}}});
}

bool EPC::is_trivial() const {
    return except_.empty() && base_ == 0 && anchor_ == 0 && period_ == 1 &&
           templates_.size() == 1 && templates_.front() == basis_row(p_, 0);
}

std::optional<EPC> fold_complete_window(int p, int base, const std::vector<Row>& rows, int wend) {
    CanonWindow cw = canonical_window(p, base, rows, {}, wend, true);
    /* Completeness makes every computed row a true canonical row even when
       the generators span most of the window; a pivot can only be missing
       when its canonical row ends past the window edge.  That confines edge
       effects to the last stretch of one canonical span, which is excluded
       from the fold. */
    int outspan = 1;
    for (auto& [piv, r] : cw.rows) outspan = std::max(outspan, r.max_coord() - piv + 1);
    cw.wtrust = std::max(base, wend - outspan - 1);
    cw.rows.erase(cw.rows.lower_bound(cw.wtrust), cw.rows.end());
    auto f = fold_window(cw, base);
    if (!f) return std::nullopt;
    return EpcBuilder::assemble(p, base, std::move(*f));
}

std::vector<Row> EPC::rows_in(int from, int to) const {
    std::vector<Row> out;
    for (auto& r : except_) {
        int piv = r.min_coord();
        if (piv >= from && piv < to) out.push_back(r);
    }
    for (auto& t : templates_) {
        int piv = t.min_coord();
        int k0 = piv >= from ? 0 : (from - piv + period_ - 1) / period_;
        for (int k = k0; piv + k * period_ < to; ++k) out.push_back(t.shifted(k * period_));
    }
    std::sort(out.begin(), out.end(),
              [](const Row& a, const Row& b) { return a.min_coord() < b.min_coord(); });
    return out;
}

std::optional<Row> EPC::row_at_pivot(int pivot) const {
    for (auto& r : except_)
        if (r.min_coord() == pivot) return r;
    for (auto& t : templates_) {
        int piv = t.min_coord();
        if (pivot >= piv && (pivot - piv) % period_ == 0) return t.shifted(pivot - piv);
    }
    return std::nullopt;
}

long long EPC::pivots_in(int from, int to) const {
    long long n = 0;
    for (auto& r : except_) {
        int piv = r.min_coord();
        if (piv >= from && piv < to) ++n;
    }
    if (to > from)
        for (auto& t : templates_) {
            int piv = t.min_coord();
            int lo = std::max(piv, from);
            /* count k >= 0 with piv + k*period in [lo, to) */
            if (piv < to) {
                int k0 = (lo - piv + period_ - 1) / period_;
                int k1 = (to - 1 - piv) / period_;
                if (k1 >= k0) n += k1 - k0 + 1;
            }
        }
    return n;
}

int EPC::max_span() const {
    int s = 0;
    for (auto& r : except_) s = std::max(s, r.max_coord() - r.min_coord() + 1);
    for (auto& t : templates_) s = std::max(s, t.max_coord() - t.min_coord() + 1);
    return s;
}

std::string EPC::str() const {
    std::ostringstream os;
    os << "F" << p_ << "((t)) subgroup, base " << base_;
    if (is_trivial()) return "trivial subgroup of F" + std::to_string(p_) + "((t))";
    if (!except_.empty()) {
        os << ", constraints {";
        for (size_t i = 0; i < except_.size(); ++i)
            os << (i ? "; " : "") << except_[i].str();
        os << "}";
    }
    if (!templates_.empty()) {
        os << ", periodic from " << anchor_ << " step " << period_ << " {";
        for (size_t i = 0; i < templates_.size(); ++i)
            os << (i ? "; " : "") << templates_[i].str();
        os << "}";
    }
    return os.str();
}

bool ep_member(const SeqVector& x, const EPC& s) {
    if (x.zero()) return true;
    if (x.min_coord() < s.base()) return false;
    for (auto& r : s.exceptional())
        if (r.dot(x) != 0) return false;
    int hi = x.max_coord();
    for (auto& t : s.templates()) {
        int piv = t.min_coord();
        for (int k = 0; piv + k * s.period() <= hi; ++k)
            if (t.shifted(k * s.period()).dot(x) != 0) return false;
    }
    return true;
}

bool row_space_member(Row r, const EPC& s) {
    r = chop_below(r, s.base());
    std::set<std::pair<int, std::vector<std::pair<int, int>>>> seen;
    for (int steps = 0; !r.zero(); ++steps) {
        if (steps > 200000) throw CapabilityError("row reduction did not terminate");
        int piv = r.min_coord();
        auto red = s.row_at_pivot(piv);
        if (!red) return false;
        if (piv >= s.anchor() && !s.templates().empty()) {
            int phase = ((piv % s.period()) + s.period()) % s.period();
            auto key = std::make_pair(phase, r.shifted(-piv).terms());
            if (!seen.insert(key).second) return false;  // shifted state revisited: divergent
        }
        r = r.reduced_by(*red);
    }
    return true;
}

bool ep_contains(const EPC& a, const EPC& b) {
    if (a.p() != b.p()) throw InputError("mixed coefficient primes");
    if (b.is_trivial()) return true;
    if (a.is_trivial()) return false;
    if (b.base() < a.base()) return false;
    for (auto& r : a.exceptional())
        if (!row_space_member(r, b)) return false;
    if (!a.templates().empty()) {
        int zb = std::max(b.anchor(), b.exceptional().empty()
                                          ? b.base()
                                          : b.exceptional().back().min_coord() + 1) +
                 b.max_span() + 1;
        long long l = std::lcm((long long)a.period(), (long long)std::max(1, b.period()));
        for (auto& t : a.templates()) {
            int kpast = std::max(0, (zb - t.min_coord() + a.period() - 1) / a.period());
            int kmax = kpast + 2 * (int)(l / a.period()) + 2;
            for (int k = 0; k <= kmax; ++k)
                if (!row_space_member(t.shifted(k * a.period()), b)) return false;
        }
    }
    return true;
}

EPC ep_intersect(const EPC& a, const EPC& b) {
    if (a.p() != b.p()) throw InputError("mixed coefficient primes");
    if (a == b) return a;
    std::vector<Row> rows = a.exceptional();
    rows.insert(rows.end(), b.exceptional().begin(), b.exceptional().end());
    std::vector<PeriodicRows> fams;
    if (!a.templates().empty()) fams.push_back({a.period(), a.templates()});
    if (!b.templates().empty()) fams.push_back({b.period(), b.templates()});
    return EPC::from_constraints(a.p(), std::max(a.base(), b.base()), std::move(rows),
                                 std::move(fams));
}

IndexOrInfinite ep_index(const EPC& a, const EPC& b) {
    if (!ep_contains(a, b)) throw InputError("index is defined only for a contained pair");
    if (a == b) return IndexOrInfinite::of(1);
    if (b.is_trivial()) return a.is_trivial() ? IndexOrInfinite::of(1) : IndexOrInfinite::inf();
    int z = std::max({a.anchor(), b.anchor(), b.base(), a.base()});
    for (auto& r : a.exceptional()) z = std::max(z, r.min_coord() + 1);
    for (auto& r : b.exceptional()) z = std::max(z, r.min_coord() + 1);
    long long l = std::lcm((long long)a.period(), (long long)b.period());
    auto ra = a.rows_in(z, z + (int)l);
    auto rb = b.rows_in(z, z + (int)l);
    if (ra != rb) return IndexOrInfinite::inf();
    long long k = (b.base() - a.base()) + b.pivots_in(b.base(), z) - a.pivots_in(a.base(), z);
    if (k < 0) throw std::logic_error("negative constraint excess for a contained pair");
    return IndexOrInfinite::of(index_pow(Index(a.p()), (unsigned)k));
}

namespace {

/* window subspace of the constraint span: every row ending before wend */
std::vector<Row> window_rows(const EPC& s, int wend) {
    std::vector<Row> mat = s.rows_in(s.base(), wend + s.max_span() + 2);
    std::map<int, Row> anti;
    for (Row r : mat) {
        while (!r.zero()) {
            int m = r.max_coord();
            auto it = anti.find(m);
            if (it == anti.end()) {
                anti.emplace(m, r.scaled(mod_inverse(r.coeff(m), s.p())));
                break;
            }
            r = reduced_at_max(r, it->second, s.p());
        }
    }
    std::vector<Row> out;
    for (auto& [m, r] : anti)
        if (m < wend) out.push_back(r);
    return out;
}

std::vector<std::vector<int>> rref_dense(std::vector<std::vector<int>> m, int p) {
    size_t rows = m.size();
    if (!rows) return m;
    size_t cols = m[0].size(), rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t sel = rank;
        while (sel < rows && m[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(m[rank], m[sel]);
        int inv = mod_inverse(m[rank][c], p);
        for (size_t j = c; j < cols; ++j) m[rank][j] = m[rank][j] * inv % p;
        for (size_t i = 0; i < rows; ++i) {
            if (i == rank || m[i][c] == 0) continue;
            int f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] = (m[i][j] + (p - f) * m[rank][j]) % p;
        }
        ++rank;
    }
    m.resize(rank);
    return m;
}

}  // namespace

std::vector<Row> constraint_window(const EPC& s, int lo, int wend) {
    if (lo > s.base()) throw std::logic_error("window floor above the subgroup base");
    std::vector<Row> out;
    for (int c = lo; c < s.base(); ++c) out.push_back(basis_row(s.p(), c));
    for (auto& r : window_rows(s, wend)) out.push_back(r);
    return out;
}

std::vector<Row> span_meet(int p, int lo, int wend, const std::vector<Row>& a,
                           const std::vector<Row>& b) {
    size_t n = (size_t)(wend - lo);
    std::vector<std::vector<int>> z;
    z.reserve(a.size() + b.size());
    auto dense = [&](const Row& r, bool both) {
        std::vector<int> v(2 * n, 0);
        for (auto& [c, cf] : r.terms()) {
            if (c < lo || c >= wend) throw std::logic_error("meet row leaves the window");
            v[c - lo] = cf;
            if (both) v[n + c - lo] = cf;
        }
        return v;
    };
    for (auto& r : a) z.push_back(dense(r, true));
    for (auto& r : b) z.push_back(dense(r, false));
    auto rr = rref_dense(std::move(z), p);
    std::vector<Row> meet;
    for (auto& v : rr) {
        bool leftzero = std::all_of(v.begin(), v.begin() + n, [](int x) { return x == 0; });
        if (!leftzero) continue;
        std::vector<std::pair<int, int>> terms;
        for (size_t j = 0; j < n; ++j)
            if (v[n + j]) terms.emplace_back(lo + (int)j, v[n + j]);
        if (!terms.empty()) meet.emplace_back(p, std::move(terms));
    }
    return meet;
}

Certified<EPC> ep_join(const EPC& a, const EPC& b, const Horizon& h) {
    if (a.p() != b.p()) throw InputError("mixed coefficient primes");
    if (ep_contains(a, b)) return {a, Certificate::exact("operand already contains the other")};
    if (ep_contains(b, a)) return {b, Certificate::exact("operand already contains the other")};
    const int p = a.p();
    const int minb = std::min(a.base(), b.base());
    int w = std::max({a.anchor() + 2 * a.period(), b.anchor() + 2 * b.period(), minb}) +
            2 * (a.max_span() + b.max_span()) + 96;
    std::optional<EPC> prev;
    int prev_w = 0;
    for (int tries = 0; tries < 6 && w <= (1 << 14); ++tries, w += std::max(128, w / 2)) {
        /* constraints of the sum = constraint span of a meet constraint span of b,
           computed on the window and refolded */
        std::vector<Row> meet =
            span_meet(p, minb, w, constraint_window(a, minb, w), constraint_window(b, minb, w));
        /* the window sets of both operands are complete below w, so the meet is too */
        auto cand = fold_complete_window(p, minb, meet, w);
        if (cand && prev && *prev == *cand) {
            bool sound = ep_contains(*cand, a) && ep_contains(*cand, b);
            for (auto& r : meet)
                if (!(sound = sound && row_space_member(r, *cand))) break;
            if (sound) {
                std::ostringstream ev;
                ev << "constraint meet stable on windows [" << minb << ", " << prev_w << ") and ["
                   << minb << ", " << w << ")";
                return {*cand, Certificate::horizon(ev.str())};
            }
        }
        if (cand) {
            prev = std::move(cand);
            prev_w = w;
        }
    }
    (void)h;
    return {EPC::open_ball(p, minb),
            Certificate::inconclusive("constraint meet did not stabilize within the window cap")};
}

}  // namespace tdlc::laurent
