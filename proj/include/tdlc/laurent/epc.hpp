#pragma once

#include "tdlc/laurent/gfp_row.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tdlc::laurent {

/* A shift-periodic family of constraint rows: templates[i] shifted right by
   k*period for every k >= 0. */
struct PeriodicRows {
    int period = 1;
    std::vector<Row> templates;
};

/* Closed subgroup of F_p((t)) cut out by an eventually periodic constraint
   system.  Invariants after construction:
     - support of every member lies in [base, infinity); base is maximal
     - constraint rows are the canonical echelon system: distinct pivots,
       leading coefficient 1, each row is the unique representative of its
       pivot coset with minimal support end, ties broken lexicographically
     - templates repeat with the minimal period from the minimal anchor;
       exceptional rows have pivots below the anchor
     - open subgroups (finitely many constraints) have no periodic part and
       anchor == base; the trivial subgroup has the distinguished form
       base 0, no exceptional rows, anchor 0, period 1, template {g0}
   All constructors funnel through the canonicalizer, so equality of subgroups
   is equality of representations. */
class EPC {
  public:
    EPC() = default;  // F_2[[t]]

    static EPC from_constraints(int p, int base, std::vector<Row> rows,
                                std::vector<PeriodicRows> families = {});
    static EPC open_ball(int p, int base);  // t^base F_p[[t]]
    static EPC trivial(int p);

    int p() const { return p_; }
    int base() const { return base_; }
    const std::vector<Row>& exceptional() const { return except_; }
    int anchor() const { return anchor_; }
    int period() const { return period_; }
    const std::vector<Row>& templates() const { return templates_; }

    bool open() const { return templates_.empty(); }
    bool is_trivial() const;

    /* canonical constraint rows with pivot in [from, to), ascending */
    std::vector<Row> rows_in(int from, int to) const;
    std::optional<Row> row_at_pivot(int pivot) const;
    /* count of constraint pivots in [from, to) */
    long long pivots_in(int from, int to) const;
    /* longest support span among constraint rows (0 when none) */
    int max_span() const;

    bool operator==(const EPC&) const = default;

    std::string str() const;

  private:
    friend struct EpcBuilder;
    int p_ = 2;
    int base_ = 0;
    std::vector<Row> except_;
    int anchor_ = 0;
    int period_ = 1;
    std::vector<Row> templates_;
};

/* element membership */
bool ep_member(const SeqVector& x, const EPC& s);

/* Is the functional r (restricted to coordinates >= s.base) in the span of
   the constraint system of s?  Exact: the greedy pivot reduction either
   terminates or revisits a shifted state, which certifies divergence. */
bool row_space_member(Row r, const EPC& s);

/* set containment a >= b */
bool ep_contains(const EPC& a, const EPC& b);

EPC ep_intersect(const EPC& a, const EPC& b);

/* [a : b]; throws InputError unless b <= a */
IndexOrInfinite ep_index(const EPC& a, const EPC& b);

/* smallest closed subgroup containing both (= closure of the sum).
   Exact when one operand contains the other, otherwise certified from a
   stabilized window of the constraint-space intersection. */
Certified<EPC> ep_join(const EPC& a, const EPC& b, const Horizon& h = {});

/* Canonical fold of an already complete constraint window: `rows` must span
   every constraint of the target subgroup whose support ends before `wend`.
   Building block for operations that produce constraints window by window;
   returns nothing when no stable tail pattern covers the window. */
std::optional<EPC> fold_complete_window(int p, int base, const std::vector<Row>& rows, int wend);

/* Spanning set of every constraint of s supported below wend, with the base
   cutoff written out as single-coordinate rows down to `lo` (lo <= s.base).
   Together the rows span exactly the constraints of s on the window [lo, wend)
   viewed inside t^lo F_p[[t]]. */
std::vector<Row> constraint_window(const EPC& s, int lo, int wend);

/* Basis of the intersection of the spans of two row sets; all supports must
   lie within [lo, wend).  Deterministic for given spans (reduced echelon
   extraction), so equal spans give equal outputs. */
std::vector<Row> span_meet(int p, int lo, int wend, const std::vector<Row>& a,
                           const std::vector<Row>& b);

}  // namespace tdlc::laurent
