#pragma once

#include "tdlc/laurent/gfp_row.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tdlc::laurent {

/* Rows above the exceptional band: for n >= m_plus, with j = (n - m_plus) /
   period and i = (n - m_plus) % period, row_n = templates[i] shifted right by
   j * shifts[i].  The common grammar uses one shift for every phase;
   per-phase (possibly negative) shifts are accepted for validation, apply and
   solve, while the subgroup-closure operations require a uniform
   nonnegative shift. */
struct UpTail {
    int period = 1;
    std::vector<int> shifts;
    std::vector<Row> templates;
    bool operator==(const UpTail&) const = default;
};

/* Rows below the exceptional band: for n < m_minus, with m = m_minus - 1 - n,
   j = m / period and i = m % period, row_n = templates[i] shifted left by
   j * shift.  shift >= 1 keeps image supports bounded below; absence of a
   down tail means those rows are zero. */
struct DownTail {
    int period = 1;
    int shift = 1;
    std::vector<Row> templates;
    bool operator==(const DownTail&) const = default;
};

/* Continuous endomorphism of F_p((t)) acting on coefficient streams by
   banded, eventually periodic rows: (e x)_n = row_n . x. */
class BandedEndo {
  public:
    BandedEndo(int p, int m_minus, int m_plus, std::vector<Row> exceptional, UpTail up,
               std::optional<DownTail> down);

    /* empty means well formed; entries name the offending part */
    static std::vector<std::string> validate(int p, int m_minus, int m_plus,
                                             const std::vector<Row>& exceptional,
                                             const UpTail& up,
                                             const std::optional<DownTail>& down);

    int p() const { return p_; }
    int m_minus() const { return m_minus_; }
    int m_plus() const { return m_plus_; }
    const std::vector<Row>& exceptional() const { return exceptional_; }
    const UpTail& up() const { return up_; }
    const std::optional<DownTail>& down() const { return down_; }

    Row row(int n) const;

    bool uniform_up() const;  // all up shifts equal and nonnegative
    int drift() const;        // the common up shift; throws unless uniform

    /* throws CapabilityError when the image is not finitely supported */
    SeqVector apply(const SeqVector& x) const;

    bool operator==(const BandedEndo&) const = default;
    std::string str() const;

  private:
    int p_ = 2;
    int m_minus_ = 0, m_plus_ = 0;
    std::vector<Row> exceptional_;
    UpTail up_;
    std::optional<DownTail> down_;
};

BandedEndo identity_endo(int p);
/* x -> t^k x on coefficient streams; k = -1 is the forward shift */
BandedEndo mult_by_t_power(int p, int k);

/* the functional x -> phi(e(x)) */
Row pullback_row(const BandedEndo& e, const Row& phi);

/* e1 after e2; requires uniform nonnegative up shifts on both */
BandedEndo compose_endos(const BandedEndo& e1, const BandedEndo& e2);
BandedEndo endo_power(const BandedEndo& e, int n);

/* solve e(x) = y with x supported in [lo, hi); result verified by apply */
std::optional<SeqVector> solve_window(const BandedEndo& e, const SeqVector& y, int lo, int hi);
/* solve e^n(x) = y one step at a time with automatically widened windows */
std::optional<SeqVector> solve_power(const BandedEndo& e, SeqVector y, int n, int slack = 32);

}  // namespace tdlc::laurent
