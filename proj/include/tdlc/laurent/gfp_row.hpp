#pragma once

#include "tdlc/certificate.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tdlc::laurent {

/* Arithmetic mod a word-size prime. */
int mod_inverse(int a, int p);
bool is_prime(int p);

/* A finite-support vector over GF(p) on integer coordinates: group elements
   (coefficient streams of Laurent series) and constraint functionals share
   this shape.  Terms are sorted by coordinate with coefficients in [1, p);
   the empty vector is zero (the identity element). */
class Row {
  public:
    Row() = default;
    /* terms need not be sorted or reduced; p must be prime */
    Row(int p, std::vector<std::pair<int, int>> terms);

    int p() const { return p_; }
    bool zero() const { return terms_.empty(); }
    const std::vector<std::pair<int, int>>& terms() const { return terms_; }

    int min_coord() const;  // throws on zero
    int max_coord() const;  // throws on zero
    int coeff(int coord) const;

    Row shifted(int delta) const;
    Row scaled(int c) const;
    Row plus_scaled(const Row& other, int c) const;  // this + c*other
    /* reduce this against other at other's pivot; no-op when absent */
    Row reduced_by(const Row& other) const;
    Row monic() const;  // leading coefficient 1

    /* dot product against an element vector */
    int dot(const Row& x) const;

    bool operator==(const Row&) const = default;
    /* coordinate-wise lexicographic order reading left to right from the
       common minimum; zero sorts first */
    static bool lex_less(const Row& a, const Row& b);

    std::string str() const;  // e.g. "g3 + 2 g7"

  private:
    int p_ = 2;
    std::vector<std::pair<int, int>> terms_;
};

using SeqVector = Row;

Row basis_row(int p, int coord);  // e_coord

/* valuation = minimal coordinate; nullopt for the identity */
std::optional<int> valuation(const SeqVector& x);

}  // namespace tdlc::laurent
