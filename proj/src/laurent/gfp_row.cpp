#include "tdlc/laurent/gfp_row.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tdlc::laurent {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

int mod_inverse(int a, int p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw std::invalid_argument("mod_inverse of zero");
    int r = 1, base = a;
    int e = p - 2;  // p prime
    while (e > 0) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return r;
}

Row::Row(int p, std::vector<std::pair<int, int>> terms) : p_(p) {
    if (!is_prime(p)) throw InputError("coefficient modulus must be prime");
    std::map<int, int> acc;
    for (auto& [c, v] : terms) {
        int r = (v % p + p) % p;
        if (r) acc[c] = (acc[c] + r) % p;
    }
    for (auto& [c, v] : acc)
        if (v) terms_.emplace_back(c, v);
}

int Row::min_coord() const {
    if (zero()) throw std::logic_error("min_coord of zero row");
    return terms_.front().first;
}

int Row::max_coord() const {
    if (zero()) throw std::logic_error("max_coord of zero row");
    return terms_.back().first;
}

int Row::coeff(int coord) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), coord,
                               [](const auto& t, int c) { return t.first < c; });
    return (it != terms_.end() && it->first == coord) ? it->second : 0;
}

Row Row::shifted(int delta) const {
    Row r = *this;
    for (auto& [c, v] : r.terms_) c += delta;
    return r;
}

Row Row::scaled(int c) const {
    int s = (c % p_ + p_) % p_;
    Row r;
    r.p_ = p_;
    if (s == 0) return r;
    r.terms_ = terms_;
    if (s != 1)
        for (auto& [co, v] : r.terms_) v = v * s % p_;
    return r;
}

Row Row::plus_scaled(const Row& other, int c) const {
    if (p_ != other.p_ && !other.zero() && !zero())
        throw std::logic_error("mixed moduli in row arithmetic");
    int s = (c % p_ + p_) % p_;
    Row r;
    r.p_ = p_;
    auto a = terms_.begin(), ae = terms_.end();
    auto b = other.terms_.begin(), be = other.terms_.end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->first < b->first)) {
            r.terms_.push_back(*a++);
        } else if (a == ae || b->first < a->first) {
            int v = b->second * s % p_;
            if (v) r.terms_.emplace_back(b->first, v);
            ++b;
        } else {
            int v = (a->second + b->second * s) % p_;
            if (v) r.terms_.emplace_back(a->first, v);
            ++a, ++b;
        }
    }
    return r;
}

Row Row::reduced_by(const Row& other) const {
    if (other.zero()) return *this;
    int c = coeff(other.min_coord());
    if (c == 0) return *this;
    int lead = other.terms_.front().second;
    return plus_scaled(other, (p_ - c * mod_inverse(lead, p_) % p_) % p_);
}

Row Row::monic() const {
    if (zero()) return *this;
    return scaled(mod_inverse(terms_.front().second, p_));
}

int Row::dot(const Row& x) const {
    int s = 0;
    auto a = terms_.begin(), ae = terms_.end();
    auto b = x.terms_.begin(), be = x.terms_.end();
    while (a != ae && b != be) {
        if (a->first < b->first) ++a;
        else if (b->first < a->first) ++b;
        else s = (s + a->second * b->second) % p_, ++a, ++b;
    }
    return s;
}

bool Row::lex_less(const Row& a, const Row& b) {
    auto ia = a.terms_.begin(), ea = a.terms_.end();
    auto ib = b.terms_.begin(), eb = b.terms_.end();
    while (ia != ea || ib != eb) {
        if (ib == eb) return false;          // first difference: a nonzero, b zero
        if (ia == ea) return true;
        if (ia->first < ib->first) return false;
        if (ib->first < ia->first) return true;
        if (ia->second != ib->second) return ia->second < ib->second;
        ++ia, ++ib;
    }
    return false;
}

std::string Row::str() const {
    if (zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [c, v] : terms_) {
        if (!first) os << " + ";
        if (v != 1) os << v << " ";
        os << "g" << c;
        first = false;
    }
    return os.str();
}

Row basis_row(int p, int coord) { return Row(p, {{coord, 1}}); }

std::optional<int> valuation(const SeqVector& x) {
    if (x.zero()) return std::nullopt;
    return x.min_coord();
}

}  // namespace tdlc::laurent
