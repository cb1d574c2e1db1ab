#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tdlc {

/* Arbitrary-precision positive integer used for all subgroup indices.
   In the Laurent universe every finite index is a power of the coefficient
   prime; prime_exponent() recovers the exponent when a prime is supplied. */
using Index = boost::multiprecision::cpp_int;

inline Index index_pow(const Index& base, unsigned exp) {
    Index r = 1;
    for (unsigned i = 0; i < exp; ++i) r *= base;
    return r;
}

/* Exponent e with p^e == value; throws if value is not a power of p. */
inline unsigned prime_exponent(Index value, const Index& p) {
    if (value < 1 || p < 2) throw std::invalid_argument("prime_exponent: bad arguments");
    unsigned e = 0;
    while (value > 1) {
        if (value % p != 0) throw std::invalid_argument("prime_exponent: not a prime power");
        value /= p;
        ++e;
    }
    return e;
}

/* A finite index, or the distinguished infinite marker. */
struct IndexOrInfinite {
    bool infinite = false;
    Index value = 1;  // meaningful only when !infinite

    static IndexOrInfinite inf() { return {true, 0}; }
    static IndexOrInfinite of(Index v) { return {false, std::move(v)}; }

    bool operator==(const IndexOrInfinite& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
};

/* Every horizon-bounded computation reports how its answer is known.
   Exact        : termination was guaranteed and reached.
   HorizonCertified : a machine-checkable witness (fixpoint hit, or a repeating
                  pattern at matching phase) was observed within the horizon.
   Inconclusive : the horizon was exhausted with no witness.  Callers must not
                  treat the value as an answer. */
struct Certificate {
    enum class Kind { Exact, HorizonCertified, Inconclusive };
    Kind kind = Kind::Exact;
    std::string evidence;  // human-readable witness, e.g. "fixpoint at step 3"

    static Certificate exact(std::string ev = "") { return {Kind::Exact, std::move(ev)}; }
    static Certificate horizon(std::string ev) { return {Kind::HorizonCertified, std::move(ev)}; }
    static Certificate inconclusive(std::string ev) { return {Kind::Inconclusive, std::move(ev)}; }

    bool exact_kind() const { return kind == Kind::Exact; }
    bool conclusive() const { return kind != Kind::Inconclusive; }

    /* Lattice meet: a result derived from several certified inputs is only as
       strong as the weakest of them. */
    static Certificate combine(const Certificate& a, const Certificate& b) {
        if (a.kind == Kind::Inconclusive) return a;
        if (b.kind == Kind::Inconclusive) return b;
        if (a.kind == Kind::HorizonCertified) return a;
        if (b.kind == Kind::HorizonCertified) return b;
        return a;
    }
};

template <class T>
struct Certified {
    T value;
    Certificate cert;
};

/* Horizon bundle threaded through every operation that may not terminate.
   Defaults match the CLI defaults. */
struct Horizon {
    int fixpoint = 64;      // max chain steps before giving up
    int state_bound = 4096; // max distinct boundary states in the image eliminator
    int moller_n = 8;       // highest n for the index-growth scale estimate
};

/* Input or capability misuse: maps to CLI exit code 2. */
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Operation requires a capability the universe lacks (e.g. subgroup
   enumeration outside the finite universe). */
struct CapabilityError : std::logic_error {
    using std::logic_error::logic_error;
};

inline std::string cert_kind_name(Certificate::Kind k) {
    switch (k) {
        case Certificate::Kind::Exact: return "exact";
        case Certificate::Kind::HorizonCertified: return "horizon-certified";
        case Certificate::Kind::Inconclusive: return "inconclusive";
    }
    return "?";
}

}  // namespace tdlc
