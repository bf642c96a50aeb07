/**
 * @file rational.hpp
 * @brief Exact arithmetic over Q: valuations, factoring, totients.
 *
 * Integers and rationals are GMP types (mpz_class / mpq_class), always
 * canonical: reduced to lowest terms, denominator positive.  On top of
 * them this header provides p-adic valuations with a tagged +infinity,
 * factored fractional ideals of Q, Jordan totients, and the point count
 * of projective m-space over Z/q.
 */
#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hc {

using Int = mpz_class;
using Rat = mpq_class;

/// Value of a discrete valuation: an integer or +infinity (at 0).
/// Addition saturates at infinity.
class Val {
public:
    Val(long v) : v_(v), inf_(false) {}
    static Val infinity() { return Val(0, true); }

    bool is_infinite() const { return inf_; }

    /// Finite value; throws on +infinity.
    long finite() const {
        if (inf_) throw std::domain_error("Val: +infinity has no finite value");
        return v_;
    }

    Val operator+(const Val& o) const {
        if (inf_ || o.inf_) return infinity();
        return Val(v_ + o.v_);
    }
    Val operator-() const {
        if (inf_) throw std::domain_error("Val: cannot negate +infinity");
        return Val(-v_);
    }

    bool operator==(const Val& o) const {
        return inf_ == o.inf_ && (inf_ || v_ == o.v_);
    }
    bool operator<(const Val& o) const {
        if (inf_) return false;
        if (o.inf_) return true;
        return v_ < o.v_;
    }
    bool operator<=(const Val& o) const { return *this < o || *this == o; }
    bool operator>=(const Val& o) const { return o <= *this; }
    bool operator>(const Val& o) const { return o < *this; }

    friend Val min(const Val& a, const Val& b) { return a < b ? a : b; }

private:
    Val(long v, bool inf) : v_(v), inf_(inf) {}
    long v_;
    bool inf_;
};

/// ord_p of an integer or rational; +infinity exactly at 0.
Val val_p(const Int& x, const Int& p);
Val val_p(const Rat& x, const Int& p);

/// min of val_p over the entries; +infinity iff all entries vanish.
Val tuple_val_p(std::span<const Int> xs, const Int& p);
Val tuple_val_p(std::span<const Rat> xs, const Int& p);

/// Deterministic primality for |n| < 3.3e24 (trial division then
/// Miller-Rabin with the first twelve prime witnesses).  Larger inputs
/// are rejected.
bool is_prime(const Int& n);

/// A fractional ideal of Q as a finite prime -> exponent map.
/// No zero exponents are stored; the empty map is the unit ideal.
class FactoredIdeal {
public:
    FactoredIdeal() = default;

    static FactoredIdeal one() { return FactoredIdeal(); }

    bool is_one() const { return e_.empty(); }

    long exponent_of(const Int& p) const {
        auto it = e_.find(p);
        return it == e_.end() ? 0 : it->second;
    }

    void set_exponent(const Int& p, long e) {
        if (e == 0)
            e_.erase(p);
        else
            e_[p] = e;
    }

    FactoredIdeal operator*(const FactoredIdeal& o) const {
        FactoredIdeal r = *this;
        for (const auto& [p, e] : o.e_) r.set_exponent(p, r.exponent_of(p) + e);
        return r;
    }

    bool operator==(const FactoredIdeal& o) const { return e_ == o.e_; }
    bool operator<(const FactoredIdeal& o) const { return e_ < o.e_; }

    /// Norm as a positive rational (negative exponents allowed).
    Rat norm() const;

    const std::map<Int, long>& exponents() const { return e_; }

    /// JSON object with decimal-string keys: {"2": 3, "5": -1}.
    std::string to_json() const;

private:
    std::map<Int, long> e_;
};

/// Unique factorization of |n| for nonzero rational n.
/// Trial division up to 1e6, then deterministic primality (or a perfect
/// power of such a prime); anything else is rejected with a clear error.
FactoredIdeal factor(const Int& n);
FactoredIdeal factor(const Rat& n);

/// Jordan totient J_k(q): the number of primitive k-tuples mod q,
/// q^k * prod_{p|q} (1 - p^{-k}).  J_1 is Euler's totient.
Int jordan_totient(unsigned k, const Int& q);

/// #P^m(Z/q) = J_{m+1}(q) / J_1(q).
Int proj_space_size(unsigned m, const Int& q);

/// Binomial coefficient as an exact integer.
Int binomial(unsigned long n, unsigned long k);

/// Decimal "p/q" ("p" when the denominator is 1).
std::string rat_to_string(const Rat& x);
Rat rat_from_string(const std::string& s);

double rat_to_double(const Rat& x);

}  // namespace hc
