/**
 * @file padic.hpp
 * @brief Nonarchimedean side: reduction maps mod q, enumeration of
 *        P^m(Z/p^s), excess valuations, local density tables, exact
 *        local factors and their product.
 *
 * Densities are exact rationals obtained by adaptive refinement of
 * residue classes.  A class mod p^k is decided as soon as the excess
 * valuation of one integral representative drops below k (the value is
 * then constant on the class), or once k reaches v_p(Res f), the depth
 * at which local constancy is unconditional.
 *
 * Local factors sum delta(i) * p^{(m+1)i/d}; the d-th roots of p are
 * kept symbolic as coefficient vectors over the basis p^{r/d},
 * 0 <= r < d, so exact identities like c = 4/3 are decidable.
 */
#pragma once

#include <functional>
#include <map>
#include <vector>

#include "hc/morphism.hpp"
#include "hc/rational.hpp"
#include "hc/resultant.hpp"

namespace hc {

/// Raised when an enumeration or refinement would visit more than the
/// hard cap of 1e7 classes.  The CLI maps this to exit code 4.
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A point of P^m(Z/q) in canonical form: the first coordinate that is
/// a unit is 1, earlier coordinates are non-units (CRT-combined across
/// the prime powers dividing q).
struct ProjPointModQ {
    Int q;
    std::vector<Int> coords;

    bool operator==(const ProjPointModQ& o) const { return q == o.q && coords == o.coords; }
    bool operator<(const ProjPointModQ& o) const {
        return q != o.q ? q < o.q : coords < o.coords;
    }
};

/// Reduction map of Def "scale to a tuple primitive mod q": picks the
/// scalar supported on primes dividing q, then canonicalizes.
/// Scale-invariant; rejects the zero tuple.
ProjPointModQ reduce_mod(std::span<const Rat> x, const Int& q);

/// Visits every point of P^m(Z/p^s) exactly once, as integral pivot
/// representatives in [0, p^s)^{m+1}: for pivot i the earlier
/// coordinates run over p(Z/p^s), coordinate i is 1.
void for_each_proj_point(unsigned m, const Int& p, unsigned s,
                         const std::function<void(std::span<const Int>)>& visit);

/// epsilon_{f,p}(x) = v_p(F(x)) for a normalized lift and a tuple that
/// is primitive mod p.  Rejects non-primitive input.
long excess_valuation(const NormalizedLift& F, const Int& p, std::span<const Int> x);

/// The distribution i -> delta_{f,p}(i) as exact rationals.
struct LocalDensityTable {
    Int p;
    unsigned depth = 0;             // deepest refinement level used
    std::map<long, Rat> weights;    // support of epsilon only

    Rat weight(long i) const {
        auto it = weights.find(i);
        return it == weights.end() ? Rat(0) : it->second;
    }
    /// ||epsilon||_infinity = max of the support.
    long sup_support() const { return weights.empty() ? 0 : weights.rbegin()->first; }
    Rat total() const {
        Rat t = 0;
        for (const auto& [i, w] : weights) t += w;
        return t;
    }
};

LocalDensityTable local_density(const CertifiedMorphism& f, const Int& p);

/// Test oracle: classify all of P^m(Z/p^s) at full depth s.
LocalDensityTable local_density_flat(const NormalizedLift& F, const Int& p, unsigned s);

/// c_{Q,p}(f) = sum_i delta(i) p^{(m+1)i/d}, held exactly over the
/// basis {p^{r/d} : 0 <= r < d}.
struct ExactLocalFactor {
    Int p;
    unsigned m = 0, d = 1;
    std::vector<std::pair<long, Rat>> terms;  // (i, delta(i))
    std::vector<Rat> radical;                 // value = sum_r radical[r] * p^{r/d}
    double float_value = 0;

    bool is_rational() const {
        for (size_t r = 1; r < radical.size(); ++r)
            if (radical[r] != 0) return false;
        return true;
    }
    /// Defined only when is_rational().
    Rat rational_value() const {
        if (!is_rational()) throw std::domain_error("local factor is irrational");
        return radical.empty() ? Rat(0) : radical[0];
    }
    bool operator==(const ExactLocalFactor& o) const {
        return p == o.p && m == o.m && d == o.d && radical == o.radical;
    }
};

/// (c_{Q,p}(f), mu_p(D_{f,p})); mu uses floor(i/d) in the exponent and
/// is always an exact rational <= c.
std::pair<ExactLocalFactor, Rat> local_factor(const LocalDensityTable& t, unsigned m, unsigned d);
std::pair<ExactLocalFactor, Rat> local_factor(const CertifiedMorphism& f, const Int& p);

/// Element of Q(p_1^{1/d}, ..., p_t^{1/d}) as a coefficient map over
/// the products prod p_k^{r_k/d}, 0 <= r_k < d.
class RadicalProduct {
public:
    RadicalProduct() : d_(1) { c_[{}] = Rat(1); }  // the empty product, exactly 1
    RadicalProduct(unsigned d, std::vector<Int> primes);

    static RadicalProduct one(unsigned d, std::vector<Int> primes);

    /// Adds w * prod p_k^{num_k / d} (numerators may exceed d; integer
    /// parts fold into the coefficient).
    void add_term(const std::vector<long>& numerators, const Rat& w);

    /// Multiplies by sum_i w_i * p^{(m+1) i / d} at one basis prime.
    void multiply_local(const ExactLocalFactor& lf);

    bool operator==(const RadicalProduct& o) const {
        return d_ == o.d_ && primes_ == o.primes_ && c_ == o.c_;
    }
    double to_double() const;
    bool is_rational() const;
    Rat rational_value() const;

    const std::vector<Int>& primes() const { return primes_; }
    const std::map<std::vector<unsigned>, Rat>& coefficients() const { return c_; }

private:
    unsigned d_;
    std::vector<Int> primes_;
    std::map<std::vector<unsigned>, Rat> c_;
};

/// c_{Q,0}(f) with its exact symbolic value, plus (C_f^0)^d.
struct NonarchConstant {
    std::vector<Int> bad_primes;
    std::vector<LocalDensityTable> tables;
    std::vector<ExactLocalFactor> locals;
    std::vector<Rat> mus;
    RadicalProduct exact;
    double value = 1.0;
    Int C0d = 1;  // prod over p of p^{||epsilon_p||}
};

NonarchConstant nonarch_constant(const CertifiedMorphism& f);

/// Density Formula: delta_f(l) = prod_p delta_{f,p}(v_p(l)), supported
/// on the finitely many products of local supports.
std::map<FactoredIdeal, Rat> global_densities(const CertifiedMorphism& f);

}  // namespace hc
