/**
 * @file morphism.hpp
 * @brief Homogeneous lifts F = (F_0,...,F_M) of morphisms P^m -> P^M over Q.
 *
 * A lift is stored sparsely: one term-map per coordinate form, keyed by
 * multiindex in graded-lex order.  All algebra is exact.  Normalization
 * scales a lift to coprime integer coefficients with a positive leading
 * coefficient, which is the representative every downstream valuation
 * computation assumes.
 */
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hc/rational.hpp"

namespace hc {

/// Exponent vector of a monomial X_0^{a_0} ... X_m^{a_m}.
struct Multiindex {
    std::vector<unsigned> e;

    unsigned long degree() const {
        unsigned long d = 0;
        for (unsigned x : e) d += x;
        return d;
    }

    bool operator==(const Multiindex& o) const { return e == o.e; }

    /// a <= b in the product order (a divides b as monomials).
    bool divides(const Multiindex& o) const {
        if (e.size() != o.e.size()) return false;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }

    Multiindex operator+(const Multiindex& o) const;
    Multiindex operator-(const Multiindex& o) const;  // requires o.divides(*this)
};

/// Graded lexicographic order: by degree, then lex on exponents.
struct GradedLex {
    bool operator()(const Multiindex& a, const Multiindex& b) const {
        unsigned long da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.e > b.e;  // X_0-first within a degree
    }
};

/// All multiindices of length n and degree exactly d, graded-lex sorted.
std::vector<Multiindex> multiindices_of_degree(unsigned n, unsigned long d);

using TermMap = std::map<Multiindex, Rat, GradedLex>;

struct HomogeneousLift {
    unsigned m = 0;  // domain dimension (m+1 variables)
    unsigned M = 0;  // codomain dimension (M+1 forms)
    unsigned d = 1;  // common degree of the forms
    std::vector<TermMap> forms;

    /// Throws unless every term has degree d, sizes match, and some
    /// coefficient is nonzero.
    void validate() const;
};

/// A lift with integer coefficients of joint content 1, first nonzero
/// coefficient positive.  Construct via normalize().
struct NormalizedLift {
    HomogeneousLift lift;

    const HomogeneousLift& operator*() const { return lift; }
    const HomogeneousLift* operator->() const { return &lift; }
};

std::vector<Rat> evaluate(const HomogeneousLift& F, std::span<const Rat> x);
std::vector<Int> evaluate_int(const HomogeneousLift& F, std::span<const Int> x);
std::vector<double> evaluate_double(const HomogeneousLift& F, std::span<const double> x);
/// Allocation-free variant for hot loops; resizes out as needed.
void evaluate_double_into(const HomogeneousLift& F, std::span<const double> x,
                          std::vector<double>& out);

NormalizedLift normalize(const HomogeneousLift& F);

/// (F o G)_j = F_j(G_0,...,G_{m_F}); degree d_F * d_G.
HomogeneousLift compose(const HomogeneousLift& F, const HomogeneousLift& G);

/// H(f): max |coefficient| of the normalized lift; lift-independent.
Int height_of_map(const HomogeneousLift& F);

/// max |coefficient| of the lift as given (the ∞-norm |F|).
Rat sup_norm(const HomogeneousLift& F);

// standard constructors
HomogeneousLift power_map(unsigned m, unsigned d);
HomogeneousLift identity_map(unsigned m);
HomogeneousLift chebyshev_lift(unsigned d);

/// Lift of the rational function P(z)/Q(z) on P^1, homogenized to the
/// common degree max(deg P, deg Q).  Rejects a nontrivial common factor.
HomogeneousLift from_univariate(const std::vector<Rat>& P, const std::vector<Rat>& Q);

/// f^i (i-fold self-composition); i = 0 is the identity on P^m.
HomogeneousLift iterate_map(const HomogeneousLift& F, unsigned i);

// --- serialization ----------------------------------------------------

/// Morphism JSON: {"m":..,"M":..,"d":..,"forms":[[{"exps":[..],"coeff":"a/b"},..],..]}
std::string lift_to_json(const HomogeneousLift& F);
HomogeneousLift lift_from_json(const std::string& json_text);

/// Builder shorthand: "power:m,d", "chebyshev:d", "rat:P(z)|Q(z)", "id:m",
/// or a path to a JSON file.
HomogeneousLift lift_from_spec(const std::string& spec);

/// Univariate integer-coefficient polynomial like "z^2 - 2z + 1".
/// Returns coefficients in degree-ascending order.
std::vector<Rat> parse_poly(const std::string& text);

std::string lift_to_string(const HomogeneousLift& F);  // human-readable forms

}  // namespace hc
