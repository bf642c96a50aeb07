/**
 * @file resultant.hpp
 * @brief Elimination theory for lifts: Sylvester maps, Macaulay-degree
 *        matrices, v_p(Res f), good reduction, pseudoinverses.
 *
 * The resultant valuation of a normalized lift at p is the minimal
 * p-valuation among the maximal minors of the Sylvester matrix in the
 * Macaulay degree D_0 = (m+1)(d-1)+1.  We never enumerate minors: the
 * gcd of the maximal minors equals the product of the Smith normal form
 * invariant factors, and the p-valuation of a gcd is the minimum over
 * the set.
 */
#pragma once

#include <optional>
#include <vector>

#include "hc/morphism.hpp"
#include "hc/rational.hpp"

namespace hc {

/// Matrix of the Sylvester map A |-> sum A_j F_j in a fixed degree D.
/// Rows are monomials X^gamma with |gamma| = D in graded-lex order;
/// columns are pairs (beta, j), j-major, |beta| = D - d.
struct SylvesterMatrix {
    unsigned D = 0;
    size_t nrows = 0, ncols = 0;
    std::vector<Multiindex> row_index;                       // |gamma| = D
    std::vector<std::pair<Multiindex, unsigned>> col_index;  // (beta, j)
    std::vector<Int> entries;                                // row-major

    const Int& at(size_t r, size_t c) const { return entries[r * ncols + c]; }
    Int& at(size_t r, size_t c) { return entries[r * ncols + c]; }
};

/// Macaulay's bound D_0 = (m+1)(d-1) + 1.
unsigned long macaulay_bound(unsigned m, unsigned d);

SylvesterMatrix sylvester_matrix(const NormalizedLift& F, unsigned D);

/// Product of the Smith invariant factors of an integer matrix with
/// nrows <= ncols; 0 when the matrix is row-rank deficient.  Equals the
/// gcd of all maximal minors up to sign.
Int smith_invariant_product(std::vector<Int> a, size_t nrows, size_t ncols);

struct ResultantData {
    Int invariant_factor_product;  // 0 iff not a morphism
    FactoredIdeal res_ideal;       // factor(invariant_factor_product) for a normalized lift
    bool is_morphism = false;
};

/// Normalizes F, builds the Macaulay-degree matrix, reads off Res f.
ResultantData resultant_data(const HomogeneousLift& F);

/// v_p(Res f) = 0 (Sylvester matrix stays full-rank mod p).
bool has_good_reduction(const HomogeneousLift& F, const Int& p);

/// An (m+1) x (M+1) matrix of forms G_ij of degree e-d with
/// sum_j G_ij F_j = X_i^e.
struct PseudoInverse {
    unsigned long e = 0;
    std::vector<std::vector<TermMap>> entries;  // [i][j]
};

/// Solves the Sylvester system in degree e; empty when insoluble.
std::optional<PseudoInverse> pseudoinverse(const NormalizedLift& F, unsigned long e);

/// First e in d..macaulay_bound admitting a pseudoinverse.  Succeeds at
/// the bound whenever F lifts a morphism.
std::optional<PseudoInverse> find_pseudoinverse(const NormalizedLift& F);

/// ceil(N^{b/2} H(f)^r) with r = C((m+1)d, m), b = C(md, m),
/// s = ceil(r/b), N the product of the s largest per-form term counts.
/// Nm Res f never exceeds it.
Int resultant_norm_bound(const NormalizedLift& F);

/// A lift certified to define a morphism, with its resultant data.
/// The constructor rejects non-morphisms.
struct CertifiedMorphism {
    NormalizedLift F;
    ResultantData res;

    explicit CertifiedMorphism(const HomogeneousLift& lift);

    const HomogeneousLift& operator*() const { return F.lift; }
    const HomogeneousLift* operator->() const { return &F.lift; }
};

/// Thrown when an operation requiring a morphism receives a lift whose
/// Macaulay-degree matrix is rank deficient.
struct NonMorphismError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace hc
