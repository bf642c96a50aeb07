#include "hc/resultant.hpp"

#include <algorithm>
#include <functional>

namespace hc {

unsigned long macaulay_bound(unsigned m, unsigned d) {
    if (d < 1) throw std::invalid_argument("macaulay_bound: degree must be >= 1");
    return static_cast<unsigned long>(m + 1) * (d - 1) + 1;
}

SylvesterMatrix sylvester_matrix(const NormalizedLift& F, unsigned D) {
    const HomogeneousLift& L = *F;
    if (D < L.d) throw std::invalid_argument("sylvester_matrix: D must be >= d");
    SylvesterMatrix S;
    S.D = D;
    S.row_index = multiindices_of_degree(L.m + 1, D);
    std::vector<Multiindex> betas = multiindices_of_degree(L.m + 1, D - L.d);
    for (unsigned j = 0; j <= L.M; ++j)
        for (const Multiindex& b : betas) S.col_index.emplace_back(b, j);
    S.nrows = S.row_index.size();
    S.ncols = S.col_index.size();
    S.entries.assign(S.nrows * S.ncols, Int(0));
    // row lookup by monomial
    std::map<Multiindex, size_t, GradedLex> row_of;
    for (size_t r = 0; r < S.nrows; ++r) row_of.emplace(S.row_index[r], r);
    for (size_t c = 0; c < S.ncols; ++c) {
        const auto& [beta, j] = S.col_index[c];
        for (const auto& [alpha, coeff] : L.forms[j]) {
            size_t r = row_of.at(alpha + beta);
            S.at(r, c) = Int(coeff.get_num());  // normalized: denominators are 1
        }
    }
    return S;
}

Int smith_invariant_product(std::vector<Int> a, size_t nrows, size_t ncols) {
    if (nrows > ncols)
        throw std::invalid_argument("smith_invariant_product: expected nrows <= ncols");
    auto at = [&](size_t r, size_t c) -> Int& { return a[r * ncols + c]; };
    Int product = 1;
    size_t k = 0;
    for (; k < nrows; ++k) {
        // locate a minimal nonzero pivot in the trailing block
        size_t pr = k, pc = k;
        bool found = false;
        for (size_t r = k; r < nrows; ++r)
            for (size_t c = k; c < ncols; ++c) {
                if (at(r, c) == 0) continue;
                if (!found || mpz_cmpabs(at(r, c).get_mpz_t(), at(pr, pc).get_mpz_t()) < 0) {
                    pr = r;
                    pc = c;
                    found = true;
                }
            }
        if (!found) return 0;  // rank < nrows
        if (pr != k)
            for (size_t c = 0; c < ncols; ++c) std::swap(at(k, c), at(pr, c));
        if (pc != k)
            for (size_t r = 0; r < nrows; ++r) std::swap(at(r, k), at(r, pc));
        // clear row and column k; re-pivot whenever a remainder survives
        bool clean = false;
        while (!clean) {
            clean = true;
            for (size_t r = k + 1; r < nrows; ++r) {
                if (at(r, k) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), at(r, k).get_mpz_t(), at(k, k).get_mpz_t());
                for (size_t c = k; c < ncols; ++c) at(r, c) -= q * at(k, c);
            }
            for (size_t c = k + 1; c < ncols; ++c) {
                if (at(k, c) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), at(k, c).get_mpz_t(), at(k, k).get_mpz_t());
                for (size_t r = k; r < nrows; ++r) at(r, c) -= q * at(r, k);
            }
            // smaller residue anywhere in row/column k forces another pass
            for (size_t r = k + 1; r < nrows && clean; ++r)
                if (at(r, k) != 0) clean = false;
            for (size_t c = k + 1; c < ncols && clean; ++c)
                if (at(k, c) != 0) clean = false;
            if (!clean) {
                size_t br = k, bc = k;
                for (size_t r = k; r < nrows; ++r)
                    for (size_t c = k; c < ncols; ++c)
                        if (at(r, c) != 0 && mpz_cmpabs(at(r, c).get_mpz_t(), at(br, bc).get_mpz_t()) < 0) {
                            br = r;
                            bc = c;
                        }
                if (br != k)
                    for (size_t c = 0; c < ncols; ++c) std::swap(at(k, c), at(br, c));
                if (bc != k)
                    for (size_t r = 0; r < nrows; ++r) std::swap(at(r, k), at(r, bc));
            }
        }
        product *= at(k, k);
    }
    return abs(product);
}

ResultantData resultant_data(const HomogeneousLift& F) {
    NormalizedLift N = normalize(F);
    unsigned long D0 = macaulay_bound(N->m, N->d);
    SylvesterMatrix S = sylvester_matrix(N, static_cast<unsigned>(D0));
    ResultantData out;
    out.invariant_factor_product = smith_invariant_product(S.entries, S.nrows, S.ncols);
    out.is_morphism = out.invariant_factor_product != 0;
    if (out.is_morphism && out.invariant_factor_product != 1)
        out.res_ideal = factor(out.invariant_factor_product);
    return out;
}

bool has_good_reduction(const HomogeneousLift& F, const Int& p) {
    ResultantData rd = resultant_data(F);
    if (!rd.is_morphism) throw NonMorphismError("has_good_reduction: not a morphism");
    return val_p(rd.invariant_factor_product, p) == Val(0);
}

std::optional<PseudoInverse> pseudoinverse(const NormalizedLift& F, unsigned long e) {
    const HomogeneousLift& L = *F;
    if (e < L.d) throw std::invalid_argument("pseudoinverse: e must be >= d");
    SylvesterMatrix S = sylvester_matrix(F, static_cast<unsigned>(e));
    const size_t R = S.nrows, C = S.ncols, m1 = L.m + 1;
    // augmented system [A | X_0^e ... X_m^e], solved by exact row reduction
    std::vector<Rat> A(R * (C + m1), Rat(0));
    auto at = [&](size_t r, size_t c) -> Rat& { return A[r * (C + m1) + c]; };
    for (size_t r = 0; r < R; ++r)
        for (size_t c = 0; c < C; ++c) at(r, c) = Rat(S.at(r, c));
    for (size_t i = 0; i < m1; ++i) {
        Multiindex xi;
        xi.e.assign(m1, 0);
        xi.e[i] = static_cast<unsigned>(e);
        auto it = std::find(S.row_index.begin(), S.row_index.end(), xi);
        at(static_cast<size_t>(it - S.row_index.begin()), C + i) = 1;
    }
    std::vector<size_t> pivot_col_of_row(R, SIZE_MAX);
    size_t rank = 0;
    for (size_t c = 0; c < C && rank < R; ++c) {
        size_t pr = SIZE_MAX;
        for (size_t r = rank; r < R; ++r)
            if (at(r, c) != 0) {
                pr = r;
                break;
            }
        if (pr == SIZE_MAX) continue;
        if (pr != rank)
            for (size_t cc = 0; cc < C + m1; ++cc) std::swap(at(pr, cc), at(rank, cc));
        Rat inv = 1 / at(rank, c);
        for (size_t cc = c; cc < C + m1; ++cc) at(rank, cc) *= inv;
        for (size_t r = 0; r < R; ++r) {
            if (r == rank || at(r, c) == 0) continue;
            Rat f = at(r, c);
            for (size_t cc = c; cc < C + m1; ++cc) at(r, cc) -= f * at(rank, cc);
        }
        pivot_col_of_row[rank] = c;
        ++rank;
    }
    // consistency: a zero A-row with a nonzero target is unreachable
    for (size_t r = rank; r < R; ++r)
        for (size_t i = 0; i < m1; ++i)
            if (at(r, C + i) != 0) return std::nullopt;
    PseudoInverse G;
    G.e = e;
    G.entries.assign(m1, std::vector<TermMap>(L.M + 1));
    for (size_t r = 0; r < rank; ++r) {
        const auto& [beta, j] = S.col_index[pivot_col_of_row[r]];
        for (size_t i = 0; i < m1; ++i) {
            const Rat& v = at(r, C + i);
            if (v != 0) G.entries[i][j].emplace(beta, v);
        }
    }
    return G;
}

std::optional<PseudoInverse> find_pseudoinverse(const NormalizedLift& F) {
    unsigned long bound = macaulay_bound(F->m, F->d);
    for (unsigned long e = F->d; e <= bound; ++e)
        if (auto G = pseudoinverse(F, e)) return G;
    return std::nullopt;
}

Int resultant_norm_bound(const NormalizedLift& F) {
    const HomogeneousLift& L = *F;
    unsigned long r = binomial(static_cast<unsigned long>(L.m + 1) * L.d, L.m).get_ui();
    unsigned long b = binomial(static_cast<unsigned long>(L.m) * L.d, L.m).get_ui();
    unsigned long s = (r + b - 1) / b;
    std::vector<unsigned long> counts;
    for (const TermMap& f : L.forms) counts.push_back(f.size());
    std::sort(counts.rbegin(), counts.rend());
    Int N = 1;
    for (unsigned long i = 0; i < s && i < counts.size(); ++i) N *= Int(counts[i]);
    Int H = height_of_map(L);
    // ceil( sqrt(N^b * H^{2r}) )
    Int t;
    mpz_pow_ui(t.get_mpz_t(), N.get_mpz_t(), b);
    Int h2r;
    mpz_pow_ui(h2r.get_mpz_t(), H.get_mpz_t(), 2 * r);
    t *= h2r;
    Int root, rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), t.get_mpz_t());
    if (rem != 0) root += 1;
    return root;
}

CertifiedMorphism::CertifiedMorphism(const HomogeneousLift& lift)
    : F(normalize(lift)), res(resultant_data(lift)) {
    if (!res.is_morphism)
        throw NonMorphismError("lift " + lift_to_string(lift) +
                               " is not a morphism (all maximal minors vanish)");
}

}  // namespace hc
