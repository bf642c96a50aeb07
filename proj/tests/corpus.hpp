// Shared corpus of lifts used across the test suites: a spread of
// morphisms (power maps, Chebyshev, univariate rationals with one and
// two bad primes, higher-dimensional maps) plus known non-morphisms.
#pragma once

#include <string>
#include <vector>

#include "hc/morphism.hpp"

namespace hc_test {

struct NamedLift {
    std::string name;
    hc::HomogeneousLift lift;
};

// build a lift on P^m from per-form coefficient lists over the
// graded-lex monomials of degree d
inline hc::HomogeneousLift lift_from_rows(unsigned m, unsigned d,
                                          std::vector<std::vector<long>> rows) {
    hc::HomogeneousLift F;
    F.m = m;
    F.M = static_cast<unsigned>(rows.size()) - 1;
    F.d = d;
    auto monos = hc::multiindices_of_degree(m + 1, d);
    for (const auto& row : rows) {
        hc::TermMap f;
        for (size_t i = 0; i < row.size(); ++i)
            if (row[i] != 0) f.emplace(monos[i], hc::Rat(row[i]));
        F.forms.push_back(std::move(f));
    }
    return F;
}

inline std::vector<NamedLift> corpus_morphisms() {
    using hc::lift_from_spec;
    std::vector<NamedLift> out = {
        {"id", lift_from_spec("id:1")},
        {"power(1,2)", lift_from_spec("power:1,2")},
        {"power(1,3)", lift_from_spec("power:1,3")},
        {"power(2,2)", lift_from_spec("power:2,2")},
        {"power(3,2)", lift_from_spec("power:3,2")},
        {"chebyshev(2)", lift_from_spec("chebyshev:2")},
        {"chebyshev(3)", lift_from_spec("chebyshev:3")},
        {"chebyshev(4)", lift_from_spec("chebyshev:4")},
        {"s", lift_from_spec("rat:(z^2-1)|(2z)")},
        {"z^2+1", lift_from_spec("rat:(z^2+1)|1")},
        {"(z^2+4)/(z^2+1)", lift_from_spec("rat:(z^2+4)|(z^2+1)")},
        {"2z^2+1", lift_from_spec("rat:(2z^2+1)|1")},
        {"3z^2+1", lift_from_spec("rat:(3z^2+1)|1")},
        {"2z^3+1", lift_from_spec("rat:(2z^3+1)|1")},
        {"5z^3+1", lift_from_spec("rat:(5z^3+1)|1")},
        {"6z^2+1", lift_from_spec("rat:(6z^2+1)|1")},   // bad at 2 and 3
        {"10z^2+1", lift_from_spec("rat:(10z^2+1)|1")}, // bad at 2 and 5
        {"z^3/(3z^2+2)", lift_from_spec("rat:(z^3)|(3z^2+2)")},
        {"mincrit", lift_from_rows(1, 2, {{1, 0, 2}, {3, 0, 0}, {5, 0, 0}})},
        {"quad19", lift_from_rows(1, 2, {{1, 0, 4}, {1, 0, 1}})},
        {"nonult", lift_from_rows(1, 2, {{2, 1, 0}, {0, 1, 2}})},
        {"p2mixed", lift_from_rows(2, 2, {{1, 0, 0, 0, 1, 0}, {0, 0, 0, 1, 0, 0},
                                          {0, 0, 0, 0, 0, 1}})},
    };
    return out;
}

inline std::vector<NamedLift> corpus_non_morphisms() {
    return {
        {"monomial-cremona", lift_from_rows(2, 2, {{0, 1, 0, 0, 0, 0},
                                                   {0, 0, 0, 0, 1, 0},
                                                   {0, 0, 1, 0, 0, 0}})},
        {"shared-zero", lift_from_rows(1, 2, {{1, 0, 0}, {0, 1, 0}})},
    };
}

// the ternary quadric triple with v_2(Res) = 9
inline hc::HomogeneousLift ternary_quadrics() {
    return lift_from_rows(2, 2,
                          {{1, -1, 1, -1, 1, -1},
                           {1, 1, 1, 1, -1, 1},
                           {1, 1, 1, -1, -1, 1}});
}

}  // namespace hc_test
