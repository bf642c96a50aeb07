/**
 * @file constants.hpp
 * @brief Assembly of the leading constant c_Q(f), zeta values, canonical
 *        heights, and the limit of c_Q(f^i o g) along iterates.
 *
 * Over Q the constant splits as
 *     c_Q(f) = 1/(2 zeta(m+1)) * arch * nonarch / H(f)^{(m+1)/d};
 * the archimedean factor carries a quadrature or Monte Carlo error bar,
 * everything else is exact.  Canonical heights run the orbit in
 * primitive-integer form, so all finite-place contributions are exact
 * and only the archimedean tail is estimated.
 */
#pragma once

#include "hc/arch.hpp"
#include "hc/morphism.hpp"
#include "hc/padic.hpp"
#include "hc/rational.hpp"
#include "hc/resultant.hpp"

namespace hc {

struct ZetaValue {
    double value = 0;
    double error = 0;
};

/// zeta(s) for integer s >= 2: closed forms at even s <= 12, otherwise
/// 1e4 series terms with an Euler-Maclaurin tail below 1e-12.
ZetaValue zeta_int(unsigned s);

struct ConstantReport {
    unsigned m = 0, d = 1;
    ZetaValue zeta;           // zeta(m+1)
    double prefactor = 0;     // 1/(2 zeta(m+1))
    ArchEstimate arch;        // c_{Q,infinity}(f)
    NonarchConstant nonarch;  // c_{Q,0}(f), exact
    Int height = 1;           // H(f)
    double height_power = 1;  // H(f)^{(m+1)/d}
    double c_value = 0;
    double c_error = 0;
};

ConstantReport assemble_constant(const CertifiedMorphism& f, const ArchConfig& cfg);

struct CanonicalHeightParams {
    int exact_iters = 8;    // orbit steps in exact integer arithmetic
    int green_iters = 60;
    long max_coord_bits = 8192;  // orbit growth guard
    double log_C0d = -1.0;  // log (C_f^0)^d; negative means "compute"
};

struct CanonicalHeightEstimate {
    double value = 0;   // h-hat_f(P), the logarithmic canonical height
    double error = 0;
    int iterations = 0;  // exact orbit steps actually taken
};

/// h-hat_f(P) for a point given by any nonzero rational-integer lift.
CanonicalHeightEstimate canonical_height(const CertifiedMorphism& f, std::span<const Int> coords,
                                         const CanonicalHeightParams& params);

struct ChatSequence {
    std::vector<ConstantReport> entries;  // c_Q(f^i o g), i = 0..k
    ArchEstimate limiting_arch;           // mu{z : exp G_F(G(z)) <= 1}
    double nonarch_limit = 1.0;           // stabilized nonarchimedean product
    bool nonarch_stabilized = false;      // last two iterates agree exactly
    double chat_estimate = 0;             // prefactor * limiting_arch * nonarch_limit
    double chat_error = 0;
};

/// The sequence c_Q(f^i o g) for i = 0..k together with the
/// limiting-factor shortcut.  Composition growth is capped at k <= 5.
ChatSequence chat_sequence(const CertifiedMorphism& f, const HomogeneousLift& G, unsigned k,
                           const ArchConfig& cfg);

}  // namespace hc
