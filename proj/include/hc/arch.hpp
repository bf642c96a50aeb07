/**
 * @file arch.hpp
 * @brief Real-place computations: volumes of fundamental domains,
 *        kappa/R error constants, Green's functions, limiting domains.
 *
 * Every volume uses the sphere-radial reduction: the domains are
 * star-shaped about the origin and |F(ru)| = r^d |F(u)|, so an
 * (m+1)-dimensional indicator integral collapses to an integral of the
 * radial extent over S^m.  For m = 1 that integral is one-dimensional
 * and deterministic quadrature applies; otherwise sphere Monte Carlo
 * with counter-based per-sample seeding, so results are independent of
 * the thread schedule.
 */
#pragma once

#include <cstdint>
#include <string>

#include "hc/morphism.hpp"
#include "hc/resultant.hpp"

namespace hc {

struct ArchConfig {
    double quad_tol = 1e-8;        // absolute target, m = 1 quadrature
    long mc_samples = 1'000'000;   // sphere Monte Carlo sample count
    std::uint64_t seed = 0x5EED;
    int green_iters = 60;          // Green's function iteration depth
    int exact_iters = 3;           // exact compositions for |F-hat o G|
    bool threshold_from_limit = false;  // estimate |F-hat o G| instead of 1
    bool parallel = true;          // serial twin kept as the test reference
};

struct ArchEstimate {
    double value = 0;
    double error = 0;  // half-width: quadrature residual or 3-sigma CLT
    std::string method;
    long samples_or_panels = 0;
    std::uint64_t seed = 0;
};

/// mu(D_{f,infinity}) where D = {z in R^{m+1} : |F(z)| <= |F|}.
ArchEstimate arch_volume(const CertifiedMorphism& f, const ArchConfig& cfg);

/// kappa = min over the Euclidean unit sphere of |F(u)|^{1/d} and
/// C_inf = |F|^{1/d} / kappa = sup of the Euclidean norm over D.
/// The *_safe pair is a certified bracket (cube-face grid with a
/// Lipschitz margin) used wherever an under-estimate must be excluded.
struct ErrorConstants {
    double kappa_inf = 0;
    double C_inf = 0;
    double kappa_lower = 0;  // certified kappa >= kappa_lower > 0
    double C_inf_upper = 0;  // certified C_inf <= C_inf_upper
    Int C0d = 1;             // (C_f^0)^d, filled from the nonarchimedean side
};

ErrorConstants error_constants(const CertifiedMorphism& f);

struct GreenValue {
    double value = 0;
    double cauchy_gap = 0;
};

/// G_{F,infinity}(x) = lim log|F^i(x)| / d^i by renormalized iteration;
/// requires an endomorphism of degree >= 2 and x != 0.
GreenValue green_arch(const HomogeneousLift& F, std::span<const double> x, int iters);

/// Volume of {z : exp G_F(G(z)) <= T}, T = 1 by default or the
/// estimated |F-hat o G| when cfg.threshold_from_limit is set.
ArchEstimate limiting_arch_factor(const CertifiedMorphism& f, const HomogeneousLift& G,
                                  const ArchConfig& cfg);

/// |F^i o G|^{1/d^i} after cfg.exact_iters exact compositions, with the
/// last log-increment as Cauchy gap.
std::pair<double, double> map_height_limit(const HomogeneousLift& F, const HomogeneousLift& G,
                                           int exact_iters);

/// Deterministic counter-based RNG: the n-th draw of a stream depends
/// only on (seed, n).
std::uint64_t splitmix64(std::uint64_t x);

/// Point of S^m in R^{m+1} from (seed, index), Gaussian-normalized.
std::vector<double> sphere_point(unsigned m, std::uint64_t seed, std::uint64_t index);

/// Surface area of the unit sphere S^m in R^{m+1}.
double sphere_area(unsigned m);

}  // namespace hc
