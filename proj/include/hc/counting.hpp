/**
 * @file counting.hpp
 * @brief Brute-force enumeration of P^m(Q) by height and the empirical
 *        counting functions the predicted constants are checked against.
 *
 * Counting kernels come in pairs: an OpenMP version partitioned over
 * the leading coordinate with a commutative reduction, and a serial
 * reference used as the oracle in tests and by the benchmark target.
 * Counts are exact integers; no floats enter a pullback count.
 */
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hc/arch.hpp"
#include "hc/constants.hpp"
#include "hc/morphism.hpp"
#include "hc/resultant.hpp"

namespace hc {

/// Point of P^m(Q) as a primitive integer tuple, last nonzero
/// coordinate positive.
struct ProjPointQ {
    std::vector<Int> coords;

    bool operator==(const ProjPointQ& o) const { return coords == o.coords; }
    bool operator<(const ProjPointQ& o) const { return coords < o.coords; }
};

/// Canonicalizes a nonzero integer tuple (divide by content, fix sign).
ProjPointQ make_proj_point(std::vector<Int> raw);

/// H(P) = max |coordinate| of the canonical representative.
Int height(const ProjPointQ& P);

/// Visits every P with H(P) <= B exactly once (serial reference).
void enumerate_points(unsigned m, long B, const std::function<void(const ProjPointQ&)>& visit);

/// Number of points with H(P) <= B; serial and OpenMP kernels.
long long count_points_serial(unsigned m, long B);
long long count_points(unsigned m, long B);

struct CountRow {
    double X = 0;
    long long count = 0;
    double predicted = 0;  // c * X^exponent (NaN when no constant is supplied)
    double ratio = 0;      // count / X^exponent
    long long flagged_boundary = 0;  // canonical mode only
};

/// Covering radius: H(f(P)) <= X implies H(P) <= B, via
/// B = ceil((X * C0d / H(f))^{1/d} * C_inf_upper).  Conservative.
long pullback_radius(const CertifiedMorphism& f, const ErrorConstants& ec, double X);

/// #{P : H(f(P)) <= X}, exact.  The OpenMP kernel partitions on the
/// leading coordinate; the serial twin is the test oracle.
long long count_pullback_raw(const CertifiedMorphism& f, double X, long B);
long long count_pullback_raw_serial(const CertifiedMorphism& f, double X, long B);
CountRow count_pullback(const CertifiedMorphism& f, double X,
                        std::optional<double> predicted_constant = std::nullopt);

/// #{distinct f(P) : H(f(P)) <= X}, exact by canonical dedup.
long long count_image_raw(const CertifiedMorphism& f, double X, long B);
CountRow count_image(const CertifiedMorphism& f, double X,
                     std::optional<unsigned> gamma = std::nullopt,
                     std::optional<double> predicted_constant = std::nullopt);

/// #{P : exp h-hat_f(P) <= X} with points within their error bar of the
/// threshold reported separately as flagged_boundary.
CountRow count_canonical(const CertifiedMorphism& f, double X, const CanonicalHeightParams& params,
                         std::optional<double> predicted_constant = std::nullopt);

enum class CountMode { pullback, image, canonical };

/// One CountRow per X, with predictions filled in from the assembled
/// constant (pullback), its gamma quotient (image), or the limiting
/// constant estimate (canonical).
std::vector<CountRow> convergence_report(const CertifiedMorphism& f, const std::vector<double>& Xs,
                                         CountMode mode, const ArchConfig& cfg,
                                         std::optional<unsigned> gamma = std::nullopt);

/// H(f(P)) as an exact rational: max|F(x)| / content(F(x)) over the
/// primitive lift.
Rat pullback_height(const CertifiedMorphism& f, const ProjPointQ& P);

}  // namespace hc
