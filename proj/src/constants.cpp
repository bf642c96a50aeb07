#include "hc/constants.hpp"

#include <cmath>
#include <numbers>

namespace hc {

ZetaValue zeta_int(unsigned s) {
    if (s < 2) throw std::invalid_argument("zeta_int: s must be >= 2");
    const double pi = std::numbers::pi;
    switch (s) {
        case 2: return {pi * pi / 6.0, 0.0};
        case 4: return {std::pow(pi, 4) / 90.0, 0.0};
        case 6: return {std::pow(pi, 6) / 945.0, 0.0};
        case 8: return {std::pow(pi, 8) / 9450.0, 0.0};
        case 10: return {std::pow(pi, 10) / 93555.0, 0.0};
        case 12: return {691.0 * std::pow(pi, 12) / 638512875.0, 0.0};
        default: break;
    }
    const unsigned long N = 10'000;
    double sum = 0;
    for (unsigned long n = N; n >= 1; --n) sum += std::pow(static_cast<double>(n), -static_cast<double>(s));
    // Euler-Maclaurin tail: N^{1-s}/(s-1) - N^{-s}/2 + s N^{-s-1}/12,
    // remainder below s^3 N^{-s-3} < 1e-12 for N = 1e4, s >= 3
    double Nd = static_cast<double>(N);
    double tail = std::pow(Nd, 1.0 - s) / (s - 1.0) - std::pow(Nd, -static_cast<double>(s)) / 2.0 +
                  s * std::pow(Nd, -static_cast<double>(s) - 1.0) / 12.0;
    return {sum + tail, 1e-12};
}

ConstantReport assemble_constant(const CertifiedMorphism& f, const ArchConfig& cfg) {
    ConstantReport r;
    r.m = f->m;
    r.d = f->d;
    r.zeta = zeta_int(r.m + 1);
    r.prefactor = 1.0 / (2.0 * r.zeta.value);
    r.arch = arch_volume(f, cfg);
    r.nonarch = nonarch_constant(f);
    r.height = height_of_map(*f);
    r.height_power = std::pow(r.height.get_d(), static_cast<double>(r.m + 1) / r.d);
    r.c_value = r.prefactor * r.arch.value * r.nonarch.value / r.height_power;
    double rel = 0;
    if (r.arch.value > 0) rel += r.arch.error / r.arch.value;
    if (r.zeta.value > 0) rel += r.zeta.error / r.zeta.value;
    r.c_error = std::abs(r.c_value) * rel;
    return r;
}

CanonicalHeightEstimate canonical_height(const CertifiedMorphism& f, std::span<const Int> coords,
                                         const CanonicalHeightParams& params) {
    const HomogeneousLift& F = *f;
    if (F.m != F.M) throw std::invalid_argument("canonical_height: not an endomorphism");
    if (F.d < 2) throw std::invalid_argument("canonical_height: degree must be >= 2");
    std::vector<Int> x(coords.begin(), coords.end());
    Int content = 0;
    for (const Int& c : x) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    if (content == 0) throw std::invalid_argument("canonical_height: zero point");
    for (Int& c : x) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());

    // exact primitive orbit; each content division is a finite-place
    // contribution captured exactly
    int k = 0;
    for (; k < params.exact_iters; ++k) {
        size_t bits = 0;
        for (const Int& c : x) bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
        if (static_cast<long>(bits) * static_cast<long>(F.d) > params.max_coord_bits) break;
        x = evaluate_int(F, x);
        Int g = 0;
        for (const Int& c : x) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        for (Int& c : x) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    }

    // archimedean tail from the last exact iterate, via log-scaling
    Int maxc = 0;
    for (const Int& c : x)
        if (mpz_cmpabs(c.get_mpz_t(), maxc.get_mpz_t()) > 0) maxc = abs(c);
    signed long exp2;
    double mant = mpz_get_d_2exp(&exp2, maxc.get_mpz_t());
    double log_norm = std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
    std::vector<double> z(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        Rat r(x[i], maxc);
        r.canonicalize();
        z[i] = r.get_d();
    }
    GreenValue g = green_arch(F, z, params.green_iters);

    double log_C0d = params.log_C0d;
    if (log_C0d < 0) {
        NonarchConstant nc = nonarch_constant(f);
        signed long e2;
        double m2 = mpz_get_d_2exp(&e2, nc.C0d.get_mpz_t());
        log_C0d = std::log(m2) + static_cast<double>(e2) * std::numbers::ln2;
    }

    double dk = std::pow(static_cast<double>(F.d), k);
    CanonicalHeightEstimate out;
    out.value = (g.value + log_norm) / dk;
    out.error = g.cauchy_gap / dk + log_C0d / (dk * (F.d - 1));
    out.iterations = k;
    return out;
}

ChatSequence chat_sequence(const CertifiedMorphism& f, const HomogeneousLift& G, unsigned k,
                           const ArchConfig& cfg) {
    const HomogeneousLift& F = *f;
    if (F.d < 2) throw std::invalid_argument("chat_sequence: degree of f must be >= 2");
    if (G.M != F.m) throw std::invalid_argument("chat_sequence: g must map into the space of f");
    if (k > 5) throw std::invalid_argument("chat_sequence: k exceeds the composition cap of 5");

    ChatSequence out;
    HomogeneousLift H = G;
    for (unsigned i = 0; i <= k; ++i) {
        CertifiedMorphism ci(H);
        out.entries.push_back(assemble_constant(ci, cfg));
        if (i < k) H = compose(F, H);
    }
    out.limiting_arch = limiting_arch_factor(f, G, cfg);

    // the nonarchimedean factors stabilize exactly once density tables repeat
    const NonarchConstant& last = out.entries.back().nonarch;
    out.nonarch_limit = last.value;
    if (out.entries.size() >= 2) {
        const NonarchConstant& prev = out.entries[out.entries.size() - 2].nonarch;
        bool both_rational = last.exact.is_rational() && prev.exact.is_rational();
        if (both_rational)
            out.nonarch_stabilized = last.exact.rational_value() == prev.exact.rational_value();
        else
            out.nonarch_stabilized = std::abs(last.value - prev.value) <= 1e-12 * std::abs(last.value);
    }

    double prefactor = out.entries.front().prefactor;
    out.chat_estimate = prefactor * out.limiting_arch.value * out.nonarch_limit;
    out.chat_error = prefactor * out.limiting_arch.error * out.nonarch_limit;
    return out;
}

}  // namespace hc
