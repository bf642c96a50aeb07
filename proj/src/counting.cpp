#include "hc/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hc {

ProjPointQ make_proj_point(std::vector<Int> raw) {
    Int content = 0;
    for (const Int& c : raw) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
    if (content == 0) throw std::invalid_argument("make_proj_point: zero tuple");
    for (Int& c : raw) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
    for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
        if (*it == 0) continue;
        if (*it < 0)
            for (Int& c : raw) c = -c;
        break;
    }
    return {std::move(raw)};
}

Int height(const ProjPointQ& P) {
    Int h = 0;
    for (const Int& c : P.coords)
        if (mpz_cmpabs(c.get_mpz_t(), h.get_mpz_t()) > 0) h = abs(c);
    return h;
}

namespace {

// canonical representative test for a long tuple: primitive, last
// nonzero coordinate positive
bool is_canonical(std::span<const long> c) {
    long g = 0;
    long last = 0;
    for (long x : c) {
        g = std::gcd(g, x < 0 ? -x : x);
        if (x != 0) last = x;
    }
    return g == 1 && last > 0;
}

// visits every canonical tuple with fixed leading coordinate a0
template <typename Fn>
void scan_slice(unsigned m, long B, long a0, Fn&& per_point) {
    std::vector<long> c(m + 1);
    c[0] = a0;
    if (m == 0) {
        if (is_canonical(c)) per_point(std::span<const long>(c));
        return;
    }
    std::vector<long> cur(m, -B);
    bool done = false;
    while (!done) {
        for (unsigned i = 0; i < m; ++i) c[i + 1] = cur[i];
        if (is_canonical(c)) per_point(std::span<const long>(c));
        done = true;
        for (unsigned i = 0; i < m; ++i) {
            if (++cur[i] <= B) {
                done = false;
                break;
            }
            cur[i] = -B;
        }
    }
}

struct ExactThreshold {
    Int num, den;  // X = num/den >= 0, exact binary expansion of the double
    explicit ExactThreshold(double X) {
        if (!(X >= 0)) throw std::invalid_argument("threshold must be nonnegative");
        Rat q(X);
        num = q.get_num();
        den = q.get_den();
    }
};

// H(f(P)) <= X as an exact integer comparison
bool pullback_within(const HomogeneousLift& F, std::span<const Int> x, const ExactThreshold& X) {
    std::vector<Int> y = evaluate_int(F, x);
    Int content = 0, maxv = 0;
    for (const Int& v : y) {
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
        if (mpz_cmpabs(v.get_mpz_t(), maxv.get_mpz_t()) > 0) maxv = abs(v);
    }
    return maxv * X.den <= X.num * content;
}

}  // namespace

void enumerate_points(unsigned m, long B, const std::function<void(const ProjPointQ&)>& visit) {
    if (B < 1) throw std::invalid_argument("enumerate_points: B must be >= 1");
    for (long a0 = -B; a0 <= B; ++a0)
        scan_slice(m, B, a0, [&](std::span<const long> c) {
            std::vector<Int> coords(c.begin(), c.end());
            visit(ProjPointQ{std::move(coords)});
        });
}

long long count_points_serial(unsigned m, long B) {
    long long n = 0;
    for (long a0 = -B; a0 <= B; ++a0)
        scan_slice(m, B, a0, [&](std::span<const long>) { ++n; });
    return n;
}

long long count_points(unsigned m, long B) {
    long long n = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : n)
#endif
    for (long a0 = -B; a0 <= B; ++a0)
        scan_slice(m, B, a0, [&](std::span<const long>) { ++n; });
    return n;
}

long pullback_radius(const CertifiedMorphism& f, const ErrorConstants& ec, double X) {
    double H = height_of_map(*f).get_d();
    double C0d = ec.C0d.get_d();
    double r = std::pow(X * C0d / H, 1.0 / f->d) * ec.C_inf_upper;
    return static_cast<long>(std::ceil(r * (1.0 + 1e-9))) ;
}

long long count_pullback_raw_serial(const CertifiedMorphism& f, double X, long B) {
    ExactThreshold t(X);
    long long n = 0;
    std::vector<Int> x(f->m + 1);
    for (long a0 = -B; a0 <= B; ++a0)
        scan_slice(f->m, B, a0, [&](std::span<const long> c) {
            for (size_t i = 0; i < c.size(); ++i) x[i] = static_cast<long>(c[i]);
            if (pullback_within(*f, x, t)) ++n;
        });
    return n;
}

long long count_pullback_raw(const CertifiedMorphism& f, double X, long B) {
    ExactThreshold t(X);
    long long n = 0;
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::vector<Int> x(f->m + 1);
        long long local = 0;
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 8) nowait
#endif
        for (long a0 = -B; a0 <= B; ++a0)
            scan_slice(f->m, B, a0, [&](std::span<const long> c) {
                for (size_t i = 0; i < c.size(); ++i) x[i] = static_cast<long>(c[i]);
                if (pullback_within(*f, x, t)) ++local;
            });
#ifdef _OPENMP
#pragma omp atomic
#endif
        n += local;
    }
    return n;
}

CountRow count_pullback(const CertifiedMorphism& f, double X,
                        std::optional<double> predicted_constant) {
    ErrorConstants ec = error_constants(f);
    long B = pullback_radius(f, ec, X);
    CountRow row;
    row.X = X;
    row.count = count_pullback_raw(f, X, B);
    double xpow = std::pow(X, static_cast<double>(f->m + 1) / f->d);
    row.ratio = row.count / xpow;
    row.predicted = predicted_constant ? *predicted_constant * xpow
                                       : std::numeric_limits<double>::quiet_NaN();
    return row;
}

long long count_image_raw(const CertifiedMorphism& f, double X, long B) {
    ExactThreshold t(X);
    const long slices = 2 * B + 1;
    std::vector<std::vector<std::vector<Int>>> per_slice(slices);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long a0 = -B; a0 <= B; ++a0) {
        std::vector<Int> x(f->m + 1);
        auto& bucket = per_slice[a0 + B];
        scan_slice(f->m, B, a0, [&](std::span<const long> c) {
            for (size_t i = 0; i < c.size(); ++i) x[i] = static_cast<long>(c[i]);
            if (!pullback_within(*f, x, t)) return;
            ProjPointQ img = make_proj_point(evaluate_int(*f, x));
            bucket.push_back(std::move(img.coords));
        });
    }
    std::vector<std::vector<Int>> all;
    for (auto& b : per_slice)
        for (auto& v : b) all.push_back(std::move(v));
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return static_cast<long long>(all.size());
}

CountRow count_image(const CertifiedMorphism& f, double X, std::optional<unsigned> gamma,
                     std::optional<double> predicted_constant) {
    ErrorConstants ec = error_constants(f);
    long B = pullback_radius(f, ec, X);
    CountRow row;
    row.X = X;
    row.count = count_image_raw(f, X, B);
    double xpow = std::pow(X, static_cast<double>(f->m + 1) / f->d);
    row.ratio = row.count / xpow;
    if (predicted_constant && gamma)
        row.predicted = *predicted_constant / *gamma * xpow;
    else
        row.predicted = std::numeric_limits<double>::quiet_NaN();
    return row;
}

CountRow count_canonical(const CertifiedMorphism& f, double X, const CanonicalHeightParams& params,
                         std::optional<double> predicted_constant) {
    if (f->m != f->M || f->d < 2)
        throw std::invalid_argument("count_canonical: needs an endomorphism of degree >= 2");
    ErrorConstants ec = error_constants(f);
    // exp h-hat >= H(P) * (|F| / (C_inf^d C0d))^{1/(d-1)}
    double H = height_of_map(*f).get_d();
    double slack = std::pow(ec.C0d.get_d() * std::pow(ec.C_inf_upper, f->d) / H,
                            1.0 / (f->d - 1.0));
    long B = static_cast<long>(std::ceil(X * slack * (1.0 + 1e-9)));

    CanonicalHeightParams p = params;
    if (p.log_C0d < 0) p.log_C0d = std::log(ec.C0d.get_d());
    const double logX = std::log(X);

    long long inside = 0, flagged = 0;
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        long long in_local = 0, fl_local = 0;
        std::vector<Int> x(f->m + 1);
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 4) nowait
#endif
        for (long a0 = -B; a0 <= B; ++a0)
            scan_slice(f->m, B, a0, [&](std::span<const long> c) {
                for (size_t i = 0; i < c.size(); ++i) x[i] = static_cast<long>(c[i]);
                CanonicalHeightEstimate h = canonical_height(f, x, p);
                double err = std::max(h.error, 8e-16 * (1.0 + std::abs(h.value)));
                if (std::abs(h.value - logX) <= err)
                    ++fl_local;
                else if (h.value < logX)
                    ++in_local;
            });
#ifdef _OPENMP
#pragma omp atomic
#endif
        inside += in_local;
#ifdef _OPENMP
#pragma omp atomic
#endif
        flagged += fl_local;
    }
    CountRow row;
    row.X = X;
    row.count = inside;
    row.flagged_boundary = flagged;
    double xpow = std::pow(X, static_cast<double>(f->m + 1));  // g = id has degree 1
    row.ratio = inside / xpow;
    row.predicted = predicted_constant ? *predicted_constant * xpow
                                       : std::numeric_limits<double>::quiet_NaN();
    return row;
}

std::vector<CountRow> convergence_report(const CertifiedMorphism& f, const std::vector<double>& Xs,
                                         CountMode mode, const ArchConfig& cfg,
                                         std::optional<unsigned> gamma) {
    std::vector<CountRow> rows;
    std::optional<double> c;
    if (mode == CountMode::canonical) {
        ChatSequence cs = chat_sequence(f, identity_map(f->m), 1, cfg);
        c = cs.chat_estimate;
    } else {
        c = assemble_constant(f, cfg).c_value;
    }
    for (double X : Xs) {
        switch (mode) {
            case CountMode::pullback: rows.push_back(count_pullback(f, X, c)); break;
            case CountMode::image: rows.push_back(count_image(f, X, gamma, c)); break;
            case CountMode::canonical: {
                CanonicalHeightParams p;
                rows.push_back(count_canonical(f, X, p, c));
                break;
            }
        }
    }
    return rows;
}

Rat pullback_height(const CertifiedMorphism& f, const ProjPointQ& P) {
    std::vector<Int> y = evaluate_int(*f, P.coords);
    Int content = 0, maxv = 0;
    for (const Int& v : y) {
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
        if (mpz_cmpabs(v.get_mpz_t(), maxv.get_mpz_t()) > 0) maxv = abs(v);
    }
    if (content == 0) throw std::domain_error("pullback_height: F vanishes at the point");
    return Rat(maxv) / Rat(content);
}

}  // namespace hc
