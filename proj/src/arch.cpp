#include "hc/arch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hc/padic.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hc {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

namespace {

double uniform01(std::uint64_t word) {
    return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;  // in (0,1)
}

}  // namespace

std::vector<double> sphere_point(unsigned m, std::uint64_t seed, std::uint64_t index) {
    std::uint64_t ctr = splitmix64(seed ^ (index * 0xD1B54A32D192ED03ull + 0x2545F4914F6CDD1Dull));
    std::vector<double> u(m + 1);
    double norm2 = 0;
    do {
        for (unsigned i = 0; i <= m; i += 2) {
            ctr = splitmix64(ctr);
            double a = uniform01(ctr);
            ctr = splitmix64(ctr);
            double b = uniform01(ctr);
            double r = std::sqrt(-2.0 * std::log(a));
            u[i] = r * std::cos(2.0 * std::numbers::pi * b);
            if (i + 1 <= m) u[i + 1] = r * std::sin(2.0 * std::numbers::pi * b);
        }
        norm2 = 0;
        for (double x : u) norm2 += x * x;
    } while (norm2 == 0);
    double inv = 1.0 / std::sqrt(norm2);
    for (double& x : u) x *= inv;
    return u;
}

double sphere_area(unsigned m) {
    double n = m + 1;  // ambient dimension
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

namespace {

double max_abs(std::span<const double> v) {
    double s = 0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

// --- deterministic blockwise Monte Carlo -------------------------------
//
// Block sums are stored by block index and combined serially, so the
// result does not depend on the number of threads.
constexpr long kMcBlock = 4096;

struct McResult {
    double mean = 0, stddev = 0;
    long n = 0;
};

template <typename F>
McResult mc_mean(long samples, std::uint64_t seed, F&& sample_value, bool parallel) {
    long nblocks = (samples + kMcBlock - 1) / kMcBlock;
    std::vector<double> sums(nblocks, 0.0), sqsums(nblocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (long b = 0; b < nblocks; ++b) {
        double s = 0, q = 0;
        long lo = b * kMcBlock, hi = std::min(samples, lo + kMcBlock);
        for (long i = lo; i < hi; ++i) {
            double v = sample_value(static_cast<std::uint64_t>(i), seed);
            s += v;
            q += v * v;
        }
        sums[b] = s;
        sqsums[b] = q;
    }
    double s = 0, q = 0;
    for (long b = 0; b < nblocks; ++b) {
        s += sums[b];
        q += sqsums[b];
    }
    McResult r;
    r.n = samples;
    r.mean = s / samples;
    double var = std::max(0.0, q / samples - r.mean * r.mean);
    r.stddev = std::sqrt(var);
    return r;
}

// --- adaptive Simpson ---------------------------------------------------

struct QuadState {
    long panels = 0;
    double err = 0;
};

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth, QuadState& st) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        st.panels += 2;
        st.err += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1, st) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1, st);
}

// Fixed bootstrap panels defeat false convergence on periodic
// integrands whose symmetry points coincide with the Simpson probes.
template <typename F>
double integrate(F&& f, double a, double b, double tol, QuadState& st) {
    constexpr int kPanels = 32;
    double total = 0;
    double h = (b - a) / kPanels;
    for (int k = 0; k < kPanels; ++k) {
        double lo = a + k * h, hi = lo + h;
        double m = 0.5 * (lo + hi);
        double fa = f(lo), fm = f(m), fb = f(hi);
        double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += adaptive_simpson(f, lo, hi, fa, fm, fb, whole, tol / kPanels, 36, st);
    }
    return total;
}

}  // namespace

ArchEstimate arch_volume(const CertifiedMorphism& f, const ArchConfig& cfg) {
    const HomogeneousLift& F = *f;
    const unsigned m = F.m, d = F.d;
    const double supF = sup_norm(F).get_d();
    auto radial_power = [&](std::span<const double> u) {
        // r(u)^{m+1} with r(u) = (|F| / |F(u)|)^{1/d}
        std::vector<double> y = evaluate_double(F, u);
        return std::pow(supF / max_abs(y), static_cast<double>(m + 1) / d);
    };
    ArchEstimate out;
    out.seed = cfg.seed;
    if (m == 1) {
        QuadState st;
        auto g = [&](double theta) {
            double u[2] = {std::cos(theta), std::sin(theta)};
            return radial_power(u);
        };
        double integral = integrate(g, 0.0, 2.0 * std::numbers::pi, cfg.quad_tol, st);
        out.value = 0.5 * integral;
        out.error = std::max(0.5 * st.err, 1e-14 * std::abs(out.value));
        out.method = "radial-quadrature";
        out.samples_or_panels = st.panels;
        return out;
    }
    McResult r = mc_mean(
        cfg.mc_samples, cfg.seed,
        [&](std::uint64_t i, std::uint64_t seed) {
            std::vector<double> u = sphere_point(m, seed, i);
            return radial_power(u);
        },
        cfg.parallel);
    double scale = sphere_area(m) / (m + 1);
    out.value = scale * r.mean;
    out.error = scale * 3.0 * r.stddev / std::sqrt(static_cast<double>(r.n));
    out.method = "sphere-monte-carlo";
    out.samples_or_panels = r.n;
    return out;
}

namespace {

// minimum of |F(v)| over the boundary of the cube [-1,1]^{m+1},
// bracketed by a gradient bound; refined until the bracket is positive
double cube_face_min(const HomogeneousLift& F, double* certified_lower) {
    const unsigned n = F.m + 1;
    double grad_bound = 0;
    for (const TermMap& form : F.forms) {
        double s = 0;
        for (const auto& [a, c] : form) s += std::abs(c.get_d()) * F.d;
        grad_bound = std::max(grad_bound, s);
    }
    double best = std::numeric_limits<double>::infinity();
    double lower = -1;
    unsigned steps = n <= 2 ? 2048 : (n == 3 ? 128 : 24);
    for (int round = 0; round < 6 && lower <= 0; ++round, steps *= 2) {
        best = std::numeric_limits<double>::infinity();
        double h = 2.0 / steps;
        std::vector<double> v(n);
        for (unsigned face_axis = 0; face_axis < n; ++face_axis) {
            for (int sign = -1; sign <= 1; sign += 2) {
                std::vector<unsigned> idx(n, 0);
                bool done = false;
                while (!done) {
                    for (unsigned i = 0, k = 0; i < n; ++i) {
                        if (i == face_axis)
                            v[i] = sign;
                        else
                            v[i] = -1.0 + h * idx[k++];
                    }
                    best = std::min(best, max_abs(evaluate_double(F, v)));
                    done = true;
                    for (unsigned k = 0; k + 1 < n; ++k) {
                        if (++idx[k] <= steps) {
                            done = false;
                            break;
                        }
                        idx[k] = 0;
                    }
                }
            }
        }
        lower = best - grad_bound * (n - 1) * h / 2.0;
    }
    *certified_lower = lower;
    return best;
}

}  // namespace

ErrorConstants error_constants(const CertifiedMorphism& f) {
    const HomogeneousLift& F = *f;
    const unsigned n = F.m + 1;
    const double supF = sup_norm(F).get_d();

    // point estimate of kappa on the Euclidean sphere: normalized
    // cube-face grid, then pattern-search descent
    double cube_lower = 0;
    double cube_best = cube_face_min(F, &cube_lower);
    (void)cube_best;

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_u(n, 0.0);
    long grid = (n <= 2) ? 1 << 16 : 200'000;
    if (n == 2) {
        for (long i = 0; i < grid; ++i) {
            double theta = 2.0 * std::numbers::pi * i / grid;
            double u[2] = {std::cos(theta), std::sin(theta)};
            double g = max_abs(evaluate_double(F, u));
            if (g < best) {
                best = g;
                best_u = {u[0], u[1]};
            }
        }
    } else {
        for (long i = 0; i < grid; ++i) {
            std::vector<double> u = sphere_point(F.m, 0xC0FFEE, static_cast<std::uint64_t>(i));
            double g = max_abs(evaluate_double(F, u));
            if (g < best) {
                best = g;
                best_u = u;
            }
        }
    }
    // pattern search on the sphere
    double step = 1e-2;
    while (step > 1e-12) {
        bool improved = false;
        for (unsigned i = 0; i < n; ++i) {
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                std::vector<double> u = best_u;
                u[i] += sgn * step;
                double norm = 0;
                for (double x : u) norm += x * x;
                norm = std::sqrt(norm);
                for (double& x : u) x /= norm;
                double g = max_abs(evaluate_double(F, u));
                if (g < best) {
                    best = g;
                    best_u = u;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }

    ErrorConstants out;
    out.kappa_inf = std::pow(best, 1.0 / F.d);
    out.C_inf = std::pow(supF, 1.0 / F.d) / out.kappa_inf;
    // certified: |F(x)| >= cube_lower |x|_inf^d and |x|_inf >= |x|_2/sqrt(n)
    double kappa_max_norm = std::pow(cube_lower, 1.0 / F.d);
    out.kappa_lower = std::min(out.kappa_inf, kappa_max_norm / std::sqrt(static_cast<double>(n)));
    out.C_inf_upper = std::pow(supF, 1.0 / F.d) / out.kappa_lower;
    out.C0d = nonarch_constant(f).C0d;
    return out;
}

GreenValue green_arch(const HomogeneousLift& F, std::span<const double> x, int iters) {
    if (F.m != F.M) throw std::invalid_argument("green_arch: not an endomorphism");
    if (F.d < 2) throw std::invalid_argument("green_arch: degree must be >= 2");
    double a = max_abs(x);
    if (a == 0) throw std::invalid_argument("green_arch: zero vector");
    std::vector<double> z(x.begin(), x.end());
    for (double& c : z) c /= a;
    double value = std::log(a);
    double dpow = 1.0;
    double gmax = 0.0;
    double last = 0.0;
    std::vector<double> w;
    for (int i = 0; i < iters; ++i) {
        evaluate_double_into(F, z, w);
        double b = max_abs(w);
        dpow *= F.d;
        double g = std::log(b);
        value += g / dpow;
        gmax = std::max(gmax, std::abs(g));
        last = std::abs(g) / dpow;
        for (size_t k = 0; k < w.size(); ++k) z[k] = w[k] / b;
    }
    GreenValue out;
    out.value = value;
    out.cauchy_gap = std::max(last, gmax / (dpow * (F.d - 1)));
    return out;
}

std::pair<double, double> map_height_limit(const HomogeneousLift& F, const HomogeneousLift& G,
                                           int exact_iters) {
    double prev = std::log(sup_norm(G).get_d()) / G.d;
    double cur = prev;
    HomogeneousLift H = G;
    double dpow = 1.0;
    for (int i = 1; i <= exact_iters; ++i) {
        H = compose(F, H);
        dpow *= F.d;
        prev = cur;
        cur = std::log(sup_norm(H).get_d()) / (dpow * G.d);
    }
    return {std::exp(cur * G.d), std::abs(cur - prev) * G.d};
}

ArchEstimate limiting_arch_factor(const CertifiedMorphism& f, const HomogeneousLift& G,
                                  const ArchConfig& cfg) {
    const HomogeneousLift& F = *f;
    if (F.m != F.M) throw std::invalid_argument("limiting_arch_factor: F must be an endomorphism");
    if (F.d < 2) throw std::invalid_argument("limiting_arch_factor: degree of F must be >= 2");
    if (G.M != F.m) throw std::invalid_argument("limiting_arch_factor: G must map into the space of F");
    const unsigned m = G.m, e = G.d;

    double log_T = 0.0, gap_T = 0.0;
    if (cfg.threshold_from_limit) {
        auto [T, gap] = map_height_limit(F, G, cfg.exact_iters);
        log_T = std::log(T);
        gap_T = gap;
    }

    McResult r = mc_mean(
        cfg.mc_samples, cfg.seed,
        [&](std::uint64_t i, std::uint64_t seed) {
            std::vector<double> u = sphere_point(m, seed, i);
            std::vector<double> y = evaluate_double(G, u);
            GreenValue g = green_arch(F, y, cfg.green_iters);
            return std::exp((log_T - g.value) * (m + 1) / static_cast<double>(e));
        },
        cfg.parallel);
    double scale = sphere_area(m) / (m + 1);
    ArchEstimate out;
    out.value = scale * r.mean;
    out.error = scale * 3.0 * r.stddev / std::sqrt(static_cast<double>(r.n)) +
                out.value * (m + 1) / static_cast<double>(e) * gap_T;
    out.method = "green-monte-carlo";
    out.samples_or_panels = r.n;
    out.seed = cfg.seed;
    return out;
}

}  // namespace hc
