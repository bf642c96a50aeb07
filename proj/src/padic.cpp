#include "hc/padic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace hc {

namespace {

constexpr unsigned long kClassCap = 10'000'000;

Int pow_int(const Int& p, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), e);
    return r;
}

Int mod_inverse(const Int& a, const Int& q) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t()) == 0)
        throw std::invalid_argument("mod_inverse: not invertible");
    return r;
}

// canonical representative of [x] in P^m(Z/p^e): scale so the first
// unit coordinate becomes 1
std::vector<Int> canonicalize_prime_power(std::vector<Int> coords, const Int& p, const Int& pe) {
    size_t pivot = coords.size();
    for (size_t i = 0; i < coords.size(); ++i) {
        coords[i] %= pe;
        if (coords[i] < 0) coords[i] += pe;
    }
    for (size_t i = 0; i < coords.size(); ++i)
        if (coords[i] % p != 0) {
            pivot = i;
            break;
        }
    if (pivot == coords.size())
        throw std::invalid_argument("canonicalize: tuple not primitive mod p");
    Int inv = mod_inverse(coords[pivot], pe);
    for (Int& c : coords) c = (c * inv) % pe;
    return coords;
}

}  // namespace

ProjPointModQ reduce_mod(std::span<const Rat> x, const Int& q) {
    if (q < 2) throw std::invalid_argument("reduce_mod: q must be >= 2");
    bool all_zero = true;
    for (const Rat& xi : x)
        if (xi != 0) all_zero = false;
    if (all_zero) throw std::invalid_argument("reduce_mod: zero tuple has no reduction");

    FactoredIdeal qf = factor(q);
    // lambda = prod p^{-tuple_val_p(x)} clears exactly the q-part
    Rat lambda = 1;
    for (const auto& [p, e] : qf.exponents()) {
        long v = tuple_val_p(x, p).finite();
        Rat pv = Rat(pow_int(p, static_cast<unsigned long>(v < 0 ? -v : v)));
        lambda *= (v >= 0) ? 1 / pv : pv;
    }

    // reduce each prime power, then CRT-combine coordinates
    std::vector<std::vector<Int>> parts;
    std::vector<Int> moduli;
    for (const auto& [p, e] : qf.exponents()) {
        Int pe = pow_int(p, static_cast<unsigned long>(e));
        std::vector<Int> coords;
        for (const Rat& xi : x) {
            Rat y = xi * lambda;
            Int num = Int(y.get_num()) % pe;
            coords.push_back(num * mod_inverse(Int(y.get_den()), pe) % pe);
        }
        parts.push_back(canonicalize_prime_power(std::move(coords), p, pe));
        moduli.push_back(pe);
    }
    ProjPointModQ out;
    out.q = q;
    out.coords.assign(x.size(), Int(0));
    Int modulus = 1;
    for (size_t k = 0; k < parts.size(); ++k) {
        if (k == 0) {
            out.coords = parts[0];
            modulus = moduli[0];
            continue;
        }
        // x = a mod modulus, x = b mod moduli[k]
        Int inv = mod_inverse(modulus % moduli[k], moduli[k]);
        for (size_t i = 0; i < out.coords.size(); ++i) {
            Int t = ((parts[k][i] - out.coords[i]) * inv) % moduli[k];
            if (t < 0) t += moduli[k];
            out.coords[i] += modulus * t;
        }
        modulus *= moduli[k];
    }
    return out;
}

void for_each_proj_point(unsigned m, const Int& p, unsigned s,
                         const std::function<void(std::span<const Int>)>& visit) {
    if (s < 1) throw std::invalid_argument("for_each_proj_point: s must be >= 1");
    Int ps = pow_int(p, s);
    Int ps1 = pow_int(p, s - 1);
    std::vector<Int> coords(m + 1);
    for (unsigned pivot = 0; pivot <= m; ++pivot) {
        coords[pivot] = 1;
        // odometer over the free coordinates
        std::vector<Int> limit(m + 1), cur(m + 1, Int(0));
        for (unsigned i = 0; i < pivot; ++i) limit[i] = ps1;  // value p*cur
        for (unsigned i = pivot + 1; i <= m; ++i) limit[i] = ps;
        bool done = false;
        while (!done) {
            for (unsigned i = 0; i <= m; ++i) {
                if (i < pivot)
                    coords[i] = p * cur[i];
                else if (i > pivot)
                    coords[i] = cur[i];
            }
            visit(coords);
            done = true;
            for (unsigned i = 0; i <= m; ++i) {
                if (i == pivot) continue;
                cur[i] += 1;
                if (cur[i] < limit[i]) {
                    done = false;
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

long excess_valuation(const NormalizedLift& F, const Int& p, std::span<const Int> x) {
    if (!(tuple_val_p(x, p) == Val(0)))
        throw std::invalid_argument("excess_valuation: tuple is not primitive mod p");
    std::vector<Int> y = evaluate_int(*F, x);
    Val v = tuple_val_p(y, p);
    if (v.is_infinite())
        throw std::domain_error("excess_valuation: F vanishes at a primitive tuple (not a morphism)");
    return v.finite();
}

LocalDensityTable local_density(const CertifiedMorphism& f, const Int& p) {
    const unsigned m = f->m;
    long vres = val_p(f.res.invariant_factor_product, p).finite();
    LocalDensityTable t;
    t.p = p;
    if (vres == 0) {  // good reduction: epsilon is identically zero
        t.depth = 0;
        t.weights[0] = 1;
        return t;
    }
    struct Class {
        std::vector<Int> coords;
        unsigned level;
    };
    std::deque<Class> queue;
    unsigned long visited = 0;
    for_each_proj_point(m, p, 1, [&](std::span<const Int> x) {
        queue.push_back({std::vector<Int>(x.begin(), x.end()), 1});
    });
    unsigned long pl = mpz_get_ui(p.get_mpz_t());
    while (!queue.empty()) {
        Class c = std::move(queue.front());
        queue.pop_front();
        if (++visited > kClassCap)
            throw ResourceCapError("local_density: more than 1e7 residue classes visited");
        long eps = excess_valuation(f.F, p, c.coords);
        if (eps < static_cast<long>(c.level) || static_cast<long>(c.level) >= vres) {
            Rat w = Rat(1) / Rat(proj_space_size(m, pow_int(p, c.level)));
            t.weights[eps] += w;
            t.depth = std::max(t.depth, c.level);
            continue;
        }
        // split into the p^m children mod p^{level+1}
        Int pk = pow_int(p, c.level);
        size_t pivot = 0;
        while (c.coords[pivot] % p == 0) ++pivot;
        std::vector<unsigned long> digit(m + 1, 0);
        bool done = false;
        while (!done) {
            Class child;
            child.level = c.level + 1;
            child.coords = c.coords;
            for (unsigned i = 0; i <= m; ++i)
                if (i != pivot) child.coords[i] += pk * Int(digit[i]);
            queue.push_back(std::move(child));
            done = true;
            for (unsigned i = 0; i <= m; ++i) {
                if (i == pivot) continue;
                if (++digit[i] < pl) {
                    done = false;
                    break;
                }
                digit[i] = 0;
            }
        }
    }
    // drop explicit zeros so the support is exactly im(epsilon)
    for (auto it = t.weights.begin(); it != t.weights.end();)
        it = (it->second == 0) ? t.weights.erase(it) : std::next(it);
    return t;
}

LocalDensityTable local_density_flat(const NormalizedLift& F, const Int& p, unsigned s) {
    LocalDensityTable t;
    t.p = p;
    t.depth = s;
    Int total = proj_space_size(F->m, pow_int(p, s));
    if (total > Int(kClassCap))
        throw ResourceCapError("local_density_flat: state space exceeds 1e7 classes");
    Rat w = Rat(1) / Rat(total);
    for_each_proj_point(F->m, p, s, [&](std::span<const Int> x) {
        t.weights[excess_valuation(F, p, x)] += w;
    });
    return t;
}

std::pair<ExactLocalFactor, Rat> local_factor(const LocalDensityTable& t, unsigned m, unsigned d) {
    ExactLocalFactor c;
    c.p = t.p;
    c.m = m;
    c.d = d;
    c.radical.assign(d, Rat(0));
    Rat mu = 0;
    for (const auto& [i, w] : t.weights) {
        c.terms.emplace_back(i, w);
        long e = static_cast<long>(m + 1) * i;
        c.radical[e % d] += w * Rat(pow_int(t.p, static_cast<unsigned long>(e / d)));
        mu += w * Rat(pow_int(t.p, static_cast<unsigned long>((m + 1) * (i / d))));
    }
    double pd = std::pow(t.p.get_d(), 1.0 / d);
    c.float_value = 0;
    for (unsigned r = 0; r < d; ++r) c.float_value += c.radical[r].get_d() * std::pow(pd, r);
    return {c, mu};
}

std::pair<ExactLocalFactor, Rat> local_factor(const CertifiedMorphism& f, const Int& p) {
    return local_factor(local_density(f, p), f->m, f->d);
}

RadicalProduct::RadicalProduct(unsigned d, std::vector<Int> primes)
    : d_(d), primes_(std::move(primes)) {
    if (d_ == 0) throw std::invalid_argument("RadicalProduct: d must be positive");
    std::sort(primes_.begin(), primes_.end());
}

RadicalProduct RadicalProduct::one(unsigned d, std::vector<Int> primes) {
    RadicalProduct r(d, std::move(primes));
    r.c_[std::vector<unsigned>(r.primes_.size(), 0)] = 1;
    return r;
}

void RadicalProduct::add_term(const std::vector<long>& numerators, const Rat& w) {
    if (numerators.size() != primes_.size())
        throw std::invalid_argument("RadicalProduct: exponent vector length mismatch");
    std::vector<unsigned> key(primes_.size());
    Rat coeff = w;
    for (size_t k = 0; k < primes_.size(); ++k) {
        long num = numerators[k];
        if (num < 0) throw std::invalid_argument("RadicalProduct: negative exponent");
        key[k] = static_cast<unsigned>(num % d_);
        coeff *= Rat(pow_int(primes_[k], static_cast<unsigned long>(num / d_)));
    }
    if (coeff == 0) return;
    auto [it, fresh] = c_.try_emplace(key, coeff);
    if (!fresh) {
        it->second += coeff;
        if (it->second == 0) c_.erase(it);
    }
}

void RadicalProduct::multiply_local(const ExactLocalFactor& lf) {
    auto pos = std::find(primes_.begin(), primes_.end(), lf.p);
    if (pos == primes_.end()) throw std::invalid_argument("RadicalProduct: prime not in basis");
    size_t k = static_cast<size_t>(pos - primes_.begin());
    std::map<std::vector<unsigned>, Rat> next;
    for (const auto& [key, coeff] : c_) {
        for (const auto& [i, w] : lf.terms) {
            long e = key[k] + static_cast<long>(lf.m + 1) * i;
            std::vector<unsigned> nk = key;
            nk[k] = static_cast<unsigned>(e % d_);
            Rat nc = coeff * w * Rat(pow_int(primes_[k], static_cast<unsigned long>(e / d_)));
            if (nc == 0) continue;
            auto [it, fresh] = next.try_emplace(std::move(nk), nc);
            if (!fresh) {
                it->second += nc;
                if (it->second == 0) next.erase(it);
            }
        }
    }
    c_ = std::move(next);
}

double RadicalProduct::to_double() const {
    double total = 0;
    for (const auto& [key, coeff] : c_) {
        double t = coeff.get_d();
        for (size_t k = 0; k < primes_.size(); ++k)
            t *= std::pow(primes_[k].get_d(), static_cast<double>(key[k]) / d_);
        total += t;
    }
    return total;
}

bool RadicalProduct::is_rational() const {
    for (const auto& [key, coeff] : c_)
        for (unsigned r : key)
            if (r != 0) return false;
    return true;
}

Rat RadicalProduct::rational_value() const {
    if (!is_rational()) throw std::domain_error("RadicalProduct: value is irrational");
    Rat v = 0;
    for (const auto& [key, coeff] : c_) v += coeff;
    return v;
}

NonarchConstant nonarch_constant(const CertifiedMorphism& f) {
    std::vector<Int> bad;
    for (const auto& [p, e] : f.res.res_ideal.exponents()) bad.push_back(p);
    NonarchConstant out{.bad_primes = bad,
                        .tables = {},
                        .locals = {},
                        .mus = {},
                        .exact = RadicalProduct::one(f->d, bad),
                        .value = 1.0,
                        .C0d = 1};
    for (const Int& p : bad) {
        LocalDensityTable t = local_density(f, p);
        auto [c, mu] = local_factor(t, f->m, f->d);
        out.exact.multiply_local(c);
        out.value *= c.float_value;
        out.C0d *= pow_int(p, static_cast<unsigned long>(t.sup_support()));
        out.tables.push_back(std::move(t));
        out.locals.push_back(std::move(c));
        out.mus.push_back(mu);
    }
    return out;
}

std::map<FactoredIdeal, Rat> global_densities(const CertifiedMorphism& f) {
    NonarchConstant nc = nonarch_constant(f);
    std::map<FactoredIdeal, Rat> out;
    out[FactoredIdeal::one()] = 1;
    for (size_t k = 0; k < nc.bad_primes.size(); ++k) {
        std::map<FactoredIdeal, Rat> next;
        for (const auto& [ideal, w] : out)
            for (const auto& [i, wi] : nc.tables[k].weights) {
                FactoredIdeal l = ideal;
                l.set_exponent(nc.bad_primes[k], i);
                next[l] = w * wi;
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace hc
