#include "hc/rational.hpp"

#include <algorithm>
#include <sstream>

namespace hc {

Val val_p(const Int& x, const Int& p) {
    if (p < 2) throw std::invalid_argument("val_p: p must be >= 2");
    if (x == 0) return Val::infinity();
    Int t;
    unsigned long e = mpz_remove(t.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
    return Val(static_cast<long>(e));
}

Val val_p(const Rat& x, const Int& p) {
    if (x == 0) return Val::infinity();
    return val_p(Int(x.get_num()), p) + (-val_p(Int(x.get_den()), p));
}

Val tuple_val_p(std::span<const Int> xs, const Int& p) {
    Val v = Val::infinity();
    for (const Int& x : xs) v = min(v, val_p(x, p));
    return v;
}

Val tuple_val_p(std::span<const Rat> xs, const Int& p) {
    Val v = Val::infinity();
    for (const Rat& x : xs) v = min(v, val_p(x, p));
    return v;
}

namespace {

constexpr unsigned long kTrialBound = 1'000'000;

const std::vector<unsigned long>& small_primes() {
    static const std::vector<unsigned long> primes = [] {
        std::vector<bool> sieve(kTrialBound + 1, true);
        std::vector<unsigned long> ps;
        for (unsigned long i = 2; i <= kTrialBound; ++i) {
            if (!sieve[i]) continue;
            ps.push_back(i);
            for (unsigned long j = i * i; j <= kTrialBound; j += i) sieve[j] = false;
        }
        return ps;
    }();
    return primes;
}

// Miller-Rabin witness bound: the first 12 primes are a deterministic
// witness set below 3317044064679887385961981.
const Int& mr_validity_bound() {
    static const Int bound("3317044064679887385961981");
    return bound;
}

bool miller_rabin_witness(const Int& n, const Int& a) {
    // n odd, n > 3, 1 < a < n-1
    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return false;
    for (unsigned long i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return false;
    }
    return true;  // a witnesses compositeness
}

}  // namespace

bool is_prime(const Int& n) {
    Int a = abs(n);
    if (a < 2) return false;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
        if (a == p) return true;
        if (a % p == 0) return false;
    }
    if (a >= mr_validity_bound())
        throw std::domain_error("is_prime: input exceeds the deterministic witness range (3.3e24)");
    for (unsigned long w : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul})
        if (miller_rabin_witness(a, Int(w))) return false;
    return true;
}

Rat FactoredIdeal::norm() const {
    Rat r = 1;
    for (const auto& [p, e] : e_) {
        Int pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
        if (e > 0)
            r *= Rat(pe);
        else
            r /= Rat(pe);
    }
    return r;
}

std::string FactoredIdeal::to_json() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [p, e] : e_) {
        if (!first) os << ", ";
        first = false;
        os << "\"" << p.get_str() << "\": " << e;
    }
    os << "}";
    return os.str();
}

FactoredIdeal factor(const Int& n) {
    if (n == 0) throw std::invalid_argument("factor: zero has no factorization");
    Int rest = abs(n);
    FactoredIdeal out;
    for (unsigned long p : small_primes()) {
        if (rest == 1) break;
        if (Int(p) * Int(p) > rest) break;
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            Int t;
            unsigned long e = mpz_remove(t.get_mpz_t(), rest.get_mpz_t(), Int(p).get_mpz_t());
            rest = t;
            out.set_exponent(Int(p), static_cast<long>(e));
        }
    }
    if (rest == 1) return out;
    if (is_prime(rest)) {
        out.set_exponent(rest, out.exponent_of(rest) + 1);
        return out;
    }
    // The cofactor has no prime factor <= 1e6; only a perfect power of a
    // single large prime can still be handled exactly.
    if (mpz_perfect_power_p(rest.get_mpz_t())) {
        for (unsigned long k = 2; ; ++k) {
            Int root;
            if (mpz_root(root.get_mpz_t(), rest.get_mpz_t(), k) != 0) {
                if (is_prime(root)) {
                    out.set_exponent(root, out.exponent_of(root) + static_cast<long>(k));
                    return out;
                }
                // composite base: fall through to the rejection below
                break;
            }
            if (root <= 1) break;
        }
    }
    throw std::domain_error(
        "factor: composite cofactor " + rest.get_str() +
        " has no prime factor below 1e6; input is beyond desk scale");
}

FactoredIdeal factor(const Rat& n) {
    if (n == 0) throw std::invalid_argument("factor: zero has no factorization");
    FactoredIdeal num = factor(Int(n.get_num()));
    FactoredIdeal den = factor(Int(n.get_den()));
    for (const auto& [p, e] : den.exponents()) num.set_exponent(p, num.exponent_of(p) - e);
    return num;
}

Int jordan_totient(unsigned k, const Int& q) {
    if (q < 1) throw std::invalid_argument("jordan_totient: q must be >= 1");
    if (q == 1) return 1;  // the zero ring has exactly one (empty-support) primitive tuple
    Int j = 1;
    FactoredIdeal fq = factor(q);
    for (const auto& [p, e] : fq.exponents()) {
        Int pk;
        mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k);
        Int pke;  // p^{k(e-1)}
        mpz_pow_ui(pke.get_mpz_t(), pk.get_mpz_t(), static_cast<unsigned long>(e - 1));
        j *= pke * (pk - 1);
    }
    return j;
}

Int proj_space_size(unsigned m, const Int& q) {
    if (q < 1) throw std::invalid_argument("proj_space_size: q must be >= 1");
    if (q == 1) return 1;
    Int num = jordan_totient(m + 1, q);
    Int den = jordan_totient(1, q);
    Int out;
    mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
}

Int binomial(unsigned long n, unsigned long k) {
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

std::string rat_to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("rat_from_string: bad rational '" + s + "'");
    if (r.get_den() == 0) throw std::invalid_argument("rat_from_string: zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

double rat_to_double(const Rat& x) { return x.get_d(); }

}  // namespace hc
