#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>
#include <set>

#include "hc/rational.hpp"

using namespace hc;

TEST_CASE("val_p on integers and rationals") {
    CHECK(val_p(Rat(12), Int(2)) == Val(2));
    CHECK(val_p(Rat(4, 9), Int(3)) == Val(-2));
    CHECK(val_p(Rat(0), Int(5)).is_infinite());
    CHECK(val_p(Int(12), Int(2)) == Val(2));
    CHECK(val_p(Rat(1), Int(7)) == Val(0));
}

TEST_CASE("tuple valuations") {
    std::vector<Rat> a = {Rat(2), Rat(6)};
    CHECK(tuple_val_p(a, Int(2)) == Val(1));
    std::vector<Rat> b = {Rat(1, 3), Rat(9)};
    CHECK(tuple_val_p(b, Int(3)) == Val(-1));
    std::vector<Rat> c = {Rat(0), Rat(0)};
    CHECK(tuple_val_p(c, Int(7)).is_infinite());
}

TEST_CASE("val_p is a discrete valuation (fuzz)") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-400, 400), den(1, 60);
    const Int primes[] = {Int(2), Int(3), Int(5), Int(7)};
    for (int trial = 0; trial < 2000; ++trial) {
        Rat x(num(rng), den(rng));
        Rat y(num(rng), den(rng));
        x.canonicalize();
        y.canonicalize();
        for (const Int& p : primes) {
            Val vx = val_p(x, p), vy = val_p(y, p);
            Val vsum = val_p(x + y, p);
            Val lo = min(vx, vy);
            CHECK(vsum >= lo);
            if (!(vx == vy)) CHECK(vsum == lo);
            // multiplicativity
            CHECK(val_p(x * y, p) == vx + vy);
        }
    }
}

TEST_CASE("Val saturating arithmetic") {
    Val inf = Val::infinity();
    CHECK((inf + Val(5)).is_infinite());
    CHECK(Val(3) + Val(-7) == Val(-4));
    CHECK(Val(2) < inf);
    CHECK(!(inf < inf));
    CHECK(min(inf, Val(1)) == Val(1));
    CHECK_THROWS_AS(inf.finite(), std::domain_error);
}

TEST_CASE("factor round-trips") {
    CHECK(factor(Int(12)).exponents() == std::map<Int, long>{{Int(2), 2}, {Int(3), 1}});
    CHECK(factor(Rat(9, 2)).exponents() == std::map<Int, long>{{Int(2), -1}, {Int(3), 2}});
    CHECK(factor(Rat(1)).is_one());
    CHECK_THROWS_AS(factor(Int(0)), std::invalid_argument);

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(1, 100000), den(1, 1000);
    for (int trial = 0; trial < 300; ++trial) {
        Rat x(num(rng), den(rng));
        x.canonicalize();
        Rat back = factor(x).norm();
        CHECK(back == abs(x));
    }
}

TEST_CASE("factor handles large primes and rejects hard composites") {
    Int p("1000003");  // prime just above the trial bound
    CHECK(factor(Int(p * 8)).exponents() == std::map<Int, long>{{Int(2), 3}, {p, 1}});
    CHECK(factor(Int(p * p)).exponents() == std::map<Int, long>{{p, 2}});
    Int q("1000033");
    CHECK_THROWS_AS(factor(Int(p * q)), std::domain_error);  // distinct large primes
}

TEST_CASE("deterministic primality") {
    CHECK(is_prime(Int(2)));
    CHECK(is_prime(Int(1000003)));
    CHECK(!is_prime(Int(1)));
    CHECK(!is_prime(Int("25326001")));  // strong pseudoprime to bases 2,3,5
    CHECK(is_prime(Int("2305843009213693951")));  // 2^61 - 1
}

namespace {

// brute-force count of primitive k-tuples mod q
long brute_jordan(unsigned k, long q) {
    long count = 0;
    std::vector<long> t(k, 0);
    bool done = (k == 0);
    if (k == 0) return q == 1 ? 1 : 0;
    while (!done) {
        long g = q;
        for (long x : t) g = std::gcd(g, x);
        if (g == 1) ++count;
        done = true;
        for (unsigned i = 0; i < k; ++i) {
            if (++t[i] < q) {
                done = false;
                break;
            }
            t[i] = 0;
        }
    }
    return count;
}

// brute-force orbit count of primitive tuples under (Z/q)^x
long brute_proj_size(unsigned m, long q) {
    std::vector<long> units;
    for (long u = 1; u < q; ++u)
        if (std::gcd(u, q) == 1) units.push_back(u);
    if (q == 1) return 1;
    std::set<std::vector<long>> orbit_reps;
    std::vector<long> t(m + 1, 0);
    bool done = false;
    while (!done) {
        long g = q;
        for (long x : t) g = std::gcd(g, x);
        if (g == 1) {
            std::vector<long> best = t;
            for (long u : units) {
                std::vector<long> s(m + 1);
                for (unsigned i = 0; i <= m; ++i) s[i] = (t[i] * u) % q;
                if (s < best) best = s;
            }
            orbit_reps.insert(best);
        }
        done = true;
        for (unsigned i = 0; i <= m; ++i) {
            if (++t[i] < q) {
                done = false;
                break;
            }
            t[i] = 0;
        }
    }
    return static_cast<long>(orbit_reps.size());
}

}  // namespace

TEST_CASE("jordan_totient against brute force") {
    CHECK(jordan_totient(2, Int(4)) == 12);
    CHECK(jordan_totient(0, Int(1)) == 1);
    CHECK(jordan_totient(5, Int(1)) == 1);
    for (long q = 1; q <= 30; ++q)
        for (unsigned k = 1; k <= 3; ++k)
            CHECK(jordan_totient(k, Int(q)) == brute_jordan(k, q));
}

TEST_CASE("jordan_totient at k=1 is Euler phi and is multiplicative") {
    auto phi = [](long n) {
        long out = 0;
        for (long a = 1; a <= n; ++a)
            if (std::gcd(a, n) == 1) ++out;
        return out;
    };
    for (long q = 1; q <= 50; ++q) CHECK(jordan_totient(1, Int(q)) == phi(q));
    CHECK(jordan_totient(2, Int(12)) == jordan_totient(2, Int(4)) * jordan_totient(2, Int(3)));
}

TEST_CASE("proj_space_size against brute-force orbit count") {
    CHECK(proj_space_size(1, Int(12)) == 24);
    CHECK(proj_space_size(2, Int(2)) == 7);
    CHECK(proj_space_size(5, Int(20)) == 7874496);
    for (long q = 1; q <= 20; ++q)
        for (unsigned m = 1; m <= 2; ++m)
            CHECK(proj_space_size(m, Int(q)) == brute_proj_size(m, q));
}

TEST_CASE("serialization of rationals and ideals") {
    CHECK(rat_to_string(Rat(22, 7)) == "22/7");
    CHECK(rat_to_string(Rat(-5)) == "-5");
    CHECK(rat_from_string("3/4") == Rat(3, 4));
    CHECK(rat_from_string("-12") == Rat(-12));
    CHECK(rat_from_string("6/4") == Rat(3, 2));
    CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_string("x"), std::invalid_argument);
    CHECK(factor(Rat(9, 2)).to_json() == "{\"2\": -1, \"3\": 2}");
}
