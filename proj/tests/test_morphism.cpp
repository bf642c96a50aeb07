#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hc/morphism.hpp"

using namespace hc;

namespace {

std::vector<Rat> rats(std::initializer_list<long> xs) {
    std::vector<Rat> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

Rat coeff(const HomogeneousLift& F, unsigned j, std::vector<unsigned> exps) {
    Multiindex a;
    a.e = std::move(exps);
    auto it = F.forms[j].find(a);
    return it == F.forms[j].end() ? Rat(0) : it->second;
}

HomogeneousLift random_lift(std::mt19937_64& rng, unsigned m, unsigned M, unsigned d) {
    std::uniform_int_distribution<long> coeffs(-5, 5);
    HomogeneousLift F;
    F.m = m;
    F.M = M;
    F.d = d;
    F.forms.assign(M + 1, TermMap{});
    auto monos = multiindices_of_degree(m + 1, d);
    bool nonzero = false;
    for (unsigned j = 0; j <= M; ++j)
        for (const Multiindex& a : monos) {
            long c = coeffs(rng);
            if (c != 0) {
                F.forms[j].emplace(a, Rat(c));
                nonzero = true;
            }
        }
    if (!nonzero) F.forms[0].emplace(monos.front(), Rat(1));
    return F;
}

std::vector<Rat> random_point(std::mt19937_64& rng, unsigned n) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 4);
    std::vector<Rat> x;
    for (unsigned i = 0; i < n; ++i) {
        Rat r(num(rng), den(rng));
        r.canonicalize();
        x.push_back(r);
    }
    return x;
}

}  // namespace

TEST_CASE("evaluate: power map, Chebyshev, zero point") {
    HomogeneousLift P2 = power_map(1, 2);
    CHECK(evaluate(P2, rats({1, 2})) == rats({1, 4}));

    HomogeneousLift T2 = chebyshev_lift(2);
    CHECK(coeff(T2, 0, {2, 0}) == Rat(1));
    CHECK(coeff(T2, 0, {0, 2}) == Rat(-2));
    CHECK(coeff(T2, 1, {0, 2}) == Rat(1));
    CHECK(evaluate(T2, rats({3, 1})) == rats({7, 1}));

    HomogeneousLift S = lift_from_spec("rat:(z^2-1)|(2z)");
    CHECK(evaluate(S, rats({0, 0})) == rats({0, 0}));
    CHECK_THROWS_AS(evaluate(S, rats({1, 2, 3})), std::invalid_argument);
}

TEST_CASE("normalize clears denominators, content, and sign") {
    // (X^2/2 + Y^2, X^2) -> (X^2 + 2Y^2, 2X^2)
    HomogeneousLift F;
    F.m = 1;
    F.M = 1;
    F.d = 2;
    F.forms.assign(2, TermMap{});
    F.forms[0].emplace(Multiindex{{2, 0}}, Rat(1, 2));
    F.forms[0].emplace(Multiindex{{0, 2}}, Rat(1));
    F.forms[1].emplace(Multiindex{{2, 0}}, Rat(1));
    NormalizedLift N = normalize(F);
    CHECK(coeff(*N, 0, {2, 0}) == Rat(1));
    CHECK(coeff(*N, 0, {0, 2}) == Rat(2));
    CHECK(coeff(*N, 1, {2, 0}) == Rat(2));

    // (-3X^3, -6Y^3) -> (X^3, 2Y^3)
    HomogeneousLift G;
    G.m = 1;
    G.M = 1;
    G.d = 3;
    G.forms.assign(2, TermMap{});
    G.forms[0].emplace(Multiindex{{3, 0}}, Rat(-3));
    G.forms[1].emplace(Multiindex{{0, 3}}, Rat(-6));
    NormalizedLift NG = normalize(G);
    CHECK(coeff(*NG, 0, {3, 0}) == Rat(1));
    CHECK(coeff(*NG, 1, {0, 3}) == Rat(2));

    // idempotence
    NormalizedLift NN = normalize(*NG);
    CHECK(NN->forms[0] == NG->forms[0]);
    CHECK(NN->forms[1] == NG->forms[1]);

    HomogeneousLift Z;
    Z.m = 0;
    Z.M = 0;
    Z.d = 1;
    Z.forms.assign(1, TermMap{});
    CHECK_THROWS_AS(normalize(Z), std::invalid_argument);
}

TEST_CASE("normalize is proportionality-invariant (fuzz)") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<long> num(-7, 7), den(1, 7);
    for (int trial = 0; trial < 100; ++trial) {
        HomogeneousLift F = random_lift(rng, 1, 1, 3);
        Rat lambda(num(rng), den(rng));
        lambda.canonicalize();
        if (lambda == 0) lambda = Rat(1, 2);
        HomogeneousLift G = F;
        for (TermMap& f : G.forms)
            for (auto& [a, c] : f) c *= lambda;
        NormalizedLift NF = normalize(F), NG = normalize(G);
        for (unsigned j = 0; j <= F.M; ++j) CHECK(NF->forms[j] == NG->forms[j]);
    }
}

TEST_CASE("compose: Chebyshev law, identity, powers") {
    for (unsigned d = 2; d <= 4; ++d)
        for (unsigned e = 2; e <= 4; ++e) {
            HomogeneousLift lhs = compose(chebyshev_lift(d), chebyshev_lift(e));
            HomogeneousLift rhs = chebyshev_lift(d * e);
            REQUIRE(lhs.forms.size() == rhs.forms.size());
            for (size_t j = 0; j < lhs.forms.size(); ++j) CHECK(lhs.forms[j] == rhs.forms[j]);
        }

    HomogeneousLift F = lift_from_spec("rat:(z^2+1)|1");
    HomogeneousLift FI = compose(F, identity_map(1));
    CHECK(FI.forms[0] == F.forms[0]);
    CHECK(FI.forms[1] == F.forms[1]);

    HomogeneousLift P6 = compose(power_map(2, 2), power_map(2, 3));
    HomogeneousLift P6d = power_map(2, 6);
    for (size_t j = 0; j < 3; ++j) CHECK(P6.forms[j] == P6d.forms[j]);

    CHECK_THROWS_AS(compose(power_map(2, 2), power_map(1, 2)), std::invalid_argument);
}

TEST_CASE("evaluate(compose) = evaluate o evaluate (fuzz)") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 200; ++trial) {
        HomogeneousLift F = random_lift(rng, 1, 1, 2);
        HomogeneousLift G = random_lift(rng, 1, 1, 2);
        HomogeneousLift FG = compose(F, G);
        std::vector<Rat> x = random_point(rng, 2);
        CHECK(evaluate(FG, x) == evaluate(F, evaluate(G, x)));
    }
    // a higher-dimensional spot check
    std::mt19937_64 rng2(34);
    HomogeneousLift F = random_lift(rng2, 2, 2, 2);
    HomogeneousLift G = random_lift(rng2, 2, 2, 3);
    HomogeneousLift FG = compose(F, G);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rat> x = random_point(rng2, 3);
        CHECK(evaluate(FG, x) == evaluate(F, evaluate(G, x)));
    }
}

TEST_CASE("homogeneity of evaluation (fuzz)") {
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<long> num(-6, 6), den(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
        HomogeneousLift F = random_lift(rng, 2, 1, 3);
        std::vector<Rat> x = random_point(rng, 3);
        Rat lambda(num(rng), den(rng));
        lambda.canonicalize();
        std::vector<Rat> lx = x;
        for (Rat& c : lx) c *= lambda;
        std::vector<Rat> lhs = evaluate(F, lx);
        std::vector<Rat> rhs = evaluate(F, x);
        Rat scale = lambda * lambda * lambda;
        for (size_t j = 0; j < lhs.size(); ++j) CHECK(lhs[j] == rhs[j] * scale);
    }
}

TEST_CASE("height of a map") {
    CHECK(height_of_map(power_map(3, 4)) == 1);
    CHECK(height_of_map(chebyshev_lift(2)) == 2);
    HomogeneousLift F;
    F.m = 1;
    F.M = 1;
    F.d = 2;
    F.forms.assign(2, TermMap{});
    F.forms[0].emplace(Multiindex{{2, 0}}, Rat(2));
    F.forms[1].emplace(Multiindex{{0, 2}}, Rat(2));
    CHECK(height_of_map(F) == 1);  // content 2 divides out

    std::mt19937_64 rng(77);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
    for (int trial = 0; trial < 100; ++trial) {
        HomogeneousLift G = random_lift(rng, 1, 1, 2);
        Rat lambda(num(rng), den(rng));
        lambda.canonicalize();
        if (lambda == 0) lambda = Rat(3, 7);
        HomogeneousLift H = G;
        for (TermMap& f : H.forms)
            for (auto& [a, c] : f) c *= lambda;
        CHECK(height_of_map(G) == height_of_map(H));
    }
}

TEST_CASE("constructors") {
    HomogeneousLift P = power_map(1, 3);
    CHECK(coeff(P, 0, {3, 0}) == Rat(1));
    CHECK(coeff(P, 1, {0, 3}) == Rat(1));

    // s(z) = (z^2-1)/2z
    HomogeneousLift S = lift_from_spec("rat:(z^2-1)|(2z)");
    CHECK(S.d == 2);
    CHECK(coeff(S, 0, {2, 0}) == Rat(1));
    CHECK(coeff(S, 0, {0, 2}) == Rat(-1));
    CHECK(coeff(S, 1, {1, 1}) == Rat(2));

    // degenerate rational function rejected
    CHECK_THROWS_AS(lift_from_spec("rat:(z^2-z)|z"), std::invalid_argument);

    // chebyshev degrees via the recurrence: t_3 = z^3 - 3z, t_4 = z^4 - 4z^2 + 2
    HomogeneousLift T3 = chebyshev_lift(3);
    CHECK(coeff(T3, 0, {3, 0}) == Rat(1));
    CHECK(coeff(T3, 0, {1, 2}) == Rat(-3));
    HomogeneousLift T4 = chebyshev_lift(4);
    CHECK(coeff(T4, 0, {4, 0}) == Rat(1));
    CHECK(coeff(T4, 0, {2, 2}) == Rat(-4));
    CHECK(coeff(T4, 0, {0, 4}) == Rat(2));
}

TEST_CASE("JSON round trip and builder parsing") {
    HomogeneousLift S = lift_from_spec("rat:(z^2-1)|(2z)");
    HomogeneousLift back = lift_from_json(lift_to_json(S));
    CHECK(back.m == S.m);
    CHECK(back.d == S.d);
    for (size_t j = 0; j < S.forms.size(); ++j) CHECK(back.forms[j] == S.forms[j]);

    CHECK_THROWS(lift_from_spec("json:{\"m\":1}"));
    CHECK_THROWS(lift_from_spec("rat:z^2"));
    CHECK_THROWS(lift_from_spec("/nonexistent/path.json"));

    // polynomial parser corner cases
    CHECK(parse_poly("z^2 - 2z + 1") == std::vector<Rat>{Rat(1), Rat(-2), Rat(1)});
    CHECK(parse_poly("-z") == std::vector<Rat>{Rat(0), Rat(-1)});
    CHECK(parse_poly("7") == std::vector<Rat>{Rat(7)});
    CHECK(parse_poly("3z^2+z") == std::vector<Rat>{Rat(0), Rat(1), Rat(3)});
}

TEST_CASE("iterates") {
    HomogeneousLift T2 = chebyshev_lift(2);
    HomogeneousLift T8 = iterate_map(T2, 3);
    HomogeneousLift T8d = chebyshev_lift(8);
    for (size_t j = 0; j < 2; ++j) CHECK(T8.forms[j] == T8d.forms[j]);
    HomogeneousLift I = iterate_map(T2, 0);
    CHECK(I.d == 1);
}
