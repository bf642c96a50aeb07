#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "hc/constants.hpp"

using namespace hc;
using hc_test::corpus_morphisms;

namespace {

const double kPi = std::numbers::pi;

std::vector<Int> pt(std::initializer_list<long> xs) {
    std::vector<Int> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("zeta values") {
    CHECK(zeta_int(2).value == kPi * kPi / 6.0);
    CHECK(zeta_int(2).error == 0.0);
    CHECK(zeta_int(4).value == std::pow(kPi, 4) / 90.0);
    // odd values against reference digits, within the reported tail bound
    CHECK(std::abs(zeta_int(3).value - 1.2020569031595943) <= 2e-12);
    CHECK(std::abs(zeta_int(5).value - 1.0369277551433699) <= 2e-12);
    CHECK(std::abs(zeta_int(7).value - 1.0083492773819228) <= 2e-12);
    CHECK_THROWS_AS(zeta_int(1), std::invalid_argument);
    CHECK_THROWS_AS(zeta_int(0), std::invalid_argument);
}

TEST_CASE("assemble_constant: Schanuel and the unit disk") {
    ArchConfig cfg;
    ConstantReport id = assemble_constant(CertifiedMorphism(identity_map(1)), cfg);
    CHECK(id.prefactor == doctest::Approx(3.0 / (kPi * kPi)).epsilon(1e-14));
    CHECK(std::abs(id.c_value - 12.0 / (kPi * kPi)) <= 1e-6);

    ConstantReport disk = assemble_constant(CertifiedMorphism(lift_from_spec("rat:(z^2+1)|1")), cfg);
    CHECK(std::abs(disk.c_value - 3.0 / kPi) <= 1e-6);
    CHECK(disk.height == 1);
    CHECK(disk.nonarch.value == 1.0);

    // power maps: c = 2^{m+1} / (2 zeta(m+1))
    ConstantReport p22 = assemble_constant(CertifiedMorphism(power_map(2, 2)), cfg);
    double want = 8.0 / (2.0 * zeta_int(3).value);
    CHECK(std::abs(p22.c_value - want) <= p22.c_error + 1e-9);

    // report wiring: the product identity holds by construction
    ConstantReport s = assemble_constant(CertifiedMorphism(lift_from_spec("rat:(z^2-1)|(2z)")), cfg);
    CHECK(s.c_value ==
          doctest::Approx(s.prefactor * s.arch.value * s.nonarch.value / s.height_power)
              .epsilon(1e-14));
    CHECK(s.height == 2);
    CHECK(s.height_power == 2.0);
    CHECK(s.nonarch.exact.rational_value() == Rat(4, 3));
    CHECK(s.c_error > 0);
}

TEST_CASE("assemble_constant is lift invariant") {
    ArchConfig cfg;
    cfg.mc_samples = 100'000;
    HomogeneousLift L = lift_from_spec("rat:(2z^2+1)|1");
    HomogeneousLift scaled = L;
    for (TermMap& f : scaled.forms)
        for (auto& [a, c] : f) c *= Rat(-9, 14);
    ConstantReport a = assemble_constant(CertifiedMorphism(L), cfg);
    ConstantReport b = assemble_constant(CertifiedMorphism(scaled), cfg);
    CHECK(a.c_value == b.c_value);  // same normalized lift, same estimator
}

TEST_CASE("canonical height: power map is the ordinary height") {
    CertifiedMorphism pw(power_map(1, 2));
    CanonicalHeightParams params;
    for (int k : {2, 5, 8}) {
        params.exact_iters = k;
        CanonicalHeightEstimate h = canonical_height(pw, pt({2, 1}), params);
        CHECK(std::abs(h.value - std::log(2.0)) <= 4e-16);
        CHECK(h.error == 0.0);
        CHECK(h.iterations == k);
    }
    CanonicalHeightEstimate h5 = canonical_height(pw, pt({10, 7}), params);
    CHECK(std::abs(h5.value - std::log(10.0)) <= 1e-14);

    // scale invariance of the input lift of the point
    CanonicalHeightEstimate hs = canonical_height(pw, pt({20, 14}), params);
    CHECK(hs.value == h5.value);
}

TEST_CASE("canonical height: Chebyshev closed form and fixed points") {
    CertifiedMorphism T2(chebyshev_lift(2));
    CanonicalHeightParams params;
    CanonicalHeightEstimate h = canonical_height(T2, pt({3, 1}), params);
    double want = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    CHECK(std::abs(h.value - want) <= h.error + 1e-12);

    // fixed point (2 : 1) of t_2 has canonical height 0
    CanonicalHeightEstimate hf = canonical_height(T2, pt({2, 1}), params);
    CHECK(std::abs(hf.value) <= 2 * hf.error + 1e-15);

    // preperiodic (0 : 1) -> (-2 : 1) -> (2 : 1) -> (2 : 1)
    CanonicalHeightEstimate hp = canonical_height(T2, pt({0, 1}), params);
    CHECK(std::abs(hp.value) <= 2 * hp.error + 1e-15);

    CHECK_THROWS_AS(canonical_height(CertifiedMorphism(identity_map(1)), pt({1, 2}), params),
                    std::invalid_argument);
    CHECK_THROWS_AS(canonical_height(T2, pt({0, 0}), params), std::invalid_argument);
}

TEST_CASE("canonical height functional equation (fuzz, heights <= 20)") {
    CanonicalHeightParams params;
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long> coord(-20, 20);
    for (const auto& name : {std::string("chebyshev(2)"), std::string("s"), std::string("2z^2+1"),
                             std::string("z^2+1")}) {
        auto maps = corpus_morphisms();
        auto it = std::find_if(maps.begin(), maps.end(),
                               [&](const auto& e) { return e.name == name; });
        REQUIRE(it != maps.end());
        CertifiedMorphism f(it->lift);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<Int> x = pt({coord(rng), coord(rng)});
            if (x[0] == 0 && x[1] == 0) continue;
            std::vector<Int> fx = evaluate_int(*f, x);
            bool zero = true;
            for (const Int& c : fx)
                if (c != 0) zero = false;
            if (zero) continue;
            CanonicalHeightEstimate hx = canonical_height(f, x, params);
            CanonicalHeightEstimate hfx = canonical_height(f, fx, params);
            CHECK(std::abs(hfx.value - f->d * hx.value) <=
                  hfx.error + f->d * hx.error + 1e-12);
        }
    }
}

TEST_CASE("chat sequence: Chebyshev tends to 16/pi^2 with trivial finite part") {
    ArchConfig cfg;
    CertifiedMorphism T2(chebyshev_lift(2));
    ChatSequence cs = chat_sequence(T2, identity_map(1), 3, cfg);
    REQUIRE(cs.entries.size() == 4);
    // nonarchimedean part is exactly 1 at every iterate (good reduction)
    for (const ConstantReport& r : cs.entries) {
        CHECK(r.nonarch.exact.is_rational());
        CHECK(r.nonarch.exact.rational_value() == Rat(1));
    }
    CHECK(cs.nonarch_stabilized);
    double target = 16.0 / (kPi * kPi);
    CHECK(std::abs(cs.chat_estimate - target) <= std::max(cs.chat_error, 0.02 * target));
    // the sequence approaches the limit
    CHECK(std::abs(cs.entries[3].c_value - target) < std::abs(cs.entries[0].c_value - target));
    // c(id) opens the sequence
    CHECK(std::abs(cs.entries[0].c_value - 12.0 / (kPi * kPi)) <= 1e-6);
}

TEST_CASE("chat sequence: s-lift stabilizes at 4/3 and tends to 4/pi") {
    ArchConfig cfg;
    CertifiedMorphism S(lift_from_spec("rat:(z^2-1)|(2z)"));
    ChatSequence cs = chat_sequence(S, identity_map(1), 2, cfg);
    for (size_t i = 1; i < cs.entries.size(); ++i) {
        CHECK(cs.entries[i].nonarch.exact.is_rational());
        CHECK(cs.entries[i].nonarch.exact.rational_value() == Rat(4, 3));
    }
    CHECK(cs.nonarch_stabilized);
    CHECK(cs.nonarch_limit == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    double target = 4.0 / kPi;
    CHECK(std::abs(cs.chat_estimate - target) <= std::max(cs.chat_error, 0.02 * target));
}

TEST_CASE("chat sequence: power-map composition leaves the constant alone") {
    ArchConfig cfg;
    cfg.mc_samples = 100'000;
    CertifiedMorphism P(power_map(1, 2));
    HomogeneousLift g = lift_from_spec("rat:(z^2+1)|1");
    ChatSequence cs = chat_sequence(P, g, 2, cfg);
    for (const ConstantReport& r : cs.entries) {
        CHECK(r.nonarch.exact.is_rational());
        CHECK(r.nonarch.exact.rational_value() == Rat(1));
        CHECK(std::abs(r.c_value - 3.0 / kPi) <= std::max(r.c_error, 1e-4));
    }
    CHECK(std::abs(cs.chat_estimate - 3.0 / kPi) <= std::max(cs.chat_error, 1e-3));
}

TEST_CASE("chat sequence composition cap") {
    ArchConfig cfg;
    CertifiedMorphism T2(chebyshev_lift(2));
    CHECK_THROWS_AS(chat_sequence(T2, identity_map(1), 6, cfg), std::invalid_argument);
}
