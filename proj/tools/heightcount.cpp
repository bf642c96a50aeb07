// heightcount: exact local data and empirical point counts for morphisms
// of projective spaces over Q.
//
// Subcommands: check, resultant, density, local-factor, arch-volume,
// constant, chat, canonical, count, report.  Every report embeds the
// effective configuration; given the same configuration and seed the
// output is reproducible byte for byte.
//
// Exit codes: 0 ok, 2 parse error, 3 non-morphism input, 4 resource cap.

#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "hc/constants.hpp"
#include "hc/counting.hpp"
#include "hc/padic.hpp"

using json = nlohmann::ordered_json;
using namespace hc;

namespace {

struct RunConfig {
    std::string morphism;
    std::string format = "json";
    std::uint64_t seed = 0x5EED;
    long mc_samples = 1'000'000;
    double quad_tol = 1e-8;
    int green_iters = 60;
    int exact_iters = 3;
    int chat_k = 3;
    int canonical_exact_iters = 8;
    int threads = 0;  // 0 = all available cores

    ArchConfig arch() const {
        ArchConfig cfg;
        cfg.quad_tol = quad_tol;
        cfg.mc_samples = mc_samples;
        cfg.seed = seed;
        cfg.green_iters = green_iters;
        cfg.exact_iters = exact_iters;
        return cfg;
    }

    json to_json() const {
        json j;
        j["morphism"] = morphism;
        j["format"] = format;
        j["seed"] = seed;
        j["mc_samples"] = mc_samples;
        j["quad_tol"] = quad_tol;
        j["green_iters"] = green_iters;
        j["exact_iters"] = exact_iters;
        j["chat_k"] = chat_k;
        j["canonical_exact_iters"] = canonical_exact_iters;
        j["threads"] = threads;
        return j;
    }
};

json ideal_json(const FactoredIdeal& I) {
    json j = json::object();
    for (const auto& [p, e] : I.exponents()) j[p.get_str()] = e;
    return j;
}

json arch_json(const ArchEstimate& a) {
    json j;
    j["value"] = a.value;
    j["error"] = a.error;
    j["method"] = a.method;
    j["seed"] = a.seed;
    j["samples"] = a.samples_or_panels;
    return j;
}

json density_json(const LocalDensityTable& t, unsigned m, unsigned d) {
    auto [c, mu] = local_factor(t, m, d);
    json j;
    j["p"] = t.p.get_si();
    j["depth"] = t.depth;
    json delta = json::object();
    for (const auto& [i, w] : t.weights) delta[std::to_string(i)] = rat_to_string(w);
    j["delta"] = delta;
    if (t.weights.size() == 1 && t.weights.begin()->first > 0)
        j["note"] = "excess valuation is a nonzero constant on P^m(Z/p^s)";
    json terms = json::array();
    for (const auto& [i, w] : c.terms) terms.push_back({i, rat_to_string(w)});
    j["c_local"] = {{"terms", terms}, {"float", c.float_value}};
    if (c.is_rational()) j["c_local"]["exact"] = rat_to_string(c.rational_value());
    j["mu"] = rat_to_string(mu);
    return j;
}

json nonarch_json(const NonarchConstant& nc) {
    json j;
    json primes = json::array();
    for (const Int& p : nc.bad_primes) primes.push_back(p.get_str());
    j["bad_primes"] = primes;
    json factors = json::array();
    for (size_t k = 0; k < nc.locals.size(); ++k) {
        json f;
        f["p"] = nc.locals[k].p.get_si();
        f["float"] = nc.locals[k].float_value;
        if (nc.locals[k].is_rational()) f["exact"] = rat_to_string(nc.locals[k].rational_value());
        f["mu"] = rat_to_string(nc.mus[k]);
        factors.push_back(f);
    }
    j["factors"] = factors;
    if (nc.exact.is_rational()) j["exact"] = rat_to_string(nc.exact.rational_value());
    j["value"] = nc.value;
    j["C0d"] = nc.C0d.get_str();
    return j;
}

json constant_json(const ConstantReport& r) {
    json j;
    j["m"] = r.m;
    j["d"] = r.d;
    j["zeta"] = {{"value", r.zeta.value}, {"error", r.zeta.error}};
    j["prefactor"] = r.prefactor;
    j["arch"] = arch_json(r.arch);
    j["nonarch"] = nonarch_json(r.nonarch);
    j["height"] = r.height.get_str();
    j["height_power"] = r.height_power;
    j["c"] = r.c_value;
    j["c_error"] = r.c_error;
    return j;
}

void emit(const json& payload, const RunConfig& rc) {
    json out = payload;
    out["config"] = rc.to_json();
    if (rc.format == "pretty") {
        const char* no_color = std::getenv("NO_COLOR");
        if (no_color == nullptr)
            std::cout << "\033[1m" << out["command"].get<std::string>() << "\033[0m\n";
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << out.dump() << "\n";
    }
}

std::vector<Int> parse_point(const std::string& text) {
    std::vector<Int> coords;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            coords.emplace_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    if (!cur.empty()) coords.emplace_back(cur);
    if (coords.empty()) throw std::invalid_argument("point: expected comma-separated integers");
    return coords;
}

int run(int argc, char** argv) {
    CLI::App app{"exact constants and point counts for morphisms of projective spaces over Q"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    RunConfig rc;
    app.add_option("--seed", rc.seed, "RNG seed for stochastic estimates");
    app.add_option("--mc-samples", rc.mc_samples, "Monte Carlo sample count");
    app.add_option("--quad-tol", rc.quad_tol, "quadrature tolerance (m = 1)");
    app.add_option("--green-iters", rc.green_iters, "Green's function iterations");
    app.add_option("--exact-iters", rc.exact_iters, "exact compositions for map-height limits");
    app.add_option("--threads", rc.threads, "worker threads (0 = all cores)");
    app.add_option("--format", rc.format, "output format: json, csv, or pretty")
        ->check(CLI::IsMember({"json", "csv", "pretty"}));

    std::string prime_text, mode_text = "pullback", xs_text, point_text, g_text = "id:1";
    unsigned gamma_val = 0;
    bool threshold_from_limit = false;

    auto add_morphism = [&](CLI::App* sub) {
        sub->add_option("morphism", rc.morphism,
                        "builder (power:m,d | chebyshev:d | rat:P(z)|Q(z) | id:m) or JSON file")
            ->required();
    };

    CLI::App* check = app.add_subcommand("check", "is the lift a morphism?");
    add_morphism(check);
    CLI::App* resultant = app.add_subcommand("resultant", "resultant ideal and norm bound");
    add_morphism(resultant);
    CLI::App* density = app.add_subcommand("density", "local density table at a prime");
    add_morphism(density);
    density->add_option("--prime", prime_text, "prime p")->required();
    CLI::App* localf = app.add_subcommand("local-factor", "exact local factors c_p and mu_p");
    add_morphism(localf);
    localf->add_option("--prime", prime_text, "prime p (default: all bad primes)");
    CLI::App* archv = app.add_subcommand("arch-volume", "volume of the fundamental domain at infinity");
    add_morphism(archv);
    CLI::App* constant = app.add_subcommand("constant", "assemble the leading constant");
    add_morphism(constant);
    CLI::App* chat = app.add_subcommand("chat", "constants along iterates and their limit");
    add_morphism(chat);
    chat->add_option("--k", rc.chat_k, "number of iterates (cap 5)");
    chat->add_option("--g", g_text, "composed morphism g (default identity)");
    chat->add_flag("--threshold-from-limit", threshold_from_limit,
                   "threshold |F-hat o G| instead of the normalized 1");
    CLI::App* canonical = app.add_subcommand("canonical", "canonical height of a point");
    add_morphism(canonical);
    canonical->add_option("--point", point_text, "comma-separated integer coordinates")->required();
    canonical->add_option("--exact-orbit", rc.canonical_exact_iters, "exact orbit steps");
    CLI::App* count = app.add_subcommand("count", "empirical counting functions");
    add_morphism(count);
    count->add_option("--mode", mode_text, "pullback | image | canonical")
        ->check(CLI::IsMember({"pullback", "image", "canonical"}));
    count->add_option("--X", xs_text, "comma-separated height bounds")->required();
    count->add_option("--gamma", gamma_val, "mapping-symmetry count for image predictions");
    CLI::App* report = app.add_subcommand("report", "everything at once");
    add_morphism(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

#ifdef _OPENMP
    if (rc.threads > 0) omp_set_num_threads(rc.threads);
#endif

    HomogeneousLift lift = lift_from_spec(rc.morphism);

    if (check->parsed()) {
        ResultantData rd = resultant_data(lift);
        json j;
        j["command"] = "check";
        j["is_morphism"] = rd.is_morphism;
        json primes = json::array();
        for (const auto& [p, e] : rd.res_ideal.exponents()) primes.push_back(p.get_str());
        j["bad_primes"] = primes;
        if (!rd.is_morphism) j["witness"] = "gcd of maximal minors = 0";
        emit(j, rc);
        return 0;
    }

    if (resultant->parsed()) {
        ResultantData rd = resultant_data(lift);
        if (!rd.is_morphism)
            throw NonMorphismError("resultant: gcd of maximal minors = 0 (not a morphism)");
        NormalizedLift N = normalize(lift);
        json j;
        j["command"] = "resultant";
        j["is_morphism"] = true;
        j["res"] = ideal_json(rd.res_ideal);
        j["norm"] = rd.invariant_factor_product.get_str();
        j["bound"] = resultant_norm_bound(N).get_str();
        if (auto G = find_pseudoinverse(N))  // least degree found empirically
            j["pseudoinverse_degree"] = G->e;
        json primes = json::array();
        for (const auto& [p, e] : rd.res_ideal.exponents()) primes.push_back(p.get_str());
        j["bad_primes"] = primes;
        emit(j, rc);
        return 0;
    }

    CertifiedMorphism f(lift);

    if (density->parsed() || localf->parsed()) {
        json j;
        j["command"] = density->parsed() ? "density" : "local-factor";
        if (!prime_text.empty()) {
            Int p(prime_text);
            if (!is_prime(p)) throw std::invalid_argument("--prime expects a prime number");
            j.update(density_json(local_density(f, p), f->m, f->d));
        } else {
            NonarchConstant nc = nonarch_constant(f);
            json tables = json::array();
            for (const LocalDensityTable& t : nc.tables) tables.push_back(density_json(t, f->m, f->d));
            j["local"] = tables;
            j["c0"] = nonarch_json(nc);
        }
        emit(j, rc);
        return 0;
    }

    if (archv->parsed()) {
        json j = arch_json(arch_volume(f, rc.arch()));
        j["command"] = "arch-volume";
        emit(j, rc);
        return 0;
    }

    if (constant->parsed()) {
        json j = constant_json(assemble_constant(f, rc.arch()));
        j["command"] = "constant";
        emit(j, rc);
        return 0;
    }

    if (chat->parsed()) {
        ArchConfig cfg = rc.arch();
        cfg.threshold_from_limit = threshold_from_limit;
        HomogeneousLift g = lift_from_spec(g_text);
        ChatSequence cs = chat_sequence(f, g, static_cast<unsigned>(rc.chat_k), cfg);
        json j;
        j["command"] = "chat";
        json entries = json::array();
        for (size_t i = 0; i < cs.entries.size(); ++i) {
            json e = constant_json(cs.entries[i]);
            e["i"] = i;
            entries.push_back(e);
        }
        j["entries"] = entries;
        j["limiting_arch"] = arch_json(cs.limiting_arch);
        j["nonarch_limit"] = cs.nonarch_limit;
        j["nonarch_stabilized"] = cs.nonarch_stabilized;
        j["chat"] = cs.chat_estimate;
        j["chat_error"] = cs.chat_error;
        emit(j, rc);
        return 0;
    }

    if (canonical->parsed()) {
        CanonicalHeightParams params;
        params.exact_iters = rc.canonical_exact_iters;
        params.green_iters = rc.green_iters;
        std::vector<Int> coords = parse_point(point_text);
        CanonicalHeightEstimate h = canonical_height(f, coords, params);
        json j;
        j["command"] = "canonical";
        json cj = json::array();
        for (const Int& c : coords) cj.push_back(c.get_str());
        j["point"] = cj;
        j["hhat"] = h.value;
        j["Hhat"] = std::exp(h.value);
        j["error"] = h.error;
        j["iterations"] = h.iterations;
        emit(j, rc);
        return 0;
    }

    if (count->parsed()) {
        std::vector<double> Xs;
        std::string cur;
        for (char ch : xs_text + ",") {
            if (ch == ',') {
                if (!cur.empty()) Xs.push_back(std::stod(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        CountMode mode = mode_text == "image"       ? CountMode::image
                         : mode_text == "canonical" ? CountMode::canonical
                                                    : CountMode::pullback;
        std::optional<unsigned> gamma;
        if (gamma_val > 0) gamma = gamma_val;
        std::vector<CountRow> rows = convergence_report(f, Xs, mode, rc.arch(), gamma);
        if (rc.format == "json") {
            json j;
            j["command"] = "count";
            j["mode"] = mode_text;
            json rj = json::array();
            for (const CountRow& r : rows)
                rj.push_back({{"X", r.X},
                              {"count", r.count},
                              {"predicted", r.predicted},
                              {"ratio", r.ratio},
                              {"flagged", r.flagged_boundary}});
            j["rows"] = rj;
            emit(j, rc);
        } else {
            std::cout << "# config: " << rc.to_json().dump() << "\n";
            std::cout << "X,count,predicted,ratio,flagged\n";
            for (const CountRow& r : rows)
                std::cout << r.X << "," << r.count << "," << r.predicted << "," << r.ratio << ","
                          << r.flagged_boundary << "\n";
        }
        return 0;
    }

    if (report->parsed()) {
        json j;
        j["command"] = "report";
        j["morphism"] = lift_to_string(*f);
        j["is_morphism"] = true;
        j["res"] = ideal_json(f.res.res_ideal);
        j["norm_bound"] = resultant_norm_bound(f.F).get_str();
        NonarchConstant nc = nonarch_constant(f);
        json tables = json::array();
        for (const LocalDensityTable& t : nc.tables) tables.push_back(density_json(t, f->m, f->d));
        j["local"] = tables;
        ConstantReport cr = assemble_constant(f, rc.arch());
        j["constant"] = constant_json(cr);
        ErrorConstants ec = error_constants(f);
        j["error_constants"] = {{"kappa_inf", ec.kappa_inf},
                                {"C_inf", ec.C_inf},
                                {"C0d", ec.C0d.get_str()}};
        emit(j, rc);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const NonMorphismError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
