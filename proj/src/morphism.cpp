#include "hc/morphism.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hc {

Multiindex Multiindex::operator+(const Multiindex& o) const {
    if (e.size() != o.e.size()) throw std::invalid_argument("Multiindex: length mismatch");
    Multiindex r = *this;
    for (size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
    return r;
}

Multiindex Multiindex::operator-(const Multiindex& o) const {
    if (!o.divides(*this)) throw std::invalid_argument("Multiindex: difference not defined");
    Multiindex r = *this;
    for (size_t i = 0; i < e.size(); ++i) r.e[i] -= o.e[i];
    return r;
}

std::vector<Multiindex> multiindices_of_degree(unsigned n, unsigned long d) {
    std::vector<Multiindex> out;
    Multiindex cur;
    cur.e.assign(n, 0);
    // depth-first over positions, X_0-heavy first to match graded-lex
    auto rec = [&](auto&& self, unsigned pos, unsigned long rem) -> void {
        if (pos + 1 == n) {
            cur.e[pos] = static_cast<unsigned>(rem);
            out.push_back(cur);
            return;
        }
        for (long k = static_cast<long>(rem); k >= 0; --k) {
            cur.e[pos] = static_cast<unsigned>(k);
            self(self, pos + 1, rem - k);
        }
    };
    if (n == 0) return out;
    rec(rec, 0, d);
    return out;
}

void HomogeneousLift::validate() const {
    if (forms.size() != M + 1) throw std::invalid_argument("lift: expected M+1 forms");
    if (d < 1) throw std::invalid_argument("lift: degree must be >= 1");
    bool nonzero = false;
    for (const TermMap& f : forms) {
        for (const auto& [a, c] : f) {
            if (a.e.size() != m + 1) throw std::invalid_argument("lift: multiindex length != m+1");
            if (a.degree() != d) throw std::invalid_argument("lift: term of wrong degree");
            if (c != 0) nonzero = true;
        }
    }
    if (!nonzero) throw std::invalid_argument("lift: all coefficients vanish");
}

namespace {

template <typename T>
T power(const T& base, unsigned e) {
    T r = T(1);
    T b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace

std::vector<Rat> evaluate(const HomogeneousLift& F, std::span<const Rat> x) {
    if (x.size() != F.m + 1) throw std::invalid_argument("evaluate: point has wrong dimension");
    std::vector<Rat> out(F.M + 1, Rat(0));
    for (size_t j = 0; j < F.forms.size(); ++j) {
        for (const auto& [a, c] : F.forms[j]) {
            Rat term = c;
            for (size_t i = 0; i <= F.m; ++i)
                if (a.e[i]) term *= power(x[i], a.e[i]);
            out[j] += term;
        }
    }
    return out;
}

std::vector<Int> evaluate_int(const HomogeneousLift& F, std::span<const Int> x) {
    if (x.size() != F.m + 1) throw std::invalid_argument("evaluate: point has wrong dimension");
    std::vector<Int> out(F.M + 1, Int(0));
    for (size_t j = 0; j < F.forms.size(); ++j) {
        for (const auto& [a, c] : F.forms[j]) {
            if (c.get_den() != 1) throw std::invalid_argument("evaluate_int: non-integer coefficient");
            Int term = Int(c.get_num());
            for (size_t i = 0; i <= F.m; ++i)
                if (a.e[i]) term *= power(x[i], a.e[i]);
            out[j] += term;
        }
    }
    return out;
}

std::vector<double> evaluate_double(const HomogeneousLift& F, std::span<const double> x) {
    std::vector<double> out;
    evaluate_double_into(F, x, out);
    return out;
}

void evaluate_double_into(const HomogeneousLift& F, std::span<const double> x,
                          std::vector<double>& out) {
    out.assign(F.M + 1, 0.0);
    for (size_t j = 0; j < F.forms.size(); ++j) {
        for (const auto& [a, c] : F.forms[j]) {
            double term = c.get_d();
            for (size_t i = 0; i <= F.m; ++i)
                for (unsigned k = 0; k < a.e[i]; ++k) term *= x[i];
            out[j] += term;
        }
    }
}

NormalizedLift normalize(const HomogeneousLift& F) {
    F.validate();
    // clear denominators, then divide out the joint content
    Int den_lcm = 1;
    for (const TermMap& f : F.forms)
        for (const auto& [a, c] : f)
            if (c != 0) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    Int content = 0;
    for (const TermMap& f : F.forms)
        for (const auto& [a, c] : f) {
            Int z = Int(Rat(c * den_lcm).get_num());
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), z.get_mpz_t());
        }
    Rat scale = Rat(den_lcm) / Rat(content);
    // sign: first nonzero coefficient in form-major graded-lex order positive
    for (const TermMap& f : F.forms) {
        bool found = false;
        for (const auto& [a, c] : f)
            if (c != 0) {
                if (c * scale < 0) scale = -scale;
                found = true;
                break;
            }
        if (found) break;
    }
    NormalizedLift out{F};
    for (TermMap& f : out.lift.forms) {
        for (auto it = f.begin(); it != f.end();) {
            it->second *= scale;
            if (it->second == 0)
                it = f.erase(it);
            else
                ++it;
        }
    }
    return out;
}

HomogeneousLift compose(const HomogeneousLift& F, const HomogeneousLift& G) {
    if (G.M != F.m) throw std::invalid_argument("compose: G must map into the domain of F");
    HomogeneousLift out;
    out.m = G.m;
    out.M = F.M;
    out.d = F.d * G.d;
    out.forms.assign(F.M + 1, TermMap{});
    // cache powers of each G_i as term maps
    std::vector<std::vector<TermMap>> pow_cache(F.m + 1);
    auto poly_mul = [&](const TermMap& a, const TermMap& b) {
        TermMap r;
        for (const auto& [ea, ca] : a)
            for (const auto& [eb, cb] : b) {
                Rat c = ca * cb;
                if (c == 0) continue;
                auto [it, fresh] = r.try_emplace(ea + eb, c);
                if (!fresh) {
                    it->second += c;
                    if (it->second == 0) r.erase(it);
                }
            }
        return r;
    };
    auto g_power = [&](unsigned i, unsigned e) -> const TermMap& {
        auto& cache = pow_cache[i];
        if (cache.empty()) {
            TermMap one;
            Multiindex zero;
            zero.e.assign(G.m + 1, 0);
            one.emplace(zero, Rat(1));
            cache.push_back(one);      // G_i^0
            cache.push_back(G.forms[i]);  // G_i^1
        }
        while (cache.size() <= e) cache.push_back(poly_mul(cache.back(), G.forms[i]));
        return cache[e];
    };
    for (size_t j = 0; j <= F.M; ++j) {
        for (const auto& [a, c] : F.forms[j]) {
            TermMap term;
            Multiindex zero;
            zero.e.assign(G.m + 1, 0);
            term.emplace(zero, c);
            for (unsigned i = 0; i <= F.m; ++i)
                if (a.e[i]) term = poly_mul(term, g_power(i, a.e[i]));
            for (const auto& [e2, c2] : term) {
                auto [it, fresh] = out.forms[j].try_emplace(e2, c2);
                if (!fresh) {
                    it->second += c2;
                    if (it->second == 0) out.forms[j].erase(it);
                }
            }
        }
    }
    return out;
}

Int height_of_map(const HomogeneousLift& F) {
    NormalizedLift N = normalize(F);
    Int h = 0;
    for (const TermMap& f : N->forms)
        for (const auto& [a, c] : f) {
            Int v = abs(Int(c.get_num()));
            if (v > h) h = v;
        }
    return h;
}

Rat sup_norm(const HomogeneousLift& F) {
    Rat s = 0;
    for (const TermMap& f : F.forms)
        for (const auto& [a, c] : f) {
            Rat v = abs(c);
            if (v > s) s = v;
        }
    return s;
}

HomogeneousLift power_map(unsigned m, unsigned d) {
    if (d < 1) throw std::invalid_argument("power_map: degree must be >= 1");
    HomogeneousLift F;
    F.m = F.M = m;
    F.d = d;
    F.forms.assign(m + 1, TermMap{});
    for (unsigned i = 0; i <= m; ++i) {
        Multiindex a;
        a.e.assign(m + 1, 0);
        a.e[i] = d;
        F.forms[i].emplace(a, Rat(1));
    }
    return F;
}

HomogeneousLift identity_map(unsigned m) { return power_map(m, 1); }

HomogeneousLift chebyshev_lift(unsigned d) {
    // t_0 = 2, t_1 = z, t_{k+1} = z t_k - t_{k-1}; lift (t_d(X/Y) Y^d, Y^d)
    std::vector<std::vector<Rat>> t(d + 1);
    t[0] = {Rat(2)};
    if (d >= 1) t[1] = {Rat(0), Rat(1)};
    for (unsigned k = 1; k < d; ++k) {
        std::vector<Rat> next(k + 2, Rat(0));
        for (size_t i = 0; i < t[k].size(); ++i) next[i + 1] += t[k][i];
        for (size_t i = 0; i < t[k - 1].size(); ++i) next[i] -= t[k - 1][i];
        t[k + 1] = next;
    }
    std::vector<Rat> q = {Rat(1)};  // denominator 1, homogenized below
    return from_univariate(t[d], q);
}

namespace {

std::vector<Rat> poly_gcd(std::vector<Rat> a, std::vector<Rat> b) {
    auto trim = [](std::vector<Rat>& p) {
        while (!p.empty() && p.back() == 0) p.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        while (a.size() >= b.size() && !a.empty()) {
            Rat q = a.back() / b.back();
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) a[off + i] -= q * b[i];
            trim(a);
        }
        std::swap(a, b);
    }
    return a;
}

}  // namespace

HomogeneousLift from_univariate(const std::vector<Rat>& P, const std::vector<Rat>& Q) {
    auto deg = [](const std::vector<Rat>& p) -> long {
        for (long i = static_cast<long>(p.size()) - 1; i >= 0; --i)
            if (p[i] != 0) return i;
        return -1;
    };
    long dp = deg(P), dq = deg(Q);
    if (dp < 0 || dq < 0) throw std::invalid_argument("from_univariate: zero polynomial");
    std::vector<Rat> g = poly_gcd(P, Q);
    if (g.size() > 1)
        throw std::invalid_argument("from_univariate: P and Q share a nontrivial common factor");
    unsigned d = static_cast<unsigned>(std::max(dp, dq));
    if (d == 0) throw std::invalid_argument("from_univariate: constant map is not a morphism of degree >= 1");
    HomogeneousLift F;
    F.m = F.M = 1;
    F.d = d;
    F.forms.assign(2, TermMap{});
    auto homogenize = [&](const std::vector<Rat>& p, TermMap& f) {
        for (size_t i = 0; i < p.size(); ++i) {
            if (p[i] == 0) continue;
            Multiindex a;
            a.e = {static_cast<unsigned>(i), static_cast<unsigned>(d - i)};
            f.emplace(a, p[i]);
        }
    };
    homogenize(P, F.forms[0]);
    homogenize(Q, F.forms[1]);
    return F;
}

HomogeneousLift iterate_map(const HomogeneousLift& F, unsigned i) {
    if (F.m != F.M) throw std::invalid_argument("iterate_map: not an endomorphism");
    HomogeneousLift out = identity_map(F.m);
    for (unsigned k = 0; k < i; ++k) out = compose(F, out);
    return out;
}

// --- serialization ----------------------------------------------------

std::string lift_to_json(const HomogeneousLift& F) {
    nlohmann::json j;
    j["m"] = F.m;
    j["M"] = F.M;
    j["d"] = F.d;
    auto& forms = j["forms"] = nlohmann::json::array();
    for (const TermMap& f : F.forms) {
        nlohmann::json jf = nlohmann::json::array();
        for (const auto& [a, c] : f) {
            nlohmann::json term;
            term["exps"] = a.e;
            term["coeff"] = rat_to_string(c);
            jf.push_back(term);
        }
        forms.push_back(jf);
    }
    return j.dump();
}

HomogeneousLift lift_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    HomogeneousLift F;
    F.m = j.at("m").get<unsigned>();
    F.M = j.at("M").get<unsigned>();
    F.d = j.at("d").get<unsigned>();
    for (const auto& jf : j.at("forms")) {
        TermMap f;
        for (const auto& term : jf) {
            Multiindex a;
            a.e = term.at("exps").get<std::vector<unsigned>>();
            Rat c = rat_from_string(term.at("coeff").get<std::string>());
            if (c != 0) f.emplace(a, c);
        }
        F.forms.push_back(std::move(f));
    }
    F.validate();
    return F;
}

std::vector<Rat> parse_poly(const std::string& text) {
    // sum of terms c z^k, c integral (or rational a/b), '^' optional
    std::vector<Rat> coeffs;
    auto bump = [&](size_t k, const Rat& c) {
        if (coeffs.size() <= k) coeffs.resize(k + 1, Rat(0));
        coeffs[k] += c;
    };
    size_t i = 0;
    const size_t n = text.size();
    auto skip_ws = [&] {
        while (i < n && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '(' || text[i] == ')')) ++i;
    };
    skip_ws();
    bool any = false;
    while (i < n) {
        skip_ws();
        if (i >= n) break;
        int sign = 1;
        while (i < n && (text[i] == '+' || text[i] == '-')) {
            if (text[i] == '-') sign = -sign;
            ++i;
            skip_ws();
        }
        if (i >= n) break;
        std::string num;
        while (i < n && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) num += text[i++];
        skip_ws();
        Rat c = num.empty() ? Rat(1) : rat_from_string(num);
        size_t k = 0;
        if (i < n && (text[i] == 'z' || text[i] == 'Z')) {
            ++i;
            k = 1;
            if (i < n && text[i] == '^') {
                ++i;
                std::string exp;
                while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) exp += text[i++];
                if (exp.empty()) throw std::invalid_argument("parse_poly: missing exponent in '" + text + "'");
                k = std::stoul(exp);
            }
        } else if (num.empty()) {
            throw std::invalid_argument("parse_poly: cannot parse '" + text + "'");
        }
        bump(k, sign * c);
        any = true;
        skip_ws();
    }
    if (!any) throw std::invalid_argument("parse_poly: empty polynomial '" + text + "'");
    return coeffs;
}

HomogeneousLift lift_from_spec(const std::string& spec) {
    auto starts_with = [&](const char* prefix) { return spec.rfind(prefix, 0) == 0; };
    if (starts_with("power:")) {
        std::string rest = spec.substr(6);
        auto comma = rest.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("power:m,d expects two integers");
        return power_map(std::stoul(rest.substr(0, comma)), std::stoul(rest.substr(comma + 1)));
    }
    if (starts_with("chebyshev:")) return chebyshev_lift(std::stoul(spec.substr(10)));
    if (starts_with("id:")) return identity_map(std::stoul(spec.substr(3)));
    if (spec == "id") return identity_map(1);
    if (starts_with("rat:")) {
        std::string rest = spec.substr(4);
        auto bar = rest.find('|');
        if (bar == std::string::npos) throw std::invalid_argument("rat:P(z)|Q(z) expects two polynomials");
        return from_univariate(parse_poly(rest.substr(0, bar)), parse_poly(rest.substr(bar + 1)));
    }
    if (starts_with("json:")) return lift_from_json(spec.substr(5));
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("morphism spec '" + spec + "' is not a builder string or readable file");
    std::stringstream ss;
    ss << in.rdbuf();
    return lift_from_json(ss.str());
}

std::string lift_to_string(const HomogeneousLift& F) {
    static const char* vars = "XYZWVUTS";
    std::ostringstream os;
    os << "(";
    for (size_t j = 0; j < F.forms.size(); ++j) {
        if (j) os << ", ";
        if (F.forms[j].empty()) {
            os << "0";
            continue;
        }
        bool first = true;
        for (const auto& [a, c] : F.forms[j]) {
            Rat v = c;
            if (!first) {
                os << (v < 0 ? " - " : " + ");
                if (v < 0) v = -v;
            } else if (v < 0) {
                os << "-";
                v = -v;
            }
            first = false;
            bool has_var = a.degree() > 0;
            if (v != 1 || !has_var) os << rat_to_string(v);
            for (size_t i = 0; i <= F.m; ++i) {
                if (!a.e[i]) continue;
                os << (F.m < 8 ? std::string(1, vars[i]) : "X" + std::to_string(i));
                if (a.e[i] > 1) os << "^" << a.e[i];
            }
        }
    }
    os << ")";
    return os.str();
}

}  // namespace hc
