#pragma once

#include <regex>
#include <string>

#include "lpkit/cli/report.hpp"
#include "lpkit/seqlab/sequence.hpp"

namespace lpkit::cli {

using report::json;

/// Exit-code contract shared by the tool and the corpus runner.
enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_domain = 3, exit_internal = 4 };

/// Raised for malformed command arguments (exit 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& need(const json& args, const char* key)
{
    if (!args.contains(key) || args[key].is_null())
        throw UsageError(std::string("missing argument --") + key);
    return args[key];
}

inline std::string get_string(const json& args, const char* key) { return need(args, key).get<std::string>(); }

inline std::string get_string(const json& args, const char* key, const std::string& fallback)
{
    return args.contains(key) && !args[key].is_null() ? args[key].get<std::string>() : fallback;
}

inline long get_long(const json& args, const char* key) { return need(args, key).get<long>(); }

inline long get_long(const json& args, const char* key, long fallback)
{
    return args.contains(key) && !args[key].is_null() ? args[key].get<long>() : fallback;
}

inline double get_double(const json& args, const char* key, double fallback)
{
    return args.contains(key) && !args[key].is_null() ? args[key].get<double>() : fallback;
}

inline bool get_bool(const json& args, const char* key) { return args.contains(key) && args[key].is_boolean() && args[key].get<bool>(); }

inline BigRational get_rational(const json& args, const char* key)
{
    const json& v = need(args, key);
    if (v.is_number_integer())
        return BigRational(v.get<long>());
    try {
        return parse_rational(v.get<std::string>());
    } catch (const std::exception& e) {
        throw UsageError(std::string("--") + key + ": " + e.what());
    }
}

inline BigRational get_rational(const json& args, const char* key, const BigRational& fallback)
{
    return args.contains(key) && !args[key].is_null() ? get_rational(args, key) : fallback;
}

inline Bits precision(const json& args) { return static_cast<Bits>(get_long(args, "precision", 256)); }

} // namespace detail

/// exp_r(R) | sq_fact | even_fact | one | poly_times_exp(c0,c1,...[;r]).
inline families::LPFunction parse_lp_function(const std::string& text)
{
    using families::LPFunction;
    static const std::regex call(R"(^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, call))
        throw UsageError("cannot parse LP function '" + text + "'");
    const std::string name = m[1], body = m[2];
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == sep) {
                out.push_back(cur);
                cur.clear();
            } else if (c != ' ') {
                cur += c;
            }
        }
        if (!cur.empty())
            out.push_back(cur);
        return out;
    };
    if (name == "sq_fact")
        return LPFunction::sq_fact();
    if (name == "even_fact")
        return LPFunction::even_fact();
    if (name == "one")
        return LPFunction::one();
    if (name == "exp_r")
        return LPFunction::exp_r(parse_rational(body));
    if (name == "poly_times_exp") {
        auto parts = split(body, ';');
        if (parts.empty() || parts.size() > 2)
            throw UsageError("poly_times_exp needs coefficients and an optional ;rate");
        std::vector<BigRational> c;
        for (const auto& x : split(parts[0], ','))
            c.push_back(parse_rational(x));
        return LPFunction::poly_times_exp(QPoly(std::move(c)), parts.size() == 2 ? parse_rational(parts[1]) : BigRational(0));
    }
    throw UsageError("unknown LP function '" + name + "'");
}

inline json cmd_ms_test(const json& args)
{
    auto spec = seq::parse_sequence(detail::get_string(args, "seq"));
    jensen::MsTestOptions opt;
    opt.precision = detail::precision(args);
    opt.exhaustive = detail::get_bool(args, "exhaustive");
    opt.threads = static_cast<unsigned>(detail::get_long(args, "threads", 0));
    const long n = detail::get_long(args, "max_degree");
    if (n < 0)
        throw UsageError("--max-degree must be >= 0");
    return report::ms_report(jensen::ms_test(spec, static_cast<int>(n), opt), detail::get_bool(args, "coefficients"));
}

inline json cmd_jensen(const json& args)
{
    auto spec = seq::parse_sequence(detail::get_string(args, "seq"));
    jensen::MsTestOptions opt;
    opt.precision = detail::precision(args);
    const long n = detail::get_long(args, "degree");
    if (n < 0)
        throw UsageError("--degree must be >= 0");
    auto rep = jensen::classify_degree(spec, static_cast<int>(n), opt);
    json j = report::jensen_report(rep, true);
    j["spec"] = spec.to_string();
    if (const long count = detail::get_long(args, "terms", 0); count > 0) {
        json t = json::array();
        for (const auto& v : spec.terms(static_cast<std::size_t>(count), opt.precision))
            t.push_back(report::term(v));
        j["terms"] = t;
    }
    if (rep.domain == CoefficientDomain::exact_rational && !rep.identically_zero) {
        std::vector<BigRational> c;
        for (const auto& t : rep.coefficients)
            c.push_back(*t.exact);
        QPoly p(std::move(c));
        json iv = json::array();
        for (const auto& i : roots::real_roots_isolate(p))
            iv.push_back(report::interval(i));
        j["real_root_intervals"] = iv;
    }
    return j;
}

namespace detail {

inline json with_reference(json j, const HPFloat& value, const HPFloat& reference)
{
    j["reference"] = report::ball(reference);
    j["abs_diff"] = abs(value.value - reference.value).to_string(6);
    return j;
}

} // namespace detail

/// --fn besselB|hardyE|Ip|phi|phi_prime|gamma|digamma|F|cosh_sqrt with
/// --method series|integral where both exist.
inline json cmd_eval(const json& args)
{
    const Bits bits = detail::precision(args);
    const std::string fn = detail::get_string(args, "fn");
    const std::string method = detail::get_string(args, "method", "series");
    const double tol = detail::get_double(args, "tol", 1e-12);
    if (method != "series" && method != "integral")
        throw UsageError("--method must be series or integral");
    quad::QuadOptions qo;
    qo.bits = bits;
    json out{{"fn", fn}, {"method", method}};
    auto integral_only_for = [&](const char* what) {
        if (method == "integral")
            throw DomainError(std::string("no integral representation for ") + what);
    };

    if (fn == "hardyE") {
        integral_only_for("hardyE");
        const BigRational s = detail::get_rational(args, "s"), a = detail::get_rational(args, "a", 0);
        out["s"] = report::rational(s);
        out["a"] = report::rational(a);
        if (detail::get_bool(args, "zero_scan")) {
            std::optional<specfun::ZeroWindow> window;
            if (args.contains("window_lo") || args.contains("window_hi")) {
                auto dw = specfun::default_zero_window(s, a);
                window = specfun::ZeroWindow{detail::get_rational(args, "window_lo", dw.lo), detail::get_rational(args, "window_hi", dw.hi)};
            }
            const BigRational step = detail::get_rational(args, "step", make_rational(1, 4));
            out["zero_scan"] = report::zero_scan(specfun::real_zero_scan(s, a, window, step, bits));
            return out;
        }
        const BigRational x = detail::get_rational(args, "x");
        out["x"] = report::rational(x);
        out["series"] = report::series(specfun::hardy_E(s, a, HPFloat::exact(x, bits)));
        return out;
    }
    if (fn == "Ip") {
        integral_only_for("Ip");
        const BigRational p = detail::get_rational(args, "p"), x = detail::get_rational(args, "x");
        out["p"] = report::rational(p);
        out["x"] = report::rational(x);
        const HPFloat hp = HPFloat::exact(p, bits), hx = HPFloat::exact(x, bits);
        auto s = specfun::bessel_I_series(hp, hx);
        out["series"] = report::series(s);
        if (x >= 0)
            out = detail::with_reference(out, s.value, specfun::bessel_I_via_0F1(hp, hx));
        return out;
    }
    if (fn == "gamma" || fn == "digamma") {
        integral_only_for(fn.c_str());
        const BigRational x = detail::get_rational(args, "x");
        out["x"] = report::rational(x);
        out["value"] = report::ball(fn == "gamma" ? specfun::gamma(x, bits) : specfun::digamma(x, bits));
        return out;
    }
    if (fn == "F") {
        integral_only_for("F");
        const BigRational x = detail::get_rational(args, "x");
        auto r = specfun::f_closed_forms(HPFloat::exact(x, bits), tol);
        out["x"] = report::rational(x);
        out["series"] = report::ball(r.series);
        out["closed_forms"] = json{
            {"two_plus_x_I0_sqrt_x", {{"value", report::ball(r.two_plus_x_I0_sqrt)}, {"matches", r.matches_I0_sqrt}}},
            {"two_plus_x_I0_two_sqrt_x", {{"value", report::ball(r.two_plus_x_I0_two_sqrt)}, {"matches", r.matches_I0_two_sqrt}}},
            {"hyp0F1_1", {{"value", report::ball(r.hyp0F1_1)}, {"matches", r.matches_hyp0F1}}},
            {"two_plus_x_hyp0F1_1", {{"value", report::ball(r.two_plus_x_hyp0F1_1)}, {"matches", r.matches_two_plus_x_hyp0F1}}}};
        return out;
    }
    if (fn == "cosh_sqrt") {
        integral_only_for("cosh_sqrt");
        const BigRational x = detail::get_rational(args, "x");
        const long n = detail::get_long(args, "n_factors", 10000);
        const HPFloat hx = HPFloat::exact(x, bits);
        auto s = specfun::cosh_sqrt_series(hx);
        auto p = specfun::cosh_sqrt_product(hx, n);
        out["x"] = report::rational(x);
        out["series"] = report::series(s);
        out["product"] = json{{"value", report::ball(p.value)}, {"factors", p.factors}, {"remainder_estimate", p.remainder_estimate}};
        out["abs_diff"] = abs(s.value.value - p.value.value).to_string(6);
        return out;
    }

    const BigRational x = detail::get_rational(args, "x");
    out["x"] = report::rational(x);
    const HPFloat hx = HPFloat::exact(x, bits);
    const Real rx(x, bits);
    if (fn == "besselB") {
        const BigRational s = detail::get_rational(args, "s");
        out["s"] = report::rational(s);
        auto ser = specfun::bessel_B_series(s, hx);
        if (method == "series") {
            out["series"] = report::series(ser);
            return out;
        }
        if (s != make_rational(1, 2))
            throw DomainError("integral representation of B(s, x) is implemented for s = 1/2 only");
        const std::string form = detail::get_string(args, "form", "u");
        if (form != "u" && form != "v")
            throw UsageError("--form must be u or v");
        auto q = form == "u" ? quad::bessel_sqrt_integral_u(rx, tol, qo) : quad::bessel_sqrt_integral_v(rx, tol, qo);
        out["form"] = form;
        out["integral"] = report::quad(q);
        return detail::with_reference(out, q.value, ser.value);
    }
    if (fn == "phi" || fn == "phi_prime") {
        if (x < 0)
            throw DomainError("phi needs x >= 0");
        // phi = B(1/2, x); phi' = B(3/2, x) / x with phi'(0) = 1
        HPFloat ser = fn == "phi" ? specfun::bessel_B(make_rational(1, 2), hx)
            : x == 0              ? HPFloat::exact(1, bits)
                                  : specfun::bessel_B(make_rational(3, 2), hx) / hx;
        if (method == "series") {
            out["series"] = report::ball(ser);
            return out;
        }
        auto q = fn == "phi" ? quad::phi_I1_integral(rx, tol, qo) : quad::phi_prime_I0_integral(rx, tol, qo);
        out["integral"] = report::quad(q);
        return detail::with_reference(out, q.value, ser);
    }
    throw UsageError("unknown --fn '" + fn + "'");
}

/// --integral bessel_u|bessel_v|nsg|phi|phi_prime|lagarias|cauchy_saalschutz.
inline json cmd_quad(const json& args)
{
    const Bits bits = detail::precision(args);
    const std::string which = detail::get_string(args, "integral");
    const double tol = detail::get_double(args, "tol", 1e-12);
    quad::QuadOptions qo;
    qo.bits = bits;
    qo.max_level = static_cast<int>(detail::get_long(args, "max_level", qo.max_level));
    json out{{"integral", which}, {"tol", tol}};
    if (which == "bessel_u" || which == "bessel_v" || which == "phi" || which == "phi_prime") {
        const BigRational x = detail::get_rational(args, "x");
        out["x"] = report::rational(x);
        const Real rx(x, bits);
        const HPFloat hx = HPFloat::exact(x, bits);
        quad::QuadResult q;
        HPFloat ref(bits);
        if (which == "bessel_u")
            q = quad::bessel_sqrt_integral_u(rx, tol, qo);
        else if (which == "bessel_v")
            q = quad::bessel_sqrt_integral_v(rx, tol, qo);
        else if (which == "phi")
            q = quad::phi_I1_integral(rx, tol, qo);
        else
            q = quad::phi_prime_I0_integral(rx, tol, qo);
        if (which == "phi_prime")
            ref = x == 0 ? HPFloat::exact(1, bits) : specfun::bessel_B(make_rational(3, 2), hx) / hx;
        else
            ref = specfun::bessel_B_series(make_rational(1, 2), hx, 80).value;
        out["result"] = report::quad(q);
        return detail::with_reference(out, q.value, ref);
    }
    if (which == "nsg") {
        const long n = detail::get_long(args, "n");
        const BigRational s = detail::get_rational(args, "s", make_rational(1, 2));
        auto q = quad::identity_check_nsg(n, s, tol, qo);
        // -n^s Gamma(-s)
        HPFloat ref = -(pow(HPFloat::exact(n, bits), s) * specfun::gamma(-s, bits));
        out["n"] = n;
        out["s"] = report::rational(s);
        out["result"] = report::quad(q);
        return detail::with_reference(out, q.value, ref);
    }
    if (which == "lagarias") {
        const long k = detail::get_long(args, "k");
        auto q = quad::lagarias_check(k, tol, bits);
        out["k"] = k;
        out["result"] = report::quad(q);
        return detail::with_reference(out, q.value, quad::lagarias_target(k, bits));
    }
    if (which == "cauchy_saalschutz") {
        const BigRational s = detail::get_rational(args, "s");
        auto q = quad::cauchy_saalschutz_gamma(s, tol, qo);
        out["s"] = report::rational(s);
        out["result"] = report::quad(q);
        return detail::with_reference(out, q.value, specfun::gamma(-s, bits));
    }
    throw UsageError("unknown --integral '" + which + "'");
}

/// --op b|c|ck-represent|reversal|via-jensen|closed-form over k = 0..k_max.
inline json cmd_families(const json& args)
{
    using namespace families;
    const std::string op = detail::get_string(args, "op");
    const long k_max = detail::get_long(args, "k_max", 10);
    if (k_max < 0)
        throw UsageError("--k-max must be >= 0");
    json out{{"op", op}};
    if (op == "ck-represent") {
        auto spec = seq::parse_sequence(detail::get_string(args, "seq"));
        auto rep = ck_represent(spec, detail::get_long(args, "verify_through", 25));
        out["seq"] = spec.to_string();
        out["witness"] = report::ck_witness(rep.witness);
        if (rep.witness.phi.kind() == LPFunction::Kind::poly_times_exp)
            out["phi_polynomial"] = report::poly(rep.witness.phi.polynomial());
        out["alternative"] = rep.alternative ? report::ck_witness(*rep.alternative) : json(nullptr);
        out["verified_through"] = rep.verified_through;
        return out;
    }
    const LPFunction phi = parse_lp_function(detail::get_string(args, "phi", "sq_fact"));
    out["phi"] = report::lp_function(phi);
    const BigRational t = detail::get_rational(args, "t");
    out["t"] = report::rational(t);
    json values = json::array();
    if (op == "b") {
        for (long k = 0; k <= k_max; ++k)
            values.push_back(report::rational(b_family_exact(phi, t, k)));
        out["values"] = values;
        out["polynomial_in_t"] = report::poly(b_family_poly(phi, k_max));
        return out;
    }
    if (op == "reversal" || op == "via-jensen") {
        bool all = true;
        for (long k = 0; k <= k_max; ++k) {
            bool ok = op == "reversal" ? bk_reversal_check(phi, k, t) : *bk_via_jensen(phi, k, t).exact == b_family_exact(phi, t, k);
            all = all && ok;
            values.push_back(ok);
        }
        out["per_k"] = values;
        out["all_pass"] = all;
        return out;
    }
    const LPFunction Phi = parse_lp_function(detail::get_string(args, "Phi", phi.to_string()));
    const BigRational s = detail::get_rational(args, "s");
    out["Phi"] = report::lp_function(Phi);
    out["s"] = report::rational(s);
    if (op == "c") {
        for (long k = 0; k <= k_max; ++k)
            values.push_back(report::rational(c_family_exact(phi, Phi, t, s, k)));
        out["values"] = values;
        if (detail::get_bool(args, "ms_test")) {
            auto rep = jensen::ms_test(c_family_sequence(phi, Phi, t, s, k_max + 1), static_cast<int>(k_max));
            out["ms_test"] = report::ms_report(rep);
        }
        return out;
    }
    if (op == "closed-form") {
        json rows = json::array();
        bool all = true;
        for (long k = 0; k <= k_max; ++k) {
            BigRational c = c_family_exact(phi, Phi, t, s, k);
            json row{{"k", k}, {"c_family", report::rational(c)}};
            bool ok;
            if (phi.kind() == LPFunction::Kind::sq_fact && Phi.kind() == LPFunction::Kind::sq_fact) {
                BigRational l = equal_pair_laguerre(t, s, k);
                row["closed_form"] = report::rational(l);
                ok = l == c;
            } else if (phi.kind() == LPFunction::Kind::even_fact && Phi.kind() == LPFunction::Kind::even_fact) {
                HPFloat h = equal_pair_hyp1F1(t, s, k, detail::precision(args));
                row["closed_form"] = report::ball(h);
                ok = abs(h.value - Real(c, h.precision_bits())).to_double() <= detail::get_double(args, "tol", 1e-20);
            } else if (phi.kind() == LPFunction::Kind::exp_r && Phi.kind() == LPFunction::Kind::exp_r && phi.rate() == Phi.rate()) {
                BigRational e = equal_pair_exp(phi.rate(), t, s, k);
                row["closed_form"] = report::rational(e);
                ok = e == c;
            } else {
                BigRational g = c_family_jensen_form(phi, t, s, k);
                row["closed_form"] = report::rational(g);
                ok = Phi.to_string() == phi.to_string() && g == c;
            }
            row["match"] = ok;
            all = all && ok;
            rows.push_back(row);
        }
        out["rows"] = rows;
        out["all_match"] = all;
        return out;
    }
    throw UsageError("unknown --op '" + op + "'");
}

/// Toeplitz minors for --alpha a0,a1,... or --seq SPEC (alpha_k = gamma_k/k!
/// unless --no-factorial), or the printed matrix with --problem40.
inline json cmd_totpos(const json& args)
{
    const long max_order = detail::get_long(args, "max_order", 4);
    const auto budget = static_cast<unsigned long long>(detail::get_long(args, "budget", static_cast<long>(tp::default_minor_budget)));
    json out;
    if (detail::get_bool(args, "problem40")) {
        auto a = tp::printed_minor_matrix();
        json m = json::array();
        for (const auto& row : a) {
            json r = json::array();
            for (const auto& x : row)
                r.push_back(report::rational(x));
            m.push_back(r);
        }
        out["matrix"] = m;
        out["rows"] = {1, 2, 3, 4};
        out["cols"] = {0, 1, 2, 3};
        out["determinant"] = report::rational(tp::determinant(a));
        return out;
    }
    if (args.contains("alpha")) {
        std::vector<BigRational> alpha;
        for (const auto& x : args["alpha"])
            alpha.push_back(x.is_number_integer() ? BigRational(x.get<long>()) : parse_rational(x.get<std::string>()));
        out["alpha"] = json::array();
        for (const auto& a : alpha)
            out["alpha"].push_back(report::rational(a));
        out["minors"] = report::minors(tp::minors_nonneg(tp::ToeplitzWindow::exact(alpha), static_cast<int>(max_order), budget));
        return out;
    }
    auto spec = seq::parse_sequence(detail::get_string(args, "seq"));
    jensen::MsTestOptions opt;
    opt.precision = detail::precision(args);
    const long n = detail::get_long(args, "N", 8);
    if (n < 1)
        throw UsageError("--N must be >= 1");
    auto ev = tp::tp_evidence(spec, static_cast<std::size_t>(n), static_cast<int>(max_order), static_cast<int>(detail::get_long(args, "ms_degree", 10)),
        !detail::get_bool(args, "no_factorial"), opt, budget);
    out["seq"] = ev.spec;
    out["divided_by_factorial"] = ev.divided_by_factorial;
    out["minors"] = report::minors(ev.minors);
    out["ms_test"] = json{{"first_failure", ev.ms.first_failure ? json(*ev.ms.first_failure) : json(nullptr)},
        {"max_degree", ev.ms.max_degree}, {"uncertified_degrees", ev.ms.uncertified_degrees()}};
    out["noteworthy"] = ev.noteworthy;
    out["note"] = ev.note;
    return out;
}

struct CommandOutcome {
    int exit_code = exit_ok;
    json document;
};

/// Runs a command by name, mapping failures onto the exit-code contract.
inline CommandOutcome run_command(const std::string& name, const json& args)
{
    const Bits bits = detail::precision(args);
    try {
        json result;
        if (name == "ms-test")
            result = cmd_ms_test(args);
        else if (name == "jensen")
            result = cmd_jensen(args);
        else if (name == "eval")
            result = cmd_eval(args);
        else if (name == "quad")
            result = cmd_quad(args);
        else if (name == "families")
            result = cmd_families(args);
        else if (name == "totpos")
            result = cmd_totpos(args);
        else
            throw UsageError("unknown command '" + name + "'");
        return {exit_ok, report::envelope(name, bits, std::move(result))};
    } catch (const ParseError& e) {
        return {exit_usage, report::error_envelope(name, "parse", e.what(), e.position())};
    } catch (const UsageError& e) {
        return {exit_usage, report::error_envelope(name, "usage", e.what())};
    } catch (const json::exception& e) {
        return {exit_usage, report::error_envelope(name, "usage", e.what())};
    } catch (const DomainError& e) {
        return {exit_domain, report::error_envelope(name, "domain", e.what())};
    } catch (const BudgetExceeded& e) {
        return {exit_domain, report::error_envelope(name, "budget", e.what())};
    } catch (const Inconclusive& e) {
        return {exit_domain, report::error_envelope(name, "inconclusive", e.what())};
    } catch (const Uncertifiable& e) {
        return {exit_domain, report::error_envelope(name, "uncertifiable", e.what())};
    } catch (const std::exception& e) {
        return {exit_internal, report::error_envelope(name, "internal", e.what())};
    }
}

} // namespace lpkit::cli
