#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include "lpkit/cli/commands.hpp"

namespace lpkit::cli::corpus {

enum class Status { pass, fail, documented, error };

inline const char* to_string(Status s)
{
    switch (s) {
    case Status::pass:
        return "pass";
    case Status::fail:
        return "fail";
    case Status::documented:
        return "documented";
    case Status::error:
        return "error";
    }
    return "error";
}

struct Verdict {
    Status status = Status::fail;
    std::string detail;
};

/// Inspects the exit code and JSON document of one invocation.
using Check = std::function<Verdict(int exit_code, const json& doc)>;

struct CorpusCase {
    std::string id;
    std::string paper_anchor; // "sectionN: quoted text"
    std::vector<std::string> tags;
    std::string command;
    json args;
    json expected;
    Check check;
};

struct CaseResult {
    std::string id;
    std::string paper_anchor;
    Status status = Status::error;
    std::string detail;
    int exit_code = 0;
    double runtime_ms = 0;
    json output;
};

namespace detail {

inline Verdict pass(std::string d = {}) { return {Status::pass, std::move(d)}; }
inline Verdict fail(std::string d) { return {Status::fail, std::move(d)}; }
inline Verdict documented(std::string d) { return {Status::documented, std::move(d)}; }

inline Verdict expect(bool ok, const std::string& what) { return ok ? pass(what) : fail("expected " + what); }

/// Numeric value of a rational string, decimal string, ball or exact term.
inline double num(const json& j)
{
    if (j.is_object()) {
        if (j.contains("exact"))
            return num(j["exact"]);
        return num(j.at("value"));
    }
    if (j.is_number())
        return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s.find('/') != std::string::npos)
        return parse_rational(s).get_d();
    return std::stod(s);
}

inline BigRational exact(const json& j) { return parse_rational(j.is_object() ? j.at("exact").get<std::string>() : j.get<std::string>()); }

inline const json& result(const json& doc) { return doc.at("result"); }

inline Check ok_and(std::function<Verdict(const json&)> f)
{
    return [f = std::move(f)](int code, const json& doc) {
        if (code != exit_ok)
            return fail("exit code " + std::to_string(code) + ": " + doc.dump());
        return f(result(doc));
    };
}

inline Check first_failure(std::optional<int> want)
{
    return ok_and([want](const json& r) {
        const json& f = r.at("first_failure");
        if (!r.at("uncertified_degrees").empty())
            return fail("uncertified degrees " + r["uncertified_degrees"].dump());
        if (!want)
            return expect(f.is_null(), "no failure through degree " + std::to_string(r["max_degree"].get<int>()));
        return expect(!f.is_null() && f.get<int>() == *want, "first failure at degree " + std::to_string(*want));
    });
}

inline Check abs_diff_below(double tol)
{
    return ok_and([tol](const json& r) {
        const double d = num(r.at("abs_diff"));
        char buf[96];
        std::snprintf(buf, sizeof buf, "|difference| = %.3g, tolerance %.3g", d, tol);
        return d <= tol ? pass(buf) : fail(buf);
    });
}

inline Check root_split(unsigned real, unsigned pairs)
{
    return ok_and([real, pairs](const json& r) {
        const json& c = r.at("root_count");
        return expect(c.at("certified").get<bool>() && c.at("real_count").get<unsigned>() == real &&
                c.at("nonreal_pairs").get<unsigned>() == pairs,
            std::to_string(real) + " real roots and " + std::to_string(pairs) + " non-real pairs");
    });
}

inline bool same_rationals(const json& got, const std::vector<BigRational>& want)
{
    if (got.size() != want.size())
        return false;
    for (std::size_t i = 0; i < want.size(); ++i)
        if (exact(got[i]) != want[i])
            return false;
    return true;
}

inline Check coefficients_and_split(std::vector<BigRational> c, unsigned real, unsigned pairs)
{
    auto split = root_split(real, pairs);
    return [c = std::move(c), split](int code, const json& doc) {
        Verdict v = split(code, doc);
        if (v.status != Status::pass)
            return v;
        return expect(same_rationals(result(doc).at("coefficients"), c), "exact coefficients and " + v.detail);
    };
}

inline Check zero_count(int want)
{
    return ok_and([want](const json& r) {
        return expect(r.at("zero_scan").at("count").get<int>() == want, std::to_string(want) + " real zeros");
    });
}

inline BigRational Q(long n, long d = 1) { return make_rational(n, d); }

} // namespace detail

/// The example corpus. Ids are unique and sort in section order.
inline std::vector<CorpusCase> all_cases()
{
    using namespace detail;
    std::vector<CorpusCase> c;
    auto add = [&](std::string id, int section, std::string quote, std::string command, json args, json expected, Check check,
                   std::vector<std::string> extra_tags = {}) {
        std::string tag = "section" + std::to_string(section);
        std::vector<std::string> tags{tag};
        tags.insert(tags.end(), extra_tags.begin(), extra_tags.end());
        c.push_back({std::move(id), tag + ": \"" + quote + "\"", std::move(tags), std::move(command), std::move(args),
            std::move(expected), std::move(check)});
    };

    add("s1-01-k2plus2-generating-polynomial", 1, "e^x(2+x+x^2) \\notin \\mathscr{L}-\\mathscr{P}", "families",
        {{"op", "ck-represent"}, {"seq", "poly(2,0,1)"}}, {{"phi_polynomial", {"2/1", "1/1", "1/1"}}}, ok_and([](const json& r) {
            return expect(same_rationals(r.at("phi_polynomial"), {Q(2), Q(1), Q(1)}), "p~ = 2 + x + x^2");
        }));
    add("s1-02-k2plus2-not-ms", 1, "e^x(2+x+x^2) \\notin \\mathscr{L}-\\mathscr{P}", "ms-test", {{"seq", "poly(2,0,1)"}, {"max_degree", 6}},
        {{"first_failure", 2}}, first_failure(2));
    add("s1-03-k2plus2-over-factorial-ms30", 1, "whence $\\seq{\\frac{k^2+2}{k!}}$ is a multiplier sequence", "ms-test",
        {{"seq", "poly(2,0,1)|divfact"}, {"max_degree", 30}}, {{"first_failure", nullptr}}, first_failure(std::nullopt));
    add("s1-04-F-closed-forms", 1, "F(x)=\\sum_{k=0}^{\\infty}\\frac{k^2+2}{k!k!}x^k", "eval", {{"fn", "F"}, {"x", "1"}},
        {{"documented", "only (2+x) I_0(2 sqrt x) = (2+x) 0F1(-;1;x) matches the series"}}, ok_and([](const json& r) {
            const json& f = r.at("closed_forms");
            const bool series_positive = num(r.at("series")) > 0;
            const bool two_sqrt = f["two_plus_x_I0_two_sqrt_x"]["matches"].get<bool>() && f["two_plus_x_hyp0F1_1"]["matches"].get<bool>();
            const bool printed = f["two_plus_x_I0_sqrt_x"]["matches"].get<bool>() || f["hyp0F1_1"]["matches"].get<bool>();
            if (!series_positive || !two_sqrt)
                return fail("series or (2+x) I_0(2 sqrt x) mismatch");
            if (printed)
                return fail("a printed closed form unexpectedly matches");
            return documented("printed chain is not literal: (2+x) I_0(sqrt x) and 0F1(-;1;x) differ from the series; "
                              "(2+x) I_0(2 sqrt x) = (2+x) 0F1(-;1;x) matches");
        }));
    add("s1-05-Ip-vs-0F1", 1, "{}_0F_1\\left(-;1+p;\\frac{x^2}{4}\\right)", "eval", {{"fn", "Ip"}, {"p", "1/2"}, {"x", "2"}},
        {{"abs_diff_max", 1e-30}}, abs_diff_below(1e-30));
    add("s1-06-I0-at-zero", 1, "I_p(x)", "eval", {{"fn", "Ip"}, {"p", "0"}, {"x", "0"}}, {{"value", "1"}}, ok_and([](const json& r) {
        return expect(num(r.at("series").at("value")) == 1.0, "I_0(0) = 1");
    }));
    add("s1-07-hardyE-half-zero", 1, "has only $k+1$ real zeros", "eval",
        {{"fn", "hardyE"}, {"s", "1/2"}, {"a", "0"}, {"zero_scan", true}}, {{"zero_count", 1}}, zero_count(1));
    add("s1-08-hardyE-three-halves-zero", 1, "has only $k+1$ real zeros", "eval",
        {{"fn", "hardyE"}, {"s", "3/2"}, {"a", "0"}, {"zero_scan", true}}, {{"zero_count", 2}}, zero_count(2));
    add("s1-09-hardyE-minus-one-one", 1, "does not have any real zeros", "eval",
        {{"fn", "hardyE"}, {"s", "-1"}, {"a", "1"}, {"zero_scan", true}}, {{"zero_count", 0}}, zero_count(0));

    add("s2-01-log2-ms-test", 2, "x_3= - 0.330544", "ms-test", {{"seq", "log2"}, {"max_degree", 5}}, {{"first_failure", 3}}, first_failure(3));
    add("s2-02-log2-g3-roots", 2, "x_3= - 0.330544", "jensen", {{"seq", "log2"}, {"degree", 3}},
        {{"real_root", -0.330544}, {"pair", {-1.1267576, 0.182619129}}, {"tol", 1e-5}}, ok_and([](const json& r) {
            double real = NAN, re = NAN, im = NAN;
            for (const auto& d : r.at("root_disks")) {
                if (d.at("real").get<bool>())
                    real = num(d["re"]);
                else if (num(d["im"]) > 0) {
                    re = num(d["re"]);
                    im = num(d["im"]);
                }
            }
            return expect(std::abs(real + 0.330544) < 1e-5 && std::abs(re + 1.1267576) < 1e-5 && std::abs(im - 0.182619129) < 1e-5,
                "roots -0.330544 and -1.1267576 +- 0.182619129i within 1e-5");
        }));
    add("s2-03-log2-over-factorial-first-term", 2, "T:=\\{\\ln\\, (k+2)/k!\\}", "jensen", {{"seq", "log2|divfact"}, {"degree", 0}, {"terms", 1}},
        {{"gamma_0", "ln 2"}}, ok_and([](const json& r) {
            return expect(std::abs(num(r.at("terms").at(0)) - std::log(2.0)) < 1e-15, "gamma_0 = ln 2");
        }));
    add("s2-04-harmonic-gamma-ms20", 2, "is a multiplier sequence", "ms-test", {{"seq", "harmonic_gamma|divfact"}, {"max_degree", 20}},
        {{"first_failure", nullptr}}, first_failure(std::nullopt));
    add("s2-05-lagarias-k1", 2, "J.~Lagarias states that for all $k \\geq 1$", "quad", {{"integral", "lagarias"}, {"k", 1}, {"tol", 1e-12}},
        {{"abs_diff_max", 1e-10}}, abs_diff_below(1e-10));
    add("s2-06-lagarias-k5", 2, "J.~Lagarias states that for all $k \\geq 1$", "quad", {{"integral", "lagarias"}, {"k", 5}, {"tol", 1e-12}},
        {{"abs_diff_max", 1e-10}}, abs_diff_below(1e-10));
    add("s2-07-lagarias-k100", 2, "J.~Lagarias states that for all $k \\geq 1$", "quad", {{"integral", "lagarias"}, {"k", 100}, {"tol", 1e-12}},
        {{"abs_diff_max", 1e-10}}, abs_diff_below(1e-10));
    add("s2-08-digamma-four", 2, "simple inductive argument establishes", "eval", {{"fn", "digamma"}, {"x", "4"}},
        {{"value", "11/6 - euler_gamma"}}, ok_and([](const json& r) {
            return expect(std::abs(num(r.at("value")) - (11.0 / 6.0 - 0.57721566490153286061)) < 1e-15, "psi(4) = 11/6 - gamma");
        }));
    add("s2-09-T1-quartic", 2, "T_1[(1+x)^4]", "jensen", {{"seq", "fact_inv|partial_sum"}, {"degree", 4}},
        {{"coefficient_4", "65/24"}, {"printed", "64/24"}}, ok_and([](const json& r) {
            const BigRational c4 = exact(r.at("coefficients").at(4));
            if (c4 != Q(65, 24))
                return fail("x^4 coefficient " + to_fraction_string(c4));
            return documented("x^4 coefficient is S(4) = 65/24, printed as 64/24");
        }));
    add("s2-10-T2-cubic", 2, "T_2[(1+x)^3]", "jensen", {{"seq", "fact_inv|average"}, {"degree", 3}},
        {{"coefficients", {"1/1", "3/1", "5/2", "2/3"}}, {"real_roots", 1}, {"nonreal_pairs", 1}}, ok_and([](const json& r) {
            return expect(same_rationals(r.at("coefficients"), {Q(1), Q(3), Q(5, 2), Q(2, 3)}) && r.at("real_root_intervals").size() == 1 &&
                    r.at("root_count").at("nonreal_pairs").get<int>() == 1,
                "1 + 3x + 5/2 x^2 + 2/3 x^3 with one isolating interval and one non-real pair");
        }));
    add("s2-11-partial-sums-m2", 2, "We proceed by double induction", "jensen", {{"seq", "poly(2,3,1)|partial_sum"}, {"degree", 0}, {"terms", 10}},
        {{"S(n)", "(n+1)(n+2)(n+3)/3"}}, ok_and([](const json& r) {
            std::vector<BigRational> want;
            for (long n = 0; n < 10; ++n)
                want.push_back(Q((n + 1) * (n + 2) * (n + 3), 3));
            return expect(same_rationals(r.at("terms"), want), "S(n) = (n+1)(n+2)(n+3)/3");
        }));
    add("s2-12-partial-sums-k-plus-4-squared", 2, "Setting $p(x)=(x+4)^2$", "jensen",
        {{"seq", "poly(16,8,1)|partial_sum"}, {"degree", 0}, {"terms", 12}}, {{"S(k)", "(1+k)(96+25k+2k^2)/6"}}, ok_and([](const json& r) {
            std::vector<BigRational> want;
            for (long k = 0; k < 12; ++k)
                want.push_back(Q((1 + k) * (96 + 25 * k + 2 * k * k), 6));
            return expect(same_rationals(r.at("terms"), want), "S(k) = (1+k)(96+25k+2k^2)/6");
        }));
    add("s2-13-partial-sums-generating-polynomial", 2, "Setting $p(x)=(x+4)^2$", "families",
        {{"op", "ck-represent"}, {"seq", "poly(16,121/6,9/2,1/3)"}}, {{"phi_polynomial", "(96+150x+33x^2+2x^3)/6"}}, ok_and([](const json& r) {
            return expect(same_rationals(r.at("phi_polynomial"), {Q(16), Q(25), Q(11, 2), Q(1, 3)}), "p~ = (96+150x+33x^2+2x^3)/6");
        }));
    add("s2-14-shifted-pochhammer", 2, "if $m=4$ and $\\ell=2$", "jensen",
        {{"seq", "poly(24,50,35,10,1)|shift_zeros(2)"}, {"degree", 0}, {"terms", 8}}, {{"terms", "0, 0, 4!, 5!, 6!/2!, 7!/3!, ..."}},
        ok_and([](const json& r) {
            std::vector<BigRational> want{Q(0), Q(0)};
            for (long k = 2; k < 8; ++k)
                want.push_back(BigRational(factorial(k + 2)) / BigRational(factorial(k - 2)));
            return expect(same_rationals(r.at("terms"), want), "{0, 0, 4!, 5!, 6!/2!, ...}");
        }));
    add("s2-15-shifted-pochhammer-generating-polynomial", 2, "if $m=4$ and $\\ell=2$", "families",
        {{"op", "ck-represent"}, {"seq", "poly(0,-2,-1,2,1)"}}, {{"phi_polynomial", "x^2 (x+2)(x+6)"}}, ok_and([](const json& r) {
            return expect(same_rationals(r.at("phi_polynomial"), {Q(0), Q(0), Q(12), Q(8), Q(1)}), "p~ = x^2 (x+2)(x+6)");
        }));
    add("s2-16-average-fails", 2, "is not a multiplier sequence, because", "ms-test", {{"seq", "poly(1,1,1)|average"}, {"max_degree", 5}},
        {{"first_failure", "<= 5"}}, ok_and([](const json& r) {
            const json& f = r.at("first_failure");
            return expect(!f.is_null() && f.get<int>() <= 5, "first failure at degree <= 5");
        }));
    add("s2-17-quadratic-ms30", 2, "e^x(1+x)^2", "ms-test", {{"seq", "poly(1,1,1)"}, {"max_degree", 30}}, {{"first_failure", nullptr}},
        first_failure(std::nullopt));

    add("s3-01-shifted-reciprocal-g4", 3, "has two non-real zeros", "jensen", {{"seq", "explicit(1/((k+1/2)k!))"}, {"degree", 4}},
        {{"coefficients", {"2", "8/3", "6/5", "4/21", "1/108"}}, {"real", 2}, {"pairs", 1}},
        coefficients_and_split({Q(2), Q(8, 3), Q(6, 5), Q(4, 21), Q(1, 108)}, 2, 1));
    for (const char* x : {"1/2", "1", "2", "5"}) {
        std::string tail = std::string(x) == "1/2" ? "half" : x;
        add("s3-02-bessel-u-" + tail, 3, "f(x,t):=\\sum_{n=0}^{\\infty} \\frac{x^n (e^{-t})^n}{n!n!}", "quad",
            {{"integral", "bessel_u"}, {"x", x}, {"tol", 1e-12}}, {{"abs_diff_max", 1e-8}}, abs_diff_below(1e-8));
        add("s3-03-bessel-v-" + tail, 3, "f(x,t):=\\sum_{n=0}^{\\infty} \\frac{x^n (e^{-t})^n}{n!n!}", "quad",
            {{"integral", "bessel_v"}, {"x", x}, {"tol", 1e-12}}, {{"abs_diff_max", 1e-8}}, abs_diff_below(1e-8));
    }
    for (long n : {1L, 4L, 9L})
        add("s3-04-nsg-n" + std::to_string(n), 3, "\\Gamma(-s)", "quad", {{"integral", "nsg"}, {"n", n}, {"s", "1/2"}, {"tol", 1e-13}},
            {{"abs_diff_max", 1e-10}}, abs_diff_below(1e-10));
    add("s3-05-phi-integral", 3, "is Hurwitz stable", "quad", {{"integral", "phi"}, {"x", "1"}, {"tol", 1e-12}}, {{"abs_diff_max", 1e-8}},
        abs_diff_below(1e-8));
    add("s3-06-phi-prime-integral", 3, "is Hurwitz stable", "quad", {{"integral", "phi_prime"}, {"x", "1"}, {"tol", 1e-12}},
        {{"abs_diff_max", 1e-8}}, abs_diff_below(1e-8));
    add("s3-07-cauchy-saalschutz-half", 3, "\\Gamma(-s)", "quad", {{"integral", "cauchy_saalschutz"}, {"s", "1/2"}, {"tol", 1e-12}},
        {{"abs_diff_max", 1e-8}}, abs_diff_below(1e-8));
    add("s3-08-cauchy-saalschutz-three-halves", 3, "\\Gamma(-s)", "quad", {{"integral", "cauchy_saalschutz"}, {"s", "3/2"}, {"tol", 1e-12}},
        {{"abs_diff_max", 1e-8}}, abs_diff_below(1e-8));
    add("s3-09-sqrt-k-over-factorial-ms30", 3, "We conjecture that the function", "ms-test",
        {{"seq", "power(a=0,s=1/2)|divfact"}, {"max_degree", 30}}, {{"first_failure", nullptr}}, first_failure(std::nullopt));
    add("s3-10-k-twentieth-over-factorial", 3, "has has only four real zeros", "ms-test",
        {{"seq", "power(a=0,s=1/20)|divfact"}, {"max_degree", 6}}, {{"first_failure", 6}, {"nonreal_pairs", 1}}, ok_and([](const json& r) {
            const json& f = r.at("first_failure");
            const json& g6 = r.at("per_degree").back().at("root_count");
            return expect(!f.is_null() && f.get<int>() == 6 && g6.at("nonreal_pairs").get<int>() == 1 && g6.at("real_count").get<int>() == 4,
                "first failure at 6 with four real zeros and one non-real pair");
        }));
    add("s3-11-k-twentieth-g6-coefficient", 3, "has has only four real zeros", "jensen",
        {{"seq", "power(a=0,s=1/20)|divfact"}, {"degree", 6}}, {{"coefficient_4", "5/(4 2^(9/10))"}, {"printed", "5/(40 2^(9/10))"}},
        ok_and([](const json& r) {
            const double c4 = num(r.at("coefficients").at(4));
            const double direct = 15.0 * std::pow(4.0, 0.05) / 24.0;
            if (std::abs(c4 - direct) > 1e-14 || std::abs(c4 - 5.0 / (4.0 * std::pow(2.0, 0.9))) > 1e-14)
                return fail("x^4 coefficient " + std::to_string(c4));
            return documented("x^4 coefficient is C(6,4) 4^(1/20)/4! = 5/(4 2^(9/10)), printed as 5/(40 2^(9/10))");
        }));
    add("s3-12-k-twentieth-undivided", 3, "This phenomenon persists for small $s$", "ms-test",
        {{"seq", "power(a=0,s=1/20)"}, {"max_degree", 6}}, {{"first_failure", 3}}, first_failure(3));
    add("s3-13-cosh-product", 3, "\\prod_{k=0}^{\\infty} \\left(1+\\frac{x}{\\left(\\pi k+\\frac{\\pi}{2} \\right)^2} \\right)", "eval",
        {{"fn", "cosh_sqrt"}, {"x", "1"}, {"n_factors", 10000}, {"precision", 128}}, {{"abs_diff_max", 1e-3}}, abs_diff_below(1e-3));
    add("s3-14-besselB-methods-agree", 3, "f(x,t):=\\sum_{n=0}^{\\infty} \\frac{x^n (e^{-t})^n}{n!n!}", "eval",
        {{"fn", "besselB"}, {"s", "1/2"}, {"x", "1"}, {"method", "integral"}}, {{"abs_diff_max", 1e-8}}, abs_diff_below(1e-8));

    add("s4-01-convex-combination", 4, "which, when applied to", "jensen", {{"seq", "poly(1,1,1)|convex_combo(1/10,fact_inv)"}, {"degree", 4}},
        {{"coefficients", {"1", "24/5", "69/10", "29/5", "171/80"}}, {"real", 2}, {"pairs", 1}},
        coefficients_and_split({Q(1), Q(24, 5), Q(69, 10), Q(29, 5), Q(171, 80)}, 2, 1));
    add("s4-02-geometric-combination", 4, "which has two non-real zeros", "jensen", {{"seq", "poly(1,1,1)|geom_combo(1/2,one)"}, {"degree", 4}},
        {{"x_coefficient", "4 sqrt 3"}, {"nonreal_pairs", 1}}, ok_and([](const json& r) {
            const json& c = r.at("root_count");
            return expect(c.at("certified").get<bool>() && c.at("nonreal_pairs").get<int>() == 1 &&
                    std::abs(num(r.at("coefficients").at(1)) - 4 * std::sqrt(3.0)) < 1e-14,
                "x coefficient 4 sqrt 3 and one non-real pair");
        }));
    add("s4-03-ck-represent-quadratic", 4, "The selection $t=1,s=0$", "families", {{"op", "ck-represent"}, {"seq", "poly(1,1,1)"}},
        {{"phi_polynomial", {"1", "2", "1"}}, {"Phi", "one"}, {"t", "1"}, {"s", "0"}}, ok_and([](const json& r) {
            const json& w = r.at("witness");
            return expect(same_rationals(r.at("phi_polynomial"), {Q(1), Q(2), Q(1)}) && w.at("Phi") == "one" && exact(w.at("t")) == 1 &&
                    exact(w.at("s")) == 0 && r.at("verified_through").get<long>() >= 25,
                "witness ((1+x)^2, one, 1, 0) verified through k = 25");
        }));
    add("s4-04-ck-represent-geometric", 4, "The selection $t=1,s=0$", "families", {{"op", "ck-represent"}, {"seq", "geometric(3/2)"}},
        {{"verified_through", 25}}, ok_and([](const json& r) {
            return expect(r.at("verified_through").get<long>() >= 25, "a verified witness for (3/2)^k");
        }));
    add("s4-05-closed-form-exp", 4, "(2+(s+t)(r-1))^k", "families",
        {{"op", "closed-form"}, {"phi", "exp_r(1/3)"}, {"Phi", "exp_r(1/3)"}, {"t", "1/4"}, {"s", "2/5"}, {"k_max", 20}}, {{"all_match", true}},
        ok_and([](const json& r) { return expect(r.at("all_match").get<bool>(), "(2+(s+t)(r-1))^k for k <= 20"); }));
    add("s4-06-closed-form-laguerre", 4, "L_j(x)$ denotes the $j$th Laguerre polynomial", "families",
        {{"op", "closed-form"}, {"phi", "sq_fact"}, {"Phi", "sq_fact"}, {"t", "1/2"}, {"s", "1/3"}, {"k_max", 10}}, {{"all_match", true}},
        ok_and([](const json& r) { return expect(r.at("all_match").get<bool>(), "Laguerre closed form for k <= 10"); }));
    add("s4-07-closed-form-hypergeometric", 4, "Suppose that $\\varphi(x)=\\Phi(x)$", "families",
        {{"op", "closed-form"}, {"phi", "even_fact"}, {"Phi", "even_fact"}, {"t", "1/2"}, {"s", "1/3"}, {"k_max", 10}}, {{"all_match", true}},
        ok_and([](const json& r) { return expect(r.at("all_match").get<bool>(), "1F1 closed form within 1e-20 for k <= 10"); }));
    add("s4-08-b-family-reversal", 4, "Suppose that $\\varphi(x)=\\Phi(x)$", "families",
        {{"op", "reversal"}, {"phi", "sq_fact"}, {"t", "1/3"}, {"k_max", 12}}, {{"all_pass", true}},
        ok_and([](const json& r) { return expect(r.at("all_pass").get<bool>(), "reversal identity for k <= 12"); }));
    add("s4-09-b-family-via-jensen", 4, "Suppose that $\\varphi(x)=\\Phi(x)$", "families",
        {{"op", "via-jensen"}, {"phi", "even_fact"}, {"t", "2/5"}, {"k_max", 12}}, {{"all_pass", true}},
        ok_and([](const json& r) { return expect(r.at("all_pass").get<bool>(), "Jensen form for k <= 12"); }));
    add("s4-10-c-family-ms-evidence", 4, "Suppose that $\\varphi(x)=\\Phi(x)$", "families",
        {{"op", "c"}, {"phi", "sq_fact"}, {"Phi", "exp_r(1)"}, {"t", "1/2"}, {"s", "1/3"}, {"k_max", 12}, {"ms_test", true}},
        {{"first_failure", nullptr}}, ok_and([](const json& r) {
            return expect(r.at("ms_test").at("first_failure").is_null(), "no ms_test failure through degree 12");
        }));

    add("s5-01-quadratic-over-factorial-ms30", 5, "e^x(1+x)(1+cx)", "ms-test", {{"seq", "poly(1,1,1)|divfact"}, {"max_degree", 30}}, {{"first_failure", nullptr}},
        first_failure(std::nullopt));
    add("s5-02-exp-minus-sqrt-g3", 5, "is not a multiplier sequence since the Jensen polynomial", "jensen",
        {{"seq", "exp_sqrt(-1)|divfact"}, {"degree", 3}}, {{"real", 1}, {"pairs", 1}}, root_split(1, 1));
    add("s5-03-exp-sqrt-ms30", 5, "have only real zeros", "ms-test", {{"seq", "exp_sqrt(1)|divfact"}, {"max_degree", 30}},
        {{"first_failure", nullptr}}, first_failure(std::nullopt));
    add("s5-04-problem40-determinant", 5, "det(A)=-(38873/1166400000)", "totpos", {{"problem40", true}}, {{"determinant", "-38873/1166400000"}},
        ok_and([](const json& r) { return expect(exact(r.at("determinant")) == Q(-38873, 1166400000), "det = -38873/1166400000"); }),
        {"problem40"});
    add("s5-05-problem40-search", 5, "is \\underbar{not} a totally positive sequence", "totpos",
        {{"alpha", {"1", "1/4", "1/27", "1/256", "1/3125", "1/46656", "1/823543", "1/16777216"}}, {"max_order", 4}},
        {{"witness", {{"rows", {1, 2, 3, 4}}, {"cols", {0, 1, 2, 3}}}}}, ok_and([](const json& r) {
            const json& m = r.at("minors");
            const json& w = m.at("witness");
            return expect(!m.at("ok").get<bool>() && w.at("rows") == json({1, 2, 3, 4}) && w.at("cols") == json({0, 1, 2, 3}) &&
                    exact(w.at("determinant")) == Q(-38873, 1166400000),
                "first negative minor is the printed 4x4 block");
        }),
        {"problem40"});
    add("s5-06-problem40-divided", 5, "Determine whether the sequence", "totpos",
        {{"seq", "explicit(1/(k+1)^(k+1))"}, {"N", 8}, {"max_order", 4}, {"ms_degree", 10}}, {{"minors_ok", true}, {"first_failure", nullptr}},
        ok_and([](const json& r) {
            return expect(r.at("minors").at("ok").get<bool>() && r.at("ms_test").at("first_failure").is_null(),
                "no negative minor for gamma_k/k! in the window and no ms_test failure through 10");
        }),
        {"problem40"});
    add("s5-07-exponential-totally-positive", 5, "Let $\\varphi(x)$ be the", "totpos", {{"seq", "one"}, {"N", 8}, {"max_order", 4}, {"ms_degree", 8}},
        {{"minors_ok", true}}, ok_and([](const json& r) { return expect(r.at("minors").at("ok").get<bool>(), "1/k! window is totally positive"); }));
    return c;
}

/// A filter matches a tag exactly or an id prefix; empty matches everything.
inline bool matches(const CorpusCase& c, const std::string& filter)
{
    if (filter.empty())
        return true;
    return std::find(c.tags.begin(), c.tags.end(), filter) != c.tags.end() || c.id.rfind(filter, 0) == 0;
}

inline CaseResult run_case(const CorpusCase& c)
{
    CaseResult r;
    r.id = c.id;
    r.paper_anchor = c.paper_anchor;
    const auto start = std::chrono::steady_clock::now();
    try {
        auto out = run_command(c.command, c.args);
        r.exit_code = out.exit_code;
        r.output = std::move(out.document);
        Verdict v = c.check(r.exit_code, r.output);
        r.status = v.status;
        r.detail = v.detail;
    } catch (const std::exception& e) {
        r.status = Status::error;
        r.detail = std::string("check raised: ") + e.what();
    } catch (...) {
        r.status = Status::error;
        r.detail = "check raised a non-standard exception";
    }
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Runs the selected cases on a worker pool; results are sorted by id.
inline std::vector<CaseResult> run(const std::vector<CorpusCase>& cases, unsigned threads = 0)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<CaseResult> out(cases.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, cases.size()); ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < cases.size(); i = next++)
                out[i] = run_case(cases[i]);
        });
    for (auto& t : pool)
        t.join();
    std::sort(out.begin(), out.end(), [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
    return out;
}

inline bool all_ok(const std::vector<CaseResult>& results)
{
    return std::all_of(results.begin(), results.end(),
        [](const CaseResult& r) { return r.status == Status::pass || r.status == Status::documented; });
}

inline json case_document(const CorpusCase& c, const CaseResult& r)
{
    return json{{"schema_version", report::schema_version}, {"id", c.id}, {"paper_anchor", c.paper_anchor}, {"tags", c.tags},
        {"invocation", {{"command", c.command}, {"args", c.args}}}, {"expected", c.expected}, {"status", to_string(r.status)},
        {"detail", r.detail}, {"exit_code", r.exit_code}, {"output", r.output}};
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"')
            q += '"';
        q += ch;
    }
    return q + "\"";
}

/// DIR/cases/<id>.json for each case and DIR/summary.csv.
inline void write(const std::filesystem::path& dir, const std::vector<CorpusCase>& cases, const std::vector<CaseResult>& results)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir / "cases");
    std::ofstream csv(dir / "summary.csv");
    csv << "case_id,anchor,status,runtime_ms\n";
    for (const auto& r : results) {
        auto it = std::find_if(cases.begin(), cases.end(), [&](const CorpusCase& c) { return c.id == r.id; });
        std::ofstream f(dir / "cases" / (r.id + ".json"));
        f << case_document(*it, r).dump(2) << '\n';
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.1f", r.runtime_ms);
        csv << csv_field(r.id) << ',' << csv_field(r.paper_anchor) << ',' << to_string(r.status) << ',' << ms << '\n';
    }
}

} // namespace lpkit::cli::corpus
