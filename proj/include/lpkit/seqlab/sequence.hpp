#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lpkit/error.hpp"
#include "lpkit/rational.hpp"
#include "lpkit/seqlab/formula.hpp"
#include "lpkit/seqlab/term_value.hpp"

namespace lpkit::seq {

enum class Generator { poly, fact_inv, power, log_shift2, harmonic_gamma, geometric, exp_sqrt, explicit_list, explicit_formula, one };

enum class Transform { hadamard, divfact, partial_sum, average, shift_zeros, convex_combo, geom_combo, pochhammer_divide };

/// A catalog generator followed by an ordered transform chain, applied left
/// to right. Immutable; the builder methods return new specs that share the
/// nested operands.
class SequenceSpec {
public:
    // Generators ------------------------------------------------------------

    /// gamma_k = c_0 + c_1 k + c_2 k^2 + ...
    static SequenceSpec poly(std::vector<BigRational> coeffs) { return make(Generator::poly, std::move(coeffs)); }
    static SequenceSpec fact_inv() { return make(Generator::fact_inv); }

    /// gamma_k = (k + a)^s. With a = 0 the k = 0 term is 0 for s > 0, 1 for
    /// s = 0, and undefined for s < 0.
    static SequenceSpec power(const BigRational& a, const BigRational& s)
    {
        if (a < 0)
            throw DomainError("power generator needs a >= 0");
        return make(Generator::power, {a, s});
    }

    static SequenceSpec log_shift2() { return make(Generator::log_shift2); }

    /// gamma_k = H_{k+2} - euler_gamma.
    static SequenceSpec harmonic_gamma() { return make(Generator::harmonic_gamma); }
    static SequenceSpec geometric(const BigRational& r) { return make(Generator::geometric, {r}); }

    static SequenceSpec exp_sqrt(int sign)
    {
        if (sign != 1 && sign != -1)
            throw DomainError("exp_sqrt sign must be +1 or -1");
        return make(Generator::exp_sqrt, {BigRational(sign)});
    }

    /// Finite sequence; terms past the end are undefined.
    static SequenceSpec explicit_list(std::vector<BigRational> terms) { return make(Generator::explicit_list, std::move(terms)); }

    static SequenceSpec explicit_formula(const std::string& text)
    {
        SequenceSpec s = make(Generator::explicit_formula);
        s.formula_ = std::make_shared<const Formula>(Formula::parse(text));
        return s;
    }

    static SequenceSpec one() { return make(Generator::one); }

    // Transforms ------------------------------------------------------------

    SequenceSpec hadamard(const SequenceSpec& other) const { return with({Transform::hadamard, 0, share(other)}); }
    SequenceSpec divfact() const { return with({Transform::divfact, 0, nullptr}); }
    SequenceSpec partial_sum() const { return with({Transform::partial_sum, 0, nullptr}); }
    SequenceSpec average() const { return with({Transform::average, 0, nullptr}); }

    SequenceSpec shift_zeros(long ell) const
    {
        if (ell < 1)
            throw DomainError("shift_zeros needs l >= 1");
        return with({Transform::shift_zeros, BigRational(ell), nullptr});
    }

    /// lambda * gamma_k + (1 - lambda) * other_k.
    SequenceSpec convex_combo(const BigRational& lambda, const SequenceSpec& other) const
    {
        check_unit(lambda);
        return with({Transform::convex_combo, lambda, share(other)});
    }

    /// gamma_k^lambda * other_k^(1 - lambda); terms must be nonnegative.
    SequenceSpec geom_combo(const BigRational& lambda, const SequenceSpec& other) const
    {
        check_unit(lambda);
        return with({Transform::geom_combo, lambda, share(other)});
    }

    /// gamma_k / (k+1)_l with the rising factorial (k+1)(k+2)...(k+l).
    SequenceSpec pochhammer_divide(long ell) const
    {
        if (ell < 0)
            throw DomainError("pochhammer_divide needs l >= 0");
        return with({Transform::pochhammer_divide, BigRational(ell), nullptr});
    }

    // Queries ----------------------------------------------------------------

    Generator generator() const { return gen_; }
    const std::vector<BigRational>& generator_args() const { return args_; }
    std::size_t transform_count() const { return chain_.size(); }

    /// True iff every term is rational by construction.
    bool is_exact() const
    {
        bool g = false;
        switch (gen_) {
        case Generator::poly:
        case Generator::fact_inv:
        case Generator::geometric:
        case Generator::explicit_list:
        case Generator::one: g = true; break;
        case Generator::power: g = is_integer(args_[1]); break;
        case Generator::explicit_formula: g = formula_->rational_preserving(); break;
        default: g = false;
        }
        if (!g)
            return false;
        for (const auto& t : chain_) {
            if (t.other && !t.other->is_exact())
                return false;
            if (t.kind == Transform::geom_combo && t.param != 0 && t.param != 1)
                return false;
        }
        return true;
    }

    /// gamma_0 .. gamma_{count-1}, each exact where possible and otherwise a
    /// ball at `bits` working precision.
    std::vector<TermValue> terms(std::size_t count, Bits bits) const
    {
        std::vector<TermValue> v;
        v.reserve(count);
        for (std::size_t k = 0; k < count; ++k)
            v.push_back(generate(k, bits));
        for (const auto& t : chain_)
            apply(t, v, bits);
        return v;
    }

    TermValue term(std::size_t k, Bits bits = 256) const { return terms(k + 1, bits)[k]; }

    /// Canonical text in the pipeline mini-language; parse(to_string()) is
    /// equivalent to *this.
    std::string to_string() const
    {
        std::string s = generator_text();
        for (const auto& t : chain_) {
            s += "|";
            s += transform_text(t);
        }
        return s;
    }

private:
    struct Step {
        Transform kind;
        BigRational param;
        std::shared_ptr<const SequenceSpec> other;
    };

    static SequenceSpec make(Generator g, std::vector<BigRational> args = {})
    {
        SequenceSpec s;
        s.gen_ = g;
        s.args_ = std::move(args);
        return s;
    }

    static std::shared_ptr<const SequenceSpec> share(const SequenceSpec& s) { return std::make_shared<const SequenceSpec>(s); }

    static void check_unit(const BigRational& lambda)
    {
        if (lambda < 0 || lambda > 1)
            throw DomainError("combination weight must lie in [0,1]");
    }

    SequenceSpec with(Step t) const
    {
        SequenceSpec s = *this;
        s.chain_.push_back(std::move(t));
        return s;
    }

    TermValue generate(std::size_t k, Bits bits) const
    {
        const BigRational kq{BigInt(k)};
        switch (gen_) {
        case Generator::poly: {
            BigRational acc = 0;
            for (std::size_t i = args_.size(); i-- > 0;)
                acc = acc * kq + args_[i];
            return TermValue::rational(acc, bits);
        }
        case Generator::fact_inv: return TermValue::rational(BigRational(1) / BigRational(lpkit::factorial(k)), bits);
        case Generator::power: {
            BigRational base = kq + args_[0];
            if (base == 0 && args_[1] < 0)
                throw DomainError("undefined term: power with a=0, s<0 at k=0");
            return pow(TermValue::rational(base, bits), args_[1]);
        }
        case Generator::log_shift2: return TermValue::real(log(HPFloat::exact(BigRational(kq + 2), bits)));
        case Generator::harmonic_gamma:
            return TermValue::real(HPFloat::exact(harmonic_number(k + 2), bits) - hp_euler(bits));
        case Generator::geometric: return TermValue::rational(lpkit::pow(args_[0], static_cast<long>(k)), bits);
        case Generator::exp_sqrt: {
            if (k == 0)
                return TermValue::rational(1, bits);
            TermValue r = sqrt(TermValue::rational(kq, bits));
            return exp(args_[0] < 0 ? -r : r);
        }
        case Generator::explicit_list:
            if (k >= args_.size())
                throw DomainError("undefined term: index " + std::to_string(k) + " past the end of an explicit list");
            return TermValue::rational(args_[k], bits);
        case Generator::explicit_formula: return formula_->evaluate(k, bits);
        case Generator::one: return TermValue::rational(1, bits);
        }
        throw DomainError("unknown generator");
    }

    static void apply(const Step& t, std::vector<TermValue>& v, Bits bits)
    {
        const std::size_t n = v.size();
        switch (t.kind) {
        case Transform::hadamard: {
            auto w = t.other->terms(n, bits);
            for (std::size_t k = 0; k < n; ++k)
                v[k] = v[k] * w[k];
            return;
        }
        case Transform::divfact:
            for (std::size_t k = 0; k < n; ++k)
                v[k] = v[k] / TermValue::rational(BigRational(lpkit::factorial(k)), bits);
            return;
        case Transform::partial_sum:
            for (std::size_t k = 1; k < n; ++k)
                v[k] = v[k - 1] + v[k];
            return;
        case Transform::average:
            for (std::size_t k = 1; k < n; ++k)
                v[k] = v[k - 1] + v[k];
            for (std::size_t k = 0; k < n; ++k)
                v[k] = v[k] / TermValue::rational(static_cast<long>(k + 1), bits);
            return;
        case Transform::shift_zeros: {
            std::size_t ell = t.param.get_num().get_ui();
            for (std::size_t k = n; k-- > 0;)
                v[k] = k >= ell ? v[k - ell] : TermValue::rational(0, bits);
            return;
        }
        case Transform::convex_combo: {
            auto w = t.other->terms(n, bits);
            TermValue lam = TermValue::rational(t.param, bits), rest = TermValue::rational(1 - t.param, bits);
            for (std::size_t k = 0; k < n; ++k)
                v[k] = lam * v[k] + rest * w[k];
            return;
        }
        case Transform::geom_combo: {
            auto w = t.other->terms(n, bits);
            for (std::size_t k = 0; k < n; ++k) {
                if (v[k].sign() < 0 || w[k].sign() < 0)
                    throw DomainError("geom_combo: negative term at index " + std::to_string(k));
                if (v[k].exact && w[k].exact && *v[k].exact == *w[k].exact)
                    continue; // a^l a^(1-l) = a
                v[k] = pow(v[k], t.param) * pow(w[k], BigRational(1 - t.param));
            }
            return;
        }
        case Transform::pochhammer_divide: {
            long ell = t.param.get_num().get_si();
            for (std::size_t k = 0; k < n; ++k) {
                BigInt rising = 1;
                for (long j = 1; j <= ell; ++j)
                    rising *= static_cast<unsigned long>(k + j);
                v[k] = v[k] / TermValue::rational(BigRational(rising), bits);
            }
            return;
        }
        }
    }

    static std::string q(const BigRational& r) { return r.get_str(); }

    std::string generator_text() const
    {
        auto list = [&] {
            std::string s;
            for (std::size_t i = 0; i < args_.size(); ++i)
                s += (i ? "," : "") + q(args_[i]);
            return s;
        };
        switch (gen_) {
        case Generator::poly: return "poly(" + list() + ")";
        case Generator::fact_inv: return "fact_inv";
        case Generator::power: return "power(a=" + q(args_[0]) + ",s=" + q(args_[1]) + ")";
        case Generator::log_shift2: return "log_shift2";
        case Generator::harmonic_gamma: return "harmonic_gamma";
        case Generator::geometric: return "geometric(" + q(args_[0]) + ")";
        case Generator::exp_sqrt: return args_[0] > 0 ? "exp_sqrt(1)" : "exp_sqrt(-1)";
        case Generator::explicit_list: return "explicit(" + list() + ")";
        case Generator::explicit_formula: return "explicit(" + formula_->text() + ")";
        case Generator::one: return "one";
        }
        return "?";
    }

    static std::string transform_text(const Step& t)
    {
        switch (t.kind) {
        case Transform::hadamard: return "hadamard(" + t.other->to_string() + ")";
        case Transform::divfact: return "divfact";
        case Transform::partial_sum: return "partial_sum";
        case Transform::average: return "average";
        case Transform::shift_zeros: return "shift_zeros(" + q(t.param) + ")";
        case Transform::convex_combo: return "convex_combo(" + q(t.param) + "," + t.other->to_string() + ")";
        case Transform::geom_combo: return "geom_combo(" + q(t.param) + "," + t.other->to_string() + ")";
        case Transform::pochhammer_divide: return "pochhammer_divide(" + q(t.param) + ")";
        }
        return "?";
    }

    Generator gen_ = Generator::one;
    std::vector<BigRational> args_;
    std::shared_ptr<const Formula> formula_;
    std::vector<Step> chain_;
};

// Mini-language -------------------------------------------------------------

namespace detail {

struct RawArg {
    std::string name; // empty for positional arguments
    std::string text;
    std::size_t offset = 0;
};

struct RawCall {
    std::string name;
    std::size_t offset = 0;
    std::vector<RawArg> args;
};

class SpecParser {
public:
    SpecParser(std::string_view s, std::size_t base) : s_(s), base_(base) {}

    SequenceSpec pipeline()
    {
        std::vector<RawCall> calls{call()};
        skip_ws();
        while (pos_ < s_.size() && s_[pos_] == '|') {
            ++pos_;
            calls.push_back(call());
            skip_ws();
        }
        if (pos_ != s_.size())
            fail("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
        SequenceSpec spec = build_generator(calls.front());
        for (std::size_t i = 1; i < calls.size(); ++i)
            spec = build_transform(spec, calls[i]);
        return spec;
    }

private:
    [[noreturn]] void fail(const std::string& msg, std::size_t at) const { throw ParseError(msg, base_ + at); }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    RawCall call()
    {
        skip_ws();
        RawCall c;
        c.offset = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (pos_ == c.offset)
            fail(pos_ < s_.size() ? "expected a generator or transform name" : "unexpected end of spec", pos_);
        c.name = std::string(s_.substr(c.offset, pos_ - c.offset));
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            ++pos_;
            c.args = arguments();
        }
        return c;
    }

    std::vector<RawArg> arguments()
    {
        std::vector<RawArg> out;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ')') {
            ++pos_;
            return out;
        }
        for (;;) {
            skip_ws();
            RawArg a;
            std::size_t start = pos_;
            int depth = 0;
            while (pos_ < s_.size()) {
                char ch = s_[pos_];
                if (ch == '(')
                    ++depth;
                else if (ch == ')') {
                    if (depth == 0)
                        break;
                    --depth;
                } else if (ch == ',' && depth == 0)
                    break;
                ++pos_;
            }
            if (pos_ >= s_.size())
                fail("expected ')'", pos_);
            std::string_view raw = s_.substr(start, pos_ - start);
            // name=value for identifiers followed by '=' at top level
            std::size_t eq = raw.find('=');
            bool named = eq != std::string_view::npos && eq > 0;
            for (std::size_t i = 0; named && i < eq; ++i)
                if (!std::isalnum(static_cast<unsigned char>(raw[i])) && raw[i] != '_' && raw[i] != ' ')
                    named = false;
            if (named) {
                a.name = trim(std::string(raw.substr(0, eq)));
                a.offset = start + eq + 1;
                a.text = std::string(raw.substr(eq + 1));
            } else {
                a.offset = start;
                a.text = std::string(raw);
            }
            while (!a.text.empty() && std::isspace(static_cast<unsigned char>(a.text.front()))) {
                a.text.erase(0, 1);
                ++a.offset;
            }
            a.text = trim(a.text);
            if (a.text.empty())
                fail("empty argument", start);
            out.push_back(std::move(a));
            if (s_[pos_] == ')') {
                ++pos_;
                return out;
            }
            ++pos_; // ','
        }
    }

    static std::string trim(std::string t)
    {
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back())))
            t.pop_back();
        std::size_t i = 0;
        while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i])))
            ++i;
        return t.substr(i);
    }

    BigRational rational(const RawArg& a) const
    {
        try {
            return parse_rational(a.text);
        } catch (const ParseError& e) {
            fail("expected a rational number, got '" + a.text + "'", a.offset + e.position());
        }
    }

    long integer(const RawArg& a) const
    {
        BigRational r = rational(a);
        if (!is_integer(r) || !mpz_fits_slong_p(r.get_num_mpz_t()))
            fail("expected an integer, got '" + a.text + "'", a.offset);
        return r.get_num().get_si();
    }

    SequenceSpec nested(const RawArg& a) const { return SpecParser(a.text, base_ + a.offset).pipeline(); }

    void arity(const RawCall& c, std::size_t lo, std::size_t hi) const
    {
        if (c.args.size() < lo || c.args.size() > hi)
            fail("wrong number of arguments to '" + c.name + "'", c.offset);
    }

    /// Looks up an argument by name, falling back to position.
    const RawArg& arg(const RawCall& c, const std::string& name, std::size_t position) const
    {
        for (const auto& a : c.args)
            if (a.name == name)
                return a;
        if (position < c.args.size() && c.args[position].name.empty())
            return c.args[position];
        fail("missing argument '" + name + "' to '" + c.name + "'", c.offset);
    }

    SequenceSpec build_generator(const RawCall& c) const
    {
        const std::string& n = c.name;
        if (n == "poly") {
            arity(c, 1, 1000);
            std::vector<BigRational> cs;
            for (const auto& a : c.args)
                cs.push_back(rational(a));
            return SequenceSpec::poly(std::move(cs));
        }
        if (n == "fact_inv" || n == "factorial_inverse") {
            arity(c, 0, 0);
            return SequenceSpec::fact_inv();
        }
        if (n == "power") {
            arity(c, 2, 2);
            BigRational a = rational(arg(c, "a", 0)), s = rational(arg(c, "s", 1));
            if (a < 0)
                fail("power needs a >= 0", arg(c, "a", 0).offset);
            return SequenceSpec::power(a, s);
        }
        if (n == "log_shift2" || n == "log2") {
            arity(c, 0, 0);
            return SequenceSpec::log_shift2();
        }
        if (n == "harmonic_gamma") {
            arity(c, 0, 0);
            return SequenceSpec::harmonic_gamma();
        }
        if (n == "geometric") {
            arity(c, 1, 1);
            return SequenceSpec::geometric(rational(arg(c, "r", 0)));
        }
        if (n == "exp_sqrt") {
            arity(c, 1, 1);
            long sgn = integer(arg(c, "sign", 0));
            if (sgn != 1 && sgn != -1)
                fail("exp_sqrt sign must be 1 or -1", c.args[0].offset);
            return SequenceSpec::exp_sqrt(static_cast<int>(sgn));
        }
        if (n == "explicit") {
            arity(c, 1, 100000);
            bool formula = false;
            if (c.args.size() == 1) {
                try {
                    parse_rational(c.args[0].text);
                } catch (const ParseError&) {
                    formula = true;
                }
            }
            if (formula) {
                try {
                    return SequenceSpec::explicit_formula(c.args[0].text);
                } catch (const ParseError& e) {
                    std::string msg = e.what();
                    fail(msg.substr(0, msg.rfind(" at position")), c.args[0].offset + e.position());
                }
            }
            std::vector<BigRational> ts;
            for (const auto& a : c.args)
                ts.push_back(rational(a));
            return SequenceSpec::explicit_list(std::move(ts));
        }
        if (n == "one") {
            arity(c, 0, 0);
            return SequenceSpec::one();
        }
        fail("unknown generator '" + n + "'", c.offset);
    }

    SequenceSpec build_transform(const SequenceSpec& s, const RawCall& c) const
    {
        const std::string& n = c.name;
        if (n == "hadamard") {
            arity(c, 1, 1);
            return s.hadamard(nested(c.args[0]));
        }
        if (n == "divfact") {
            arity(c, 0, 0);
            return s.divfact();
        }
        if (n == "partial_sum") {
            arity(c, 0, 0);
            return s.partial_sum();
        }
        if (n == "average") {
            arity(c, 0, 0);
            return s.average();
        }
        if (n == "shift_zeros") {
            arity(c, 1, 1);
            long l = integer(arg(c, "l", 0));
            if (l < 1)
                fail("shift_zeros needs l >= 1", c.args[0].offset);
            return s.shift_zeros(l);
        }
        if (n == "pochhammer_divide") {
            arity(c, 1, 1);
            long l = integer(arg(c, "l", 0));
            if (l < 0)
                fail("pochhammer_divide needs l >= 0", c.args[0].offset);
            return s.pochhammer_divide(l);
        }
        if (n == "convex_combo" || n == "geom_combo") {
            arity(c, 2, 2);
            const RawArg& la = arg(c, "lambda", 0);
            BigRational lam = rational(la);
            if (lam < 0 || lam > 1)
                fail("combination weight must lie in [0,1]", la.offset);
            SequenceSpec other = nested(arg(c, "other", 1));
            return n == "convex_combo" ? s.convex_combo(lam, other) : s.geom_combo(lam, other);
        }
        fail("unknown transform '" + n + "'", c.offset);
    }

    std::string_view s_;
    std::size_t base_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses `gen(args)|t1(args)|...`; ParseError carries the offending offset.
inline SequenceSpec parse_sequence(std::string_view text) { return detail::SpecParser(text, 0).pipeline(); }

/// gamma_k^2 >= 4 gamma_{k-1} gamma_{k+1} for 1 <= k <= up_to. Float terms
/// that leave the inequality undecided at `bits` raise Inconclusive.
inline bool is_rapidly_decreasing(const SequenceSpec& spec, std::size_t up_to, Bits bits = 256)
{
    auto t = spec.terms(up_to + 2, bits);
    for (const auto& v : t)
        if (v.sign() < 0)
            throw DomainError("rapid decrease needs nonnegative terms");
    TermValue four = TermValue::rational(4, bits);
    for (std::size_t k = 1; k <= up_to; ++k) {
        TermValue d = t[k] * t[k] - four * t[k - 1] * t[k + 1];
        if (d.exact) {
            if (*d.exact < 0)
                return false;
            continue;
        }
        int s = d.approx.certain_sign();
        if (s < 0)
            return false;
        if (s == 0)
            throw Inconclusive("rapid-decrease inequality undecided at index " + std::to_string(k));
    }
    return true;
}

} // namespace lpkit::seq
