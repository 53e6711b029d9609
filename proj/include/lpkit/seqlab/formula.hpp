#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lpkit/error.hpp"
#include "lpkit/seqlab/term_value.hpp"

namespace lpkit::seq {

/// Expression tree for closed-form terms in the index k, e.g.
/// "1/((k+1/2)k!)", "k^(1/20)/k!", "exp(-sqrt(k))", "H(k+2) - euler_gamma".
class Formula {
public:
    enum class Op { number, index, constant, neg, add, sub, mul, div, pow, fact, call };

    struct Node {
        Op op;
        BigRational number;
        std::string name;
        std::vector<std::shared_ptr<const Node>> kids;
    };

    static Formula parse(std::string_view text, std::size_t base_offset = 0)
    {
        Parser p{text, 0, base_offset};
        auto root = p.expression();
        p.skip_ws();
        if (p.pos != text.size())
            p.fail("unexpected character '" + std::string(1, text[p.pos]) + "'");
        Formula f;
        f.root_ = std::move(root);
        f.text_ = std::string(text);
        return f;
    }

    const std::string& text() const { return text_; }

    TermValue evaluate(unsigned long k, Bits bits) const { return eval(*root_, k, bits); }

    /// True when every operation keeps rational inputs rational.
    bool rational_preserving() const { return rational(*root_); }

private:
    using NodePtr = std::shared_ptr<const Node>;

    struct Parser {
        std::string_view s;
        std::size_t pos;
        std::size_t base;

        [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, base + pos); }

        void skip_ws()
        {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
                ++pos;
        }

        bool eat(char c)
        {
            skip_ws();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        static NodePtr make(Op op, std::vector<NodePtr> kids = {}, std::string name = {}, BigRational num = 0)
        {
            return std::make_shared<Node>(Node{op, std::move(num), std::move(name), std::move(kids)});
        }

        NodePtr expression()
        {
            NodePtr lhs = term();
            for (;;) {
                if (eat('+'))
                    lhs = make(Op::add, {lhs, term()});
                else if (eat('-'))
                    lhs = make(Op::sub, {lhs, term()});
                else
                    return lhs;
            }
        }

        bool starts_primary()
        {
            skip_ws();
            if (pos >= s.size())
                return false;
            char c = s[pos];
            return c == '(' || std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
        }

        NodePtr term()
        {
            NodePtr lhs = unary();
            for (;;) {
                if (eat('*'))
                    lhs = make(Op::mul, {lhs, unary()});
                else if (eat('/'))
                    lhs = make(Op::div, {lhs, unary()});
                else if (starts_primary())
                    lhs = make(Op::mul, {lhs, power()}); // implicit product, e.g. (k+1)k!
                else
                    return lhs;
            }
        }

        NodePtr unary()
        {
            if (eat('-'))
                return make(Op::neg, {unary()});
            if (eat('+'))
                return unary();
            return power();
        }

        NodePtr power()
        {
            NodePtr base = postfix();
            if (eat('^'))
                return make(Op::pow, {base, unary()});
            return base;
        }

        NodePtr postfix()
        {
            NodePtr p = primary();
            while (eat('!'))
                p = make(Op::fact, {p});
            return p;
        }

        NodePtr primary()
        {
            skip_ws();
            if (pos >= s.size())
                fail("unexpected end of formula");
            char c = s[pos];
            if (c == '(') {
                ++pos;
                NodePtr e = expression();
                if (!eat(')'))
                    fail("expected ')'");
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t start = pos;
                while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
                    ++pos;
                try {
                    return make(Op::number, {}, {}, parse_rational(s.substr(start, pos - start)));
                } catch (const ParseError&) {
                    pos = start;
                    fail("malformed number");
                }
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos;
                while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                    ++pos;
                std::string id(s.substr(start, pos - start));
                if (id == "k")
                    return make(Op::index);
                if (id == "pi" || id == "e" || id == "euler_gamma")
                    return make(Op::constant, {}, id);
                static const char* fns[] = {"sqrt", "ln", "log", "exp", "cosh", "H"};
                for (const char* f : fns) {
                    if (id == f) {
                        if (!eat('('))
                            fail("expected '(' after " + id);
                        NodePtr arg = expression();
                        if (!eat(')'))
                            fail("expected ')'");
                        return make(Op::call, {arg}, id == "log" ? "ln" : id);
                    }
                }
                pos = start;
                fail("unknown identifier '" + id + "'");
            }
            fail("unexpected character '" + std::string(1, c) + "'");
        }
    };

    static TermValue eval(const Node& n, unsigned long k, Bits bits)
    {
        switch (n.op) {
        case Op::number: return TermValue::rational(n.number, bits);
        case Op::index: return TermValue::rational(BigRational(BigInt(k)), bits);
        case Op::constant:
            if (n.name == "pi")
                return TermValue::real(hp_pi(bits));
            if (n.name == "euler_gamma")
                return TermValue::real(hp_euler(bits));
            return TermValue::real(exp(HPFloat::exact(1, bits)));
        case Op::neg: return -eval(*n.kids[0], k, bits);
        case Op::add: return eval(*n.kids[0], k, bits) + eval(*n.kids[1], k, bits);
        case Op::sub: return eval(*n.kids[0], k, bits) - eval(*n.kids[1], k, bits);
        case Op::mul: return eval(*n.kids[0], k, bits) * eval(*n.kids[1], k, bits);
        case Op::div: return eval(*n.kids[0], k, bits) / eval(*n.kids[1], k, bits);
        case Op::pow: return pow(eval(*n.kids[0], k, bits), eval(*n.kids[1], k, bits));
        case Op::fact: return factorial(eval(*n.kids[0], k, bits));
        case Op::call: {
            TermValue a = eval(*n.kids[0], k, bits);
            if (n.name == "sqrt")
                return sqrt(a);
            if (n.name == "ln")
                return log(a);
            if (n.name == "exp")
                return exp(a);
            if (n.name == "cosh")
                return cosh(a);
            return harmonic(a);
        }
        }
        throw DomainError("corrupt formula node");
    }

    static bool rational(const Node& n)
    {
        switch (n.op) {
        case Op::constant: return false;
        case Op::call: return n.name == "H" && rational(*n.kids[0]);
        case Op::pow: return rational(*n.kids[0]) && integral(*n.kids[1]);
        default:
            for (const auto& c : n.kids)
                if (!rational(*c))
                    return false;
            return true;
        }
    }

    /// True when the subtree takes integer values at every integer k.
    static bool integral(const Node& n)
    {
        switch (n.op) {
        case Op::number: return is_integer(n.number);
        case Op::index: return true;
        case Op::neg:
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::fact:
            for (const auto& c : n.kids)
                if (!integral(*c))
                    return false;
            return true;
        case Op::pow: return integral(*n.kids[0]) && n.kids[1]->op == Op::number && is_integer(n.kids[1]->number) && n.kids[1]->number >= 0;
        default: return false;
        }
    }

    NodePtr root_;
    std::string text_;
};

} // namespace lpkit::seq
