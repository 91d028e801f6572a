#pragma once

#include "foldlab/common.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <string>

namespace foldlab {

// Arithmetic grammar for scenario files: numbers, the variable "x",
// + - * / ^, parentheses, and the functions exp, sin, cos, ln, abs.
// expr := term (('+'|'-') term)*
// term := factor (('*'|'/') factor)*
// factor := ('-'|'+') factor | power
// power := atom ('^' factor)?
// atom := number | 'x' | ident '(' expr ')' | '(' expr ')'
class Expression {
  public:
    static Expression parse(const std::string& text) {
        Parser p{text, 0};
        Expression e;
        e.root_ = p.expr();
        p.skip_ws();
        if (p.pos != text.size())
            throw validation_error("expression: trailing input at position " + std::to_string(p.pos) +
                                   " in \"" + text + "\"");
        e.text_ = text;
        return e;
    }

    double operator()(double x) const { return root_->eval(x); }
    const std::string& text() const { return text_; }

  private:
    struct Node {
        virtual ~Node() = default;
        virtual double eval(double x) const = 0;
    };
    using NodePtr = std::shared_ptr<const Node>;

    struct Num : Node {
        double v;
        explicit Num(double v_) : v(v_) {}
        double eval(double) const override { return v; }
    };
    struct Var : Node {
        double eval(double x) const override { return x; }
    };
    struct Bin : Node {
        char op;
        NodePtr a, b;
        Bin(char o, NodePtr a_, NodePtr b_) : op(o), a(std::move(a_)), b(std::move(b_)) {}
        double eval(double x) const override {
            double u = a->eval(x), v = b->eval(x);
            switch (op) {
                case '+': return u + v;
                case '-': return u - v;
                case '*': return u * v;
                case '/': return u / v;
                default: return std::pow(u, v);
            }
        }
    };
    struct Neg : Node {
        NodePtr a;
        explicit Neg(NodePtr a_) : a(std::move(a_)) {}
        double eval(double x) const override { return -a->eval(x); }
    };
    struct Fun : Node {
        int id;  // 0 exp, 1 sin, 2 cos, 3 ln, 4 abs
        NodePtr a;
        Fun(int i, NodePtr a_) : id(i), a(std::move(a_)) {}
        double eval(double x) const override {
            double u = a->eval(x);
            switch (id) {
                case 0: return std::exp(u);
                case 1: return std::sin(u);
                case 2: return std::cos(u);
                case 3: return std::log(u);
                default: return std::abs(u);
            }
        }
    };

    struct Parser {
        const std::string& s;
        std::size_t pos;

        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip_ws();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        [[noreturn]] void fail(const std::string& what) {
            throw validation_error("expression: " + what + " at position " + std::to_string(pos) +
                                   " in \"" + s + "\"");
        }

        NodePtr expr() {
            NodePtr a = term();
            for (;;) {
                if (eat('+')) a = std::make_shared<Bin>('+', a, term());
                else if (eat('-')) a = std::make_shared<Bin>('-', a, term());
                else return a;
            }
        }
        NodePtr term() {
            NodePtr a = factor();
            for (;;) {
                if (eat('*')) a = std::make_shared<Bin>('*', a, factor());
                else if (eat('/')) a = std::make_shared<Bin>('/', a, factor());
                else return a;
            }
        }
        NodePtr factor() {
            if (eat('-')) return std::make_shared<Neg>(factor());
            if (eat('+')) return factor();
            return power();
        }
        NodePtr power() {
            NodePtr a = atom();
            if (eat('^')) return std::make_shared<Bin>('^', a, factor());
            return a;
        }
        NodePtr atom() {
            skip_ws();
            if (pos >= s.size()) fail("unexpected end of input");
            char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                double v = std::stod(s.substr(pos), &used);
                pos += used;
                return std::make_shared<Num>(v);
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t start = pos;
                while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
                std::string name = s.substr(start, pos - start);
                if (name == "x") return std::make_shared<Var>();
                if (name == "pi") return std::make_shared<Num>(M_PI);
                int id = name == "exp"   ? 0
                         : name == "sin" ? 1
                         : name == "cos" ? 2
                         : name == "ln"  ? 3
                         : name == "abs" ? 4
                                         : -1;
                if (id < 0) fail("unknown identifier \"" + name + "\"");
                if (!eat('(')) fail("expected '(' after function name");
                NodePtr a = expr();
                if (!eat(')')) fail("expected ')'");
                return std::make_shared<Fun>(id, a);
            }
            if (eat('(')) {
                NodePtr a = expr();
                if (!eat(')')) fail("expected ')'");
                return a;
            }
            fail(std::string("unexpected character '") + c + "'");
        }
    };

    NodePtr root_;
    std::string text_;
};

}  // namespace foldlab
