#include "finform/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace finform {

class ExprParser {
  public:
    explicit ExprParser(const std::string& text) : s_(text) {}

    Expr run() {
        Expr e;
        skip_ws();
        if (at_end()) fail("empty expression");
        parse_expr(e);
        skip_ws();
        if (!at_end()) fail("unexpected trailing input");
        // evaluation uses a fixed 64-slot stack
        int depth = 0, maxd = 0;
        for (const Expr::Instr& in : e.code_) {
            switch (in.op) {
                case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow:
                    --depth;
                    break;
                case Op::Neg: case Op::Exp: case Op::Sin: case Op::Cos: case Op::Tanh:
                case Op::Gauss:
                    break;
                default:
                    ++depth;
            }
            maxd = std::max(maxd, depth);
        }
        if (maxd > 63) fail("expression too deeply nested");
        return e;
    }

  private:
    using Op = Expr::Op;
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ExprError{i_, msg}; }
    bool at_end() const { return i_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[i_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool consume(char c) {
        skip_ws();
        if (peek() == c) {
            ++i_;
            return true;
        }
        return false;
    }

    void parse_expr(Expr& e) {
        parse_term(e);
        while (true) {
            skip_ws();
            if (consume('+')) {
                parse_term(e);
                e.code_.push_back({Op::Add, 0, 0.0});
            } else if (consume('-')) {
                parse_term(e);
                e.code_.push_back({Op::Sub, 0, 0.0});
            } else {
                return;
            }
        }
    }

    void parse_term(Expr& e) {
        parse_factor(e);
        while (true) {
            skip_ws();
            if (consume('*')) {
                parse_factor(e);
                e.code_.push_back({Op::Mul, 0, 0.0});
            } else if (consume('/')) {
                parse_factor(e);
                e.code_.push_back({Op::Div, 0, 0.0});
            } else {
                return;
            }
        }
    }

    // '^' binds tighter than unary minus: -x^2 parses as -(x^2)
    void parse_factor(Expr& e) {
        skip_ws();
        if (consume('-')) {
            parse_factor(e);
            e.code_.push_back({Op::Neg, 0, 0.0});
            return;
        }
        if (consume('+')) {
            parse_factor(e);
            return;
        }
        parse_power(e);
    }

    void parse_power(Expr& e) {
        parse_primary(e);
        skip_ws();
        if (consume('^')) {
            parse_factor(e);  // right associative, exponent may be signed
            e.code_.push_back({Op::Pow, 0, 0.0});
        }
    }

    void parse_primary(Expr& e) {
        skip_ws();
        if (at_end()) fail("unexpected end of expression");
        const char c = peek();
        if (c == '(') {
            ++i_;
            parse_expr(e);
            if (!consume(')')) fail("missing ')'");
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(s_.c_str() + i_, &end);
            if (end == s_.c_str() + i_) fail("bad number");
            i_ = static_cast<std::size_t>(end - s_.c_str());
            e.code_.push_back({Op::Const, 0, v});
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                ++i_;
            const std::string name = s_.substr(start, i_ - start);
            if (consume('(')) {
                parse_expr(e);
                if (!consume(')')) fail("missing ')' after " + name);
                if (name == "exp") e.code_.push_back({Op::Exp, 0, 0.0});
                else if (name == "sin") e.code_.push_back({Op::Sin, 0, 0.0});
                else if (name == "cos") e.code_.push_back({Op::Cos, 0, 0.0});
                else if (name == "tanh") e.code_.push_back({Op::Tanh, 0, 0.0});
                else if (name == "gauss") e.code_.push_back({Op::Gauss, 0, 0.0});
                else {
                    i_ = start;
                    fail("unknown function '" + name + "'");
                }
                return;
            }
            if (name == "pi") {
                e.code_.push_back({Op::Const, 0, 3.14159265358979323846});
                return;
            }
            if (name == "psi") {
                e.code_.push_back({Op::LoadPsi, 0, 0.0});
                return;
            }
            if (name == "t") {
                e.code_.push_back({Op::LoadT, 0, 0.0});
                return;
            }
            if (name.size() >= 2 && name[0] == 'x' && all_digits(name, 1)) {
                e.code_.push_back({Op::LoadX, std::atoi(name.c_str() + 1), 0.0});
                return;
            }
            if (name.size() >= 3 && name.rfind("th", 0) == 0 && all_digits(name, 2)) {
                e.code_.push_back({Op::LoadTh, std::atoi(name.c_str() + 2), 0.0});
                return;
            }
            i_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    static bool all_digits(const std::string& s, std::size_t from) {
        for (std::size_t i = from; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    }
};

Expr Expr::parse(const std::string& text) { return ExprParser(text).run(); }

double Expr::eval(const EvalCtx& ctx) const {
    double stack[64];
    int sp = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::Const: stack[sp++] = in.value; break;
            case Op::LoadX: stack[sp++] = (*ctx.x)[static_cast<std::size_t>(in.index)]; break;
            case Op::LoadTh: stack[sp++] = (*ctx.th)[static_cast<std::size_t>(in.index)]; break;
            case Op::LoadPsi: stack[sp++] = ctx.psi; break;
            case Op::LoadT: stack[sp++] = ctx.t; break;
            case Op::Add: --sp; stack[sp - 1] += stack[sp]; break;
            case Op::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
            case Op::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
            case Op::Div: --sp; stack[sp - 1] /= stack[sp]; break;
            case Op::Pow: --sp; stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]); break;
            case Op::Neg: stack[sp - 1] = -stack[sp - 1]; break;
            case Op::Exp: stack[sp - 1] = std::exp(stack[sp - 1]); break;
            case Op::Sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
            case Op::Cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
            case Op::Tanh: stack[sp - 1] = std::tanh(stack[sp - 1]); break;
            case Op::Gauss: stack[sp - 1] = std::exp(-stack[sp - 1] * stack[sp - 1]); break;
        }
    }
    return sp > 0 ? stack[0] : 0.0;
}

bool Expr::uses(const std::string& var) const {
    for (const Instr& in : code_) {
        if (var == "x" && in.op == Op::LoadX) return true;
        if (var == "th" && in.op == Op::LoadTh) return true;
        if (var == "psi" && in.op == Op::LoadPsi) return true;
        if (var == "t" && in.op == Op::LoadT) return true;
    }
    return false;
}

}  // namespace finform
