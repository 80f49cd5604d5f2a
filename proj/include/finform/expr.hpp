#pragma once

#include <string>
#include <vector>

#include "finform/vec.hpp"

namespace finform {

struct ExprError {
    std::size_t pos = 0;  // character offset in the source text
    std::string message;
};

struct EvalCtx {
    const Vec* x = nullptr;   // state components x0, x1, ...
    const Vec* th = nullptr;  // parameter components th0, th1, ...
    double psi = 0.0;
    double t = 0.0;
};

/// Compiled arithmetic expression over the fixed vocabulary:
/// +, -, *, /, ^, exp, sin, cos, tanh, gauss(u)=exp(-u^2), pi,
/// variables x0..x9, th0..th9, psi, t.
class Expr {
  public:
    Expr() = default;
    /// Throws ExprError on malformed input.
    static Expr parse(const std::string& text);

    double eval(const EvalCtx& ctx) const;
    bool uses(const std::string& var) const;  // "x", "th", "psi", "t"
    bool empty() const { return code_.empty(); }

  private:
    enum class Op : int {
        Const, LoadX, LoadTh, LoadPsi, LoadT,
        Add, Sub, Mul, Div, Pow, Neg,
        Exp, Sin, Cos, Tanh, Gauss,
    };
    struct Instr {
        Op op;
        int index = 0;
        double value = 0.0;
    };
    std::vector<Instr> code_;
    friend class ExprParser;
};

}  // namespace finform
