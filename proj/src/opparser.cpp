#include "simplexwave/opalgebra.hpp"

#include <cctype>
#include <memory>
#include <vector>

namespace simplexwave {

namespace {

// Grammar (whitespace-insensitive):
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := [coeff] factor*            factors compose left to right
//   coeff  := integer ['/' integer]
//   factor := 'x' index ['^' int] | 'd' index ['^' int] | '[' expr ',' expr ']'
struct Parser {
    const std::string& text;
    std::size_t pos = 0;
    int max_index = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("operator parse error at position " + std::to_string(pos) + ": " + msg);
    }

    long parse_integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        return std::stol(text.substr(start, pos - start));
    }

    // AST ------------------------------------------------------------------
    struct Expr;
    struct Factor {
        enum Kind { Coord, Deriv, Bracket } kind;
        int index = 0; // 1-based variable index
        int power = 1;
        std::shared_ptr<Expr> left, right; // for Bracket
    };
    struct Term {
        Rational coeff = 1;
        std::vector<Factor> factors;
    };
    struct Expr {
        std::vector<std::pair<int, Term>> terms; // sign, term
    };

    std::shared_ptr<Expr> parse_expr() {
        auto expr = std::make_shared<Expr>();
        int sign = 1;
        if (consume('-')) sign = -1;
        else consume('+');
        expr->terms.emplace_back(sign, parse_term());
        while (!eof()) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos;
                expr->terms.emplace_back(c == '-' ? -1 : 1, parse_term());
            } else {
                break;
            }
        }
        return expr;
    }

    Term parse_term() {
        Term term;
        bool saw_anything = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            long num = parse_integer();
            long den = 1;
            if (consume('/')) den = parse_integer();
            if (den == 0) fail("zero denominator");
            term.coeff = Rational(num, den);
            term.coeff.canonicalize();
            saw_anything = true;
        }
        while (true) {
            char c = peek();
            if (c == 'x' || c == 'd') {
                ++pos;
                Factor f;
                f.kind = (c == 'x') ? Factor::Coord : Factor::Deriv;
                f.index = static_cast<int>(parse_integer());
                if (f.index < 1) fail("variable index must be >= 1");
                max_index = std::max(max_index, f.index);
                if (consume('^')) f.power = static_cast<int>(parse_integer());
                term.factors.push_back(std::move(f));
                saw_anything = true;
            } else if (c == '[') {
                ++pos;
                Factor f;
                f.kind = Factor::Bracket;
                f.left = parse_expr();
                if (!consume(',')) fail("expected ',' in commutator bracket");
                f.right = parse_expr();
                if (!consume(']')) fail("expected ']'");
                term.factors.push_back(std::move(f));
                saw_anything = true;
            } else {
                break;
            }
        }
        if (!saw_anything) fail("expected a term");
        return term;
    }

    // Build ------------------------------------------------------------------
    PolyDiffOp build(const Expr& expr, int dim) {
        PolyDiffOp out(dim);
        for (const auto& [sign, term] : expr.terms) {
            PolyDiffOp acc = PolyDiffOp::constant(dim, term.coeff * sign);
            for (const auto& f : term.factors) {
                PolyDiffOp factor_op(dim);
                switch (f.kind) {
                    case Factor::Coord:
                        factor_op = PolyDiffOp::coordinate(dim, f.index - 1, f.power);
                        break;
                    case Factor::Deriv:
                        factor_op = PolyDiffOp::derivative(dim, f.index - 1, f.power);
                        break;
                    case Factor::Bracket:
                        factor_op = commutator(build(*f.left, dim), build(*f.right, dim));
                        break;
                }
                acc = compose(acc, factor_op);
            }
            out = out + acc;
        }
        return out;
    }
};

} // namespace

PolyDiffOp parse_operator(const std::string& text, int min_dim) {
    Parser parser(text);
    if (parser.eof()) throw ParseError("empty operator expression");
    auto expr = parser.parse_expr();
    if (!parser.eof()) parser.fail("trailing input");
    const int dim = std::max(min_dim, parser.max_index);
    return parser.build(*expr, dim);
}

} // namespace simplexwave
