#pragma once

#include "simplexwave/errors.hpp"

#include <Eigen/Dense>

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace simplexwave {

using Rational = mpq_class;

/// Exponent vector, one entry per variable.
using MultiIndex = std::vector<int>;

int total_degree(const MultiIndex& m);

/// Exact-rational polynomial in n variables, stored as monomial -> coefficient
/// with no zero coefficients.
class Polynomial {
public:
    explicit Polynomial(int dim) : dim_(dim) {}
    static Polynomial monomial(int dim, const MultiIndex& alpha, const Rational& c = 1);

    int dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<MultiIndex, Rational>& terms() const { return terms_; }

    void add_term(const MultiIndex& alpha, const Rational& c);

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(const Rational& c) const;
    bool operator==(const Polynomial& o) const = default;

    Polynomial derivative(int var) const;
    int degree() const;
    double eval(const Eigen::VectorXd& x) const;

private:
    int dim_;
    std::map<MultiIndex, Rational> terms_;
};

/// A polynomial-coefficient differential operator sum c * x^alpha * d^beta in
/// canonical (normal-ordered) form: multiplications on the left, derivatives
/// on the right, term map ordered lexicographically on (alpha, beta), no zero
/// coefficients. Total degree |alpha| + |beta| of every stored term is capped.
class PolyDiffOp {
public:
    static constexpr int kMaxTotalDegree = 16;

    struct TermKey {
        MultiIndex mono;
        MultiIndex deriv;
        auto operator<=>(const TermKey&) const = default;
    };

    explicit PolyDiffOp(int dim) : dim_(dim) {}

    static PolyDiffOp zero(int dim) { return PolyDiffOp(dim); }
    static PolyDiffOp constant(int dim, const Rational& c);
    static PolyDiffOp coordinate(int dim, int var, int power = 1);
    static PolyDiffOp derivative(int dim, int var, int order = 1);
    /// The radial (scaling) field X = sum_i x_i d_i.
    static PolyDiffOp radial_field(int dim);

    int dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    int term_count() const { return static_cast<int>(terms_.size()); }
    const std::map<TermKey, Rational>& terms() const { return terms_; }

    void add_term(const MultiIndex& mono, const MultiIndex& deriv, const Rational& c);

    PolyDiffOp operator+(const PolyDiffOp& o) const;
    PolyDiffOp operator-(const PolyDiffOp& o) const;
    PolyDiffOp operator-() const;
    PolyDiffOp scaled(const Rational& c) const;
    bool operator==(const PolyDiffOp& o) const = default;

    /// Applies the operator to a polynomial.
    Polynomial apply(const Polynomial& p) const;

    /// Canonical text form, e.g. "-2 x1^2 d1 d2^2 + 1/3 d3".
    std::string to_string() const;

private:
    int dim_;
    std::map<TermKey, Rational> terms_;
};

/// Operator composition (a then applied after b: (a b)(f) = a(b(f))) via the
/// generalized Leibniz rule, exact in rational arithmetic.
PolyDiffOp compose(const PolyDiffOp& a, const PolyDiffOp& b);

/// [a, b] = a b - b a.
PolyDiffOp commutator(const PolyDiffOp& a, const PolyDiffOp& b);

/// Parses the operator grammar: terms like "-2 x1^2 d1 d2^2" joined by +/-,
/// whitespace-insensitive, rational coefficients ("3/4"), and commutator
/// brackets "[expr, expr]" as factors. Factors of a term compose left to
/// right as operators. min_dim pads the variable count.
PolyDiffOp parse_operator(const std::string& text, int min_dim = 1);

/// Constant-coefficient elliptic operator P = -sum K_ij d_i d_j with exact
/// rational symmetric positive definite K.
class EllipticOperator {
public:
    using Matrix = std::vector<std::vector<Rational>>;

    /// Throws NotSymmetric / NotPositiveDefinite (exact LDL^T pivot test).
    EllipticOperator(int dim, Matrix K);

    int dim() const { return dim_; }
    const Matrix& coefficients() const { return K_; }
    const Rational& coeff(int i, int j) const { return K_[i][j]; }

    /// Smallest eigenvalue of K in double precision.
    double lambda_min() const { return lambda_min_; }
    /// The ellipticity constant C = 1/lambda_min of the discrete quadratic
    /// form bound ||grad u||^2 <= C <Pu, u>.
    double ellipticity_constant() const { return 1.0 / lambda_min_; }

private:
    int dim_;
    Matrix K_;
    double lambda_min_ = 0.0;
};

/// P = -sum_ij K_ij d_i d_j as a PolyDiffOp (off-diagonal pairs merge).
PolyDiffOp elliptic_to_diffop(const EllipticOperator& e);

struct CommutatorCheck {
    bool holds = false;     // exact zero test
    PolyDiffOp residual;    // [P, X] - 2P
};

/// Machine-checks the lemma [P, X] = 2P in exact rational arithmetic.
CommutatorCheck verify_commutator_lemma(const EllipticOperator& e);

/// Exact inverse of a square rational matrix (Gauss-Jordan). Throws Error on
/// singular input.
EllipticOperator::Matrix rational_inverse(const EllipticOperator::Matrix& m);

/// Exact product helpers for building K = B B^T style matrices.
EllipticOperator::Matrix rational_matmul(const EllipticOperator::Matrix& a,
                                         const EllipticOperator::Matrix& b);
EllipticOperator::Matrix rational_transpose(const EllipticOperator::Matrix& m);

} // namespace simplexwave
