#include "simplexwave/opalgebra.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace simplexwave {

int total_degree(const MultiIndex& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

namespace {

MultiIndex add_indices(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

MultiIndex sub_indices(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

mpz_class binomial(int n, int k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// n (n-1) ... (n-k+1)
mpz_class falling_factorial(int n, int k) {
    mpz_class r = 1;
    for (int i = 0; i < k; ++i) r *= n - i;
    return r;
}

void check_multiindex(const MultiIndex& m, int dim, const char* what) {
    if (static_cast<int>(m.size()) != dim) throw DimMismatch(std::string(what) + ": index size != dim");
    for (int e : m)
        if (e < 0) throw Error(std::string(what) + ": negative exponent");
}

} // namespace

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::monomial(int dim, const MultiIndex& alpha, const Rational& c) {
    Polynomial p(dim);
    p.add_term(alpha, c);
    return p;
}

void Polynomial::add_term(const MultiIndex& alpha, const Rational& c) {
    check_multiindex(alpha, dim_, "Polynomial");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (dim_ != o.dim_) throw DimMismatch("Polynomial +: dim mismatch");
    Polynomial r = *this;
    for (const auto& [a, c] : o.terms_) r.add_term(a, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + o.scaled(-1);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (dim_ != o.dim_) throw DimMismatch("Polynomial *: dim mismatch");
    Polynomial r(dim_);
    for (const auto& [a, c] : terms_)
        for (const auto& [b, d] : o.terms_) r.add_term(add_indices(a, b), c * d);
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r(dim_);
    if (c == 0) return r;
    for (const auto& [a, v] : terms_) r.terms_.emplace(a, v * c);
    return r;
}

Polynomial Polynomial::derivative(int var) const {
    Polynomial r(dim_);
    for (const auto& [a, c] : terms_) {
        if (a[var] == 0) continue;
        MultiIndex b = a;
        b[var] -= 1;
        r.add_term(b, c * a[var]);
    }
    return r;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, total_degree(a));
    return d;
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
    double sum = 0.0;
    for (const auto& [a, c] : terms_) {
        double t = c.get_d();
        for (int i = 0; i < dim_; ++i)
            for (int e = 0; e < a[i]; ++e) t *= x(i);
        sum += t;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// PolyDiffOp

PolyDiffOp PolyDiffOp::constant(int dim, const Rational& c) {
    PolyDiffOp op(dim);
    op.add_term(MultiIndex(dim, 0), MultiIndex(dim, 0), c);
    return op;
}

PolyDiffOp PolyDiffOp::coordinate(int dim, int var, int power) {
    PolyDiffOp op(dim);
    MultiIndex mono(dim, 0);
    mono[var] = power;
    op.add_term(mono, MultiIndex(dim, 0), 1);
    return op;
}

PolyDiffOp PolyDiffOp::derivative(int dim, int var, int order) {
    PolyDiffOp op(dim);
    MultiIndex deriv(dim, 0);
    deriv[var] = order;
    op.add_term(MultiIndex(dim, 0), deriv, 1);
    return op;
}

PolyDiffOp PolyDiffOp::radial_field(int dim) {
    PolyDiffOp op(dim);
    for (int i = 0; i < dim; ++i) {
        MultiIndex mono(dim, 0), deriv(dim, 0);
        mono[i] = 1;
        deriv[i] = 1;
        op.add_term(mono, deriv, 1);
    }
    return op;
}

void PolyDiffOp::add_term(const MultiIndex& mono, const MultiIndex& deriv, const Rational& c) {
    check_multiindex(mono, dim_, "PolyDiffOp");
    check_multiindex(deriv, dim_, "PolyDiffOp");
    if (c == 0) return;
    if (total_degree(mono) + total_degree(deriv) > kMaxTotalDegree)
        throw DegreeCapExceeded("operator term exceeds total degree cap " +
                                std::to_string(kMaxTotalDegree));
    TermKey key{mono, deriv};
    auto [it, inserted] = terms_.emplace(std::move(key), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

PolyDiffOp PolyDiffOp::operator+(const PolyDiffOp& o) const {
    if (dim_ != o.dim_) throw DimMismatch("PolyDiffOp +: dim mismatch");
    PolyDiffOp r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k.mono, k.deriv, c);
    return r;
}

PolyDiffOp PolyDiffOp::operator-(const PolyDiffOp& o) const {
    return *this + o.scaled(-1);
}

PolyDiffOp PolyDiffOp::operator-() const {
    return scaled(-1);
}

PolyDiffOp PolyDiffOp::scaled(const Rational& c) const {
    PolyDiffOp r(dim_);
    if (c == 0) return r;
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
    return r;
}

Polynomial PolyDiffOp::apply(const Polynomial& p) const {
    if (dim_ != p.dim()) throw DimMismatch("PolyDiffOp apply: dim mismatch");
    Polynomial r(dim_);
    for (const auto& [k, c] : terms_) {
        for (const auto& [gamma, d] : p.terms()) {
            // d^beta x^gamma = prod falling(gamma_i, beta_i) x^(gamma-beta), zero if beta > gamma.
            bool vanishes = false;
            mpz_class factor = 1;
            for (int i = 0; i < dim_; ++i) {
                if (k.deriv[i] > gamma[i]) {
                    vanishes = true;
                    break;
                }
                factor *= falling_factorial(gamma[i], k.deriv[i]);
            }
            if (vanishes) continue;
            r.add_term(add_indices(k.mono, sub_indices(gamma, k.deriv)), c * d * Rational(factor));
        }
    }
    return r;
}

PolyDiffOp compose(const PolyDiffOp& a, const PolyDiffOp& b) {
    if (a.dim() != b.dim()) throw DimMismatch("compose: dim mismatch");
    const int n = a.dim();
    PolyDiffOp out(n);

    for (const auto& [ka, ca] : a.terms()) {
        for (const auto& [kb, cb] : b.terms()) {
            // (x^alpha d^beta)(x^gamma d^delta): push d^beta through x^gamma with
            // the generalized Leibniz rule, summing over sigma <= min(beta, gamma):
            //   prod_i C(beta_i, sigma_i) * falling(gamma_i, sigma_i)
            //   x^(alpha+gamma-sigma) d^(beta-sigma+delta).
            const MultiIndex& alpha = ka.mono;
            const MultiIndex& beta = ka.deriv;
            const MultiIndex& gamma = kb.mono;
            const MultiIndex& delta = kb.deriv;

            MultiIndex sigma(n, 0);
            MultiIndex cap(n, 0);
            for (int i = 0; i < n; ++i) cap[i] = std::min(beta[i], gamma[i]);

            while (true) {
                mpz_class coeff = 1;
                for (int i = 0; i < n; ++i)
                    coeff *= binomial(beta[i], sigma[i]) * falling_factorial(gamma[i], sigma[i]);

                MultiIndex mono = sub_indices(add_indices(alpha, gamma), sigma);
                MultiIndex deriv = add_indices(sub_indices(beta, sigma), delta);
                out.add_term(mono, deriv, ca * cb * Rational(coeff));

                int i = n - 1;
                while (i >= 0 && ++sigma[i] > cap[i]) sigma[i--] = 0;
                if (i < 0) break;
            }
        }
    }
    return out;
}

PolyDiffOp commutator(const PolyDiffOp& a, const PolyDiffOp& b) {
    return compose(a, b) - compose(b, a);
}

std::string PolyDiffOp::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        const bool negative = c < 0;
        const Rational mag = negative ? Rational(-c) : c;
        if (first) {
            if (negative) out << "-";
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        std::vector<std::string> factors;
        for (int i = 0; i < dim_; ++i) {
            if (k.mono[i] == 0) continue;
            std::string f = "x" + std::to_string(i + 1);
            if (k.mono[i] > 1) f += "^" + std::to_string(k.mono[i]);
            factors.push_back(std::move(f));
        }
        for (int i = 0; i < dim_; ++i) {
            if (k.deriv[i] == 0) continue;
            std::string f = "d" + std::to_string(i + 1);
            if (k.deriv[i] > 1) f += "^" + std::to_string(k.deriv[i]);
            factors.push_back(std::move(f));
        }
        if (factors.empty()) {
            out << mag.get_str();
        } else {
            if (mag != 1) out << mag.get_str() << " ";
            for (std::size_t i = 0; i < factors.size(); ++i) {
                if (i) out << " ";
                out << factors[i];
            }
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// EllipticOperator

EllipticOperator::EllipticOperator(int dim, Matrix K) : dim_(dim), K_(std::move(K)) {
    if (static_cast<int>(K_.size()) != dim)
        throw DimMismatch("EllipticOperator: K must be dim x dim");
    for (const auto& row : K_)
        if (static_cast<int>(row.size()) != dim)
            throw DimMismatch("EllipticOperator: K must be dim x dim");
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (K_[i][j] != K_[j][i]) throw NotSymmetric("K is not symmetric");

    // Exact LDL^T pivots decide positive definiteness.
    Matrix work = K_;
    for (int k = 0; k < dim; ++k) {
        if (work[k][k] <= 0)
            throw NotPositiveDefinite("K is not positive definite (pivot " +
                                      std::to_string(k) + " <= 0)");
        for (int i = k + 1; i < dim; ++i) {
            const Rational factor = work[i][k] / work[k][k];
            for (int j = k; j < dim; ++j) work[i][j] -= factor * work[k][j];
        }
    }

    Eigen::MatrixXd Kd(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) Kd(i, j) = K_[i][j].get_d();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd);
    lambda_min_ = es.eigenvalues().minCoeff();
}

PolyDiffOp elliptic_to_diffop(const EllipticOperator& e) {
    const int n = e.dim();
    PolyDiffOp op(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            MultiIndex deriv(n, 0);
            deriv[i] += 1;
            deriv[j] += 1;
            op.add_term(MultiIndex(n, 0), deriv, -e.coeff(i, j));
        }
    }
    return op;
}

CommutatorCheck verify_commutator_lemma(const EllipticOperator& e) {
    const PolyDiffOp p = elliptic_to_diffop(e);
    const PolyDiffOp x = PolyDiffOp::radial_field(e.dim());
    PolyDiffOp residual = commutator(p, x) - p.scaled(2);
    return CommutatorCheck{residual.is_zero(), std::move(residual)};
}

// ---------------------------------------------------------------------------
// Rational matrix helpers

EllipticOperator::Matrix rational_inverse(const EllipticOperator::Matrix& m) {
    const int n = static_cast<int>(m.size());
    EllipticOperator::Matrix a = m;
    EllipticOperator::Matrix inv(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;

    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw Error("rational_inverse: singular matrix");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const Rational d = a[col][col];
        for (int j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col];
            for (int j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

EllipticOperator::Matrix rational_matmul(const EllipticOperator::Matrix& a,
                                         const EllipticOperator::Matrix& b) {
    const int n = static_cast<int>(a.size());
    const int k = static_cast<int>(b.size());
    const int m = static_cast<int>(b[0].size());
    EllipticOperator::Matrix r(n, std::vector<Rational>(m, 0));
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < k; ++l)
            for (int j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    return r;
}

EllipticOperator::Matrix rational_transpose(const EllipticOperator::Matrix& m) {
    const int n = static_cast<int>(m.size());
    const int c = static_cast<int>(m[0].size());
    EllipticOperator::Matrix r(c, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < c; ++j) r[j][i] = m[i][j];
    return r;
}

} // namespace simplexwave
