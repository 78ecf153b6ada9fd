#pragma once

#include "simplexwave/geometry.hpp"
#include "simplexwave/quadrature.hpp"

#include <cmath>
#include <vector>

namespace simplexwave {

/// Exact Dirichlet eigenmode of the Laplacian on the order-simplex
/// {0 <= x_1 <= ... <= x_n <= pi}: the antisymmetrized sine determinant
/// phi(x) = det[sin(m_i x_j)] with eigenvalue lambda = sum m_i^2. phi vanishes
/// on every face ({x_1 = 0}, {x_i = x_{i+1}}, {x_n = pi}).
class EigenMode {
public:
    /// modes must be strictly increasing positive integers; duplicates throw
    /// RepeatedMode (the determinant would be identically zero).
    EigenMode(int dim, std::vector<int> modes);

    int dim() const { return dim_; }
    const std::vector<int>& modes() const { return modes_; }
    double lambda() const { return lambda_; }
    double omega() const { return std::sqrt(lambda_); }
    const Simplex& domain() const { return domain_; }

    double eval(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

    /// ||phi||^2 over the order-simplex by Duffy quadrature (cached).
    double norm_squared(int quad_points = 20) const;

private:
    int dim_;
    std::vector<int> modes_;
    double lambda_;
    Simplex domain_;
    mutable double norm_squared_ = -1.0;
};

/// Standing wave u(t, x) = amplitude cos(omega t) phi(x); solves the wave
/// equation with u0 = amplitude phi, u1 = 0.
class StandingWave {
public:
    explicit StandingWave(EigenMode mode, double amplitude = 1.0)
        : mode_(std::move(mode)), amplitude_(amplitude) {}

    const EigenMode& mode() const { return mode_; }
    double amplitude() const { return amplitude_; }
    double eval(double t, const Eigen::VectorXd& x) const {
        return amplitude_ * std::cos(mode_.omega() * t) * mode_.eval(x);
    }
    /// Conserved energy: all potential at t = 0, amplitude^2 lambda ||phi||^2.
    double initial_energy(int quad_points = 20) const {
        return amplitude_ * amplitude_ * mode_.lambda() * mode_.norm_squared(quad_points);
    }

private:
    EigenMode mode_;
    double amplitude_;
};

struct NormAndEnergy {
    double norm_squared = 0.0;
    double energy = 0.0; // E(0) of the unit-amplitude standing wave
};

NormAndEnergy mode_norm_and_energy(const EigenMode& mode, int quad_points = 20);

/// int_{F_j} |d_nu phi|^2 dS by tensor Gauss quadrature on the facet.
double face_flux_integral(const EigenMode& mode, int face, int quad_points = 20);

/// Closed-form time integral of the standing-wave face flux:
/// int_0^T int_{F_j} |d_nu u|^2 dS dt
///   = amplitude^2 (T/2 + sin(2 omega T)/(4 omega)) int_{F_j} |d_nu phi|^2 dS.
double exact_flux_integral(const StandingWave& wave, int face, double T, int quad_points = 20);

} // namespace simplexwave
