#include "simplexwave/solver.hpp"

#include <cmath>

namespace simplexwave {

CgResult conjugate_gradient(const SymmetricSparseMatrix& a, const Eigen::VectorXd& b,
                            Eigen::VectorXd& x, double rel_tol, int max_iter) {
    const int n = a.rows();
    if (max_iter <= 0) max_iter = 10 * n + 200;
    if (x.size() != n) x = Eigen::VectorXd::Zero(n);

    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        x.setZero();
        return CgResult{0, 0.0};
    }

    Eigen::VectorXd r = b - a * x;
    Eigen::VectorXd p = r;
    Eigen::VectorXd ap(n);
    double rho = r.squaredNorm();
    const double stop = rel_tol * bnorm;

    CgResult result;
    for (int it = 0; it < max_iter; ++it) {
        if (std::sqrt(rho) <= stop) {
            result.iterations = it;
            result.relative_residual = std::sqrt(rho) / bnorm;
            return result;
        }
        a.apply(p, ap);
        const double alpha = rho / p.dot(ap);
        x += alpha * p;
        r -= alpha * ap;
        const double rho_next = r.squaredNorm();
        p = r + (rho_next / rho) * p;
        rho = rho_next;
    }
    if (std::sqrt(rho) <= stop) {
        result.iterations = max_iter;
        result.relative_residual = std::sqrt(rho) / bnorm;
        return result;
    }
    throw NoConvergence("conjugate gradient stalled at relative residual " +
                        std::to_string(std::sqrt(rho) / bnorm));
}

CflEstimate estimate_cfl(const SymmetricSparseMatrix& mass, const SymmetricSparseMatrix& stiffness) {
    const int n = mass.rows();
    if (stiffness.rows() != n) throw DimMismatch("estimate_cfl: dimension mismatch");

    // Deterministic start vector with all generalized modes excited.
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z(i) = 1.0 + 0.3 * std::sin(1.0 + i);
    z /= z.norm();

    Eigen::VectorXd sz(n), y;
    double lambda = 0.0;
    const int max_iter = 10000;
    for (int it = 1; it <= max_iter; ++it) {
        stiffness.apply(z, sz);
        const double rayleigh = z.dot(sz) / mass.bilinear(z, z);
        y = z; // warm start
        conjugate_gradient(mass, sz, y, 1e-10);
        z = y / y.norm();
        if (it > 3 && std::abs(rayleigh - lambda) <= 1e-5 * std::abs(rayleigh)) {
            CflEstimate est;
            est.lambda_max = rayleigh;
            est.dt_max = 2.0 / std::sqrt(rayleigh);
            est.iterations = it;
            return est;
        }
        lambda = rayleigh;
    }
    throw NoConvergence("estimate_cfl: power iteration did not settle");
}

WaveSolver::WaveSolver(const SimplicialMesh& mesh, DirichletSystem system, SolverOptions options)
    : mesh_(&mesh), system_(std::move(system)), options_(options) {
    if (options_.lumped_mass) {
        lumped_diagonal_ = system_.mass.row_sums();
        // CFL and energies must see the mass operator the dynamics uses.
        std::vector<std::tuple<int, int, double>> triplets;
        for (int i = 0; i < system_.mass.rows(); ++i)
            triplets.emplace_back(i, i, lumped_diagonal_(i));
        const SymmetricSparseMatrix lumped =
            SymmetricSparseMatrix::from_triplets(system_.mass.rows(), triplets);
        cfl_ = estimate_cfl(lumped, system_.stiffness);
    } else {
        cfl_ = estimate_cfl(system_.mass, system_.stiffness);
    }
}

double WaveSolver::mass_bilinear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    if (!options_.lumped_mass) return system_.mass.bilinear(u, v);
    double sum = 0.0;
    for (int i = 0; i < u.size(); ++i) sum += lumped_diagonal_(i) * (u(i) * v(i));
    return sum;
}

void WaveSolver::mass_solve(const Eigen::VectorXd& b, Eigen::VectorXd& x) const {
    if (options_.lumped_mass) {
        x = b.cwiseQuotient(lumped_diagonal_);
    } else {
        conjugate_gradient(system_.mass, b, x, options_.cg_rel_tol);
    }
}

WaveState WaveSolver::initialize(const std::function<double(const Eigen::VectorXd&)>& u0,
                                 const std::function<double(const Eigen::VectorXd&)>& u1,
                                 double dt) const {
    if (!(dt > 0.0)) throw CflViolation("dt must be positive");
    if (dt > cfl_.dt_max)
        throw CflViolation("dt " + std::to_string(dt) + " exceeds dt_max " +
                           std::to_string(cfl_.dt_max));

    const auto& verts = mesh_->vertices();
    const auto& dof = mesh_->interior_dofs();
    for (std::size_t v = 0; v < verts.size(); ++v) {
        if (dof[v] >= 0) continue;
        if (std::abs(u0(verts[v])) > 1e-10 || std::abs(u1(verts[v])) > 1e-10)
            throw BoundaryViolation("initial data does not vanish on the boundary");
    }

    const int m = system_.interior_count;
    Eigen::VectorXd u(m), v(m);
    for (std::size_t vtx = 0; vtx < verts.size(); ++vtx) {
        if (dof[vtx] < 0) continue;
        u(dof[vtx]) = u0(verts[vtx]);
        v(dof[vtx]) = u1(verts[vtx]);
    }
    return initialize_nodal(std::move(u), std::move(v), dt);
}

WaveState WaveSolver::initialize_nodal(Eigen::VectorXd u0, Eigen::VectorXd u1, double dt) const {
    if (!(dt > 0.0)) throw CflViolation("dt must be positive");
    if (dt > cfl_.dt_max)
        throw CflViolation("dt " + std::to_string(dt) + " exceeds dt_max " +
                           std::to_string(cfl_.dt_max));
    if (u0.size() != system_.interior_count || u1.size() != system_.interior_count)
        throw DimMismatch("initialize_nodal: vector length != interior dof count");

    WaveState state;
    state.dt = dt;
    state.u = std::move(u0);
    state.initial_velocity = std::move(u1);

    // Taylor half-step: v^{1/2} = u1 - (dt/2) M^{-1} S u^0.
    state.accel = Eigen::VectorXd::Zero(system_.interior_count);
    mass_solve(system_.stiffness * state.u, state.accel);
    state.v = state.initial_velocity - 0.5 * dt * state.accel;
    return state;
}

double WaveSolver::step(WaveState& state) const {
    const Eigen::VectorXd u_old = state.u;
    state.u += state.dt * state.v;
    const Eigen::VectorXd su = system_.stiffness * state.u;
    // Staggered invariant for the step about to complete:
    // E_lf = v^{n+1/2, T} M v^{n+1/2} + u^{n, T} S u^{n+1}.
    const double invariant = mass_bilinear(state.v, state.v) + u_old.dot(su);
    mass_solve(su, state.accel);
    state.v -= state.dt * state.accel;
    state.step_index += 1;
    state.time = state.step_index * state.dt;
    return invariant;
}

double WaveSolver::continuous_energy(const Eigen::VectorXd& u, const Eigen::VectorXd& v_integer) const {
    return mass_bilinear(v_integer, v_integer) + system_.stiffness.bilinear(u, u);
}

RunLedger WaveSolver::run(WaveState& state, double T, const std::vector<Observer>& observers) const {
    RunLedger ledger;

    auto notify = [&](const Eigen::VectorXd& v_integer) {
        for (const auto& obs : observers) obs(state.step_index, state.time, state.u, v_integer);
    };

    if (state.step_index == 0) {
        const double e0 = continuous_energy(state.u, state.initial_velocity);
        ledger.initial_continuous_energy = e0;
        ledger.energy.push_back({0, 0.0, e0, 0.0});
        notify(state.initial_velocity);
    } else {
        ledger.initial_continuous_energy = continuous_energy(state.u, state.v);
    }

    const double blowup = options_.blowup_factor * std::max(ledger.initial_continuous_energy, 1e-300);
    Eigen::VectorXd v_prev, v_integer;
    while (state.time < T * (1.0 - 1e-14)) {
        v_prev = state.v;
        const double invariant = step(state);
        v_integer = 0.5 * (v_prev + state.v);
        const double energy = continuous_energy(state.u, v_integer);
        ledger.energy.push_back({state.step_index, state.time, energy, invariant});
        notify(v_integer);
        if (energy > blowup)
            throw CflViolation("energy grew past " + std::to_string(options_.blowup_factor) +
                               "x the initial energy; unstable time step");
    }
    return ledger;
}

void WaveSolver::time_reverse(WaveState& state) const {
    // v^{n-1/2} = v^{n+1/2} + dt M^{-1} S u^n; negating it reverses the walk.
    Eigen::VectorXd a = state.accel;
    mass_solve(system_.stiffness * state.u, a);
    state.v = -(state.v + state.dt * a);
    state.accel = -state.accel;
}

} // namespace simplexwave
