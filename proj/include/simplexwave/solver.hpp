#pragma once

#include "simplexwave/assembly.hpp"
#include "simplexwave/mesh.hpp"

#include <functional>
#include <vector>

namespace simplexwave {

struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Conjugate gradient for SPD SymmetricSparseMatrix; x is the starting guess
/// and receives the solution. Throws NoConvergence.
CgResult conjugate_gradient(const SymmetricSparseMatrix& a, const Eigen::VectorXd& b,
                            Eigen::VectorXd& x, double rel_tol = 1e-13, int max_iter = 0);

struct CflEstimate {
    double lambda_max = 0.0; // largest generalized eigenvalue of (S, M)
    double dt_max = 0.0;     // 2 / sqrt(lambda_max)
    int iterations = 0;
};

/// Power iteration on M^{-1} S (CG mass solves), ~1% accuracy.
/// Throws NoConvergence after 10^4 iterations.
CflEstimate estimate_cfl(const SymmetricSparseMatrix& mass, const SymmetricSparseMatrix& stiffness);

/// Staggered leapfrog state: displacement u at integer steps, velocity v at
/// half steps.
struct WaveState {
    double time = 0.0;
    int step_index = 0;
    double dt = 0.0;
    Eigen::VectorXd u;              // u^n
    Eigen::VectorXd v;              // v^{n+1/2}
    Eigen::VectorXd initial_velocity; // v at t = 0 (nodal u1)
    Eigen::VectorXd accel;          // last M^{-1} S u, CG warm start
};

struct EnergySample {
    int step = 0;
    double t = 0.0;
    double continuous = 0.0; // E_h = v^T M v + u^T S u, v averaged to integer time
    double invariant = 0.0;  // E_lf = v^T M v + u^n^T S u^{n+1}, staggered
};

struct RunLedger {
    std::vector<EnergySample> energy;
    double initial_continuous_energy = 0.0;
};

struct SolverOptions {
    double cg_rel_tol = 1e-13;
    bool lumped_mass = false;   // row-sum lumping; consistent mass is the default
    double blowup_factor = 10.0;
};

/// Explicit leapfrog integration of M u'' = -S u on the interior dofs.
class WaveSolver {
public:
    WaveSolver(const SimplicialMesh& mesh, DirichletSystem system, SolverOptions options = {});

    const SimplicialMesh& mesh() const { return *mesh_; }
    const DirichletSystem& system() const { return system_; }
    const CflEstimate& cfl() const { return cfl_; }
    double default_dt(double dt_factor = 0.5) const { return dt_factor * cfl_.dt_max; }

    /// Nodal interpolation of u0, u1 plus the Taylor half-step for v^{1/2}.
    /// Throws BoundaryViolation when the data does not vanish on the boundary
    /// and CflViolation when dt is out of range.
    WaveState initialize(const std::function<double(const Eigen::VectorXd&)>& u0,
                         const std::function<double(const Eigen::VectorXd&)>& u1,
                         double dt) const;

    /// Same, but from interior-dof vectors (Dirichlet by construction).
    WaveState initialize_nodal(Eigen::VectorXd u0, Eigen::VectorXd u1, double dt) const;

    /// One leapfrog step; returns the staggered invariant for the step taken.
    double step(WaveState& state) const;

    using Observer = std::function<void(int step, double t, const Eigen::VectorXd& u,
                                        const Eigen::VectorXd& v_integer)>;

    /// Advances until time first reaches or exceeds T, invoking the observers
    /// at every integer step (including step 0). Aborts with CflViolation when
    /// the continuous energy blows past options.blowup_factor times E_h(0).
    RunLedger run(WaveState& state, double T, const std::vector<Observer>& observers = {}) const;

    /// Flips the state so that a subsequent run retraces the trajectory.
    void time_reverse(WaveState& state) const;

    /// Solves M x = b (CG for consistent mass, direct for lumped).
    void mass_solve(const Eigen::VectorXd& b, Eigen::VectorXd& x) const;

    /// u^T M v with whichever mass operator the dynamics uses.
    double mass_bilinear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

private:
    double continuous_energy(const Eigen::VectorXd& u, const Eigen::VectorXd& v_integer) const;

    const SimplicialMesh* mesh_;
    DirichletSystem system_;
    SolverOptions options_;
    CflEstimate cfl_;
    Eigen::VectorXd lumped_diagonal_;
};

} // namespace simplexwave
