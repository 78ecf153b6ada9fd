#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "simplexwave/assembly.hpp"

#include <Eigen/Eigenvalues>

#include <map>
#include <random>

using namespace simplexwave;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

Simplex random_simplex(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    while (true) {
        std::vector<Eigen::VectorXd> pts;
        for (int k = 0; k <= n; ++k) {
            Eigen::VectorXd p(n);
            for (int i = 0; i < n; ++i) p(i) = dist(rng);
            pts.push_back(p);
        }
        try {
            Simplex s = Simplex::from_vertices(pts);
            if (s.volume() > 1e-2) return s;
        } catch (const DegenerateSimplex&) {
        }
    }
}

const Simplex unit_right_triangle =
    Simplex::from_vertices({vec2(0, 0), vec2(1, 0), vec2(0, 1)});

} // namespace

TEST_CASE("refine cell and vertex counts") {
    const SimplicialMesh coarse = refine(unit_right_triangle, 0);
    CHECK(coarse.cells().size() == 1);
    CHECK(coarse.vertices().size() == 3);
    CHECK(coarse.boundary_facets().size() == 3);

    const SimplicialMesh once = refine(unit_right_triangle, 1);
    CHECK(once.cells().size() == 4);
    CHECK(once.vertices().size() == 6);
    CHECK(once.boundary_facets().size() == 6);
    std::map<int, int> facets_per_face;
    for (const auto& f : once.boundary_facets()) facets_per_face[f.parent_face] += 1;
    for (int j = 0; j <= 2; ++j) CHECK(facets_per_face[j] == 2);

    for (int n = 2; n <= 4; ++n) {
        for (int levels = 0; levels <= (n <= 3 ? 2 : 1); ++levels) {
            const SimplicialMesh mesh = refine(Simplex::standard(n), levels);
            CHECK(mesh.cells().size() == std::size_t(1) << (levels * n));
        }
    }
}

TEST_CASE("refined cells partition the volume") {
    const Simplex s = Simplex::from_vertices({vec2(0, 0), vec2(2, 0), vec2(0, 3)});
    const SimplicialMesh mesh = refine(s, 3);
    double total = 0.0;
    for (std::size_t c = 0; c < mesh.cells().size(); ++c) total += mesh.cell_volume(c);
    CHECK(std::abs(total - 3.0) <= 1e-10);

    std::mt19937_64 rng(11);
    const Simplex r = random_simplex(rng, 3);
    const SimplicialMesh rmesh = refine(r, 2);
    double rtotal = 0.0;
    for (std::size_t c = 0; c < rmesh.cells().size(); ++c) rtotal += rmesh.cell_volume(c);
    CHECK(std::abs(rtotal - r.volume()) <= 1e-10 * r.volume());
}

TEST_CASE("boundary facets lie on their tagged parent face") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 4; ++trial) {
        const int n = 2 + trial % 2;
        const Simplex s = random_simplex(rng, n);
        const SimplicialMesh mesh = refine(s, 2);
        const double diameter = s.max_edge_length();
        for (const auto& facet : mesh.boundary_facets()) {
            const Face face = s.face(facet.parent_face);
            const Eigen::VectorXd& on_face = s.vertices()[face.vertex_indices[0]];
            for (int v : facet.vertex_indices) {
                const double dist =
                    std::abs(face.unit_outward_normal.dot(mesh.vertices()[v] - on_face));
                CHECK(dist <= 1e-10 * diameter);
            }
        }
    }
}

TEST_CASE("mesh is conforming: every facet is shared by one or two cells") {
    const SimplicialMesh mesh = refine(Simplex::standard(3), 2);
    std::map<std::vector<int>, int> count;
    for (const auto& cell : mesh.cells()) {
        for (std::size_t omit = 0; omit < cell.size(); ++omit) {
            std::vector<int> facet;
            for (std::size_t k = 0; k < cell.size(); ++k)
                if (k != omit) facet.push_back(cell[k]);
            std::sort(facet.begin(), facet.end());
            count[facet] += 1;
        }
    }
    std::size_t boundary = 0;
    for (const auto& [facet, c] : count) {
        CHECK(c >= 1);
        CHECK(c <= 2);
        if (c == 1) ++boundary;
    }
    CHECK(boundary == mesh.boundary_facets().size());
}

TEST_CASE("cells are positively oriented") {
    std::mt19937_64 rng(17);
    const Simplex s = random_simplex(rng, 3);
    const SimplicialMesh mesh = refine(s, 1);
    for (const auto& cell : mesh.cells()) {
        Eigen::MatrixXd edges(3, 3);
        for (int k = 0; k < 3; ++k)
            edges.col(k) = mesh.vertices()[cell[k + 1]] - mesh.vertices()[cell[0]];
        CHECK(edges.determinant() > 0.0);
    }
}

TEST_CASE("local P1 matrices on the unit right triangle") {
    const SimplicialMesh mesh = refine(unit_right_triangle, 0);
    const AssembledSystem sys = assemble(mesh, Eigen::MatrixXd::Identity(2, 2));

    Eigen::MatrixXd expected_stiffness(3, 3);
    expected_stiffness << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5;
    CHECK((sys.stiffness.to_dense() - expected_stiffness).cwiseAbs().maxCoeff() <= 1e-14);

    Eigen::MatrixXd expected_mass(3, 3);
    expected_mass << 2, 1, 1, 1, 2, 1, 1, 1, 2;
    expected_mass *= 0.5 / 12.0;
    CHECK((sys.mass.to_dense() - expected_mass).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("stiffness annihilates constants; mass sums to the volume") {
    std::mt19937_64 rng(19);
    const Simplex s = random_simplex(rng, 2);
    const SimplicialMesh mesh = refine(s, 3);
    const AssembledSystem sys = assemble(mesh, Eigen::MatrixXd::Identity(2, 2));

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.vertices().size());
    const Eigen::VectorXd s_ones = sys.stiffness * ones;
    CHECK(s_ones.cwiseAbs().maxCoeff() <= 1e-10 * sys.stiffness.max_abs());

    CHECK(sys.mass.row_sums().sum() == doctest::Approx(s.volume()).epsilon(1e-10));
}

TEST_CASE("discrete Green symmetry") {
    std::mt19937_64 rng(23);
    const Simplex s = random_simplex(rng, 2);
    const SimplicialMesh mesh = refine(s, 2);
    const AssembledSystem sys = assemble(mesh, Eigen::MatrixXd::Identity(2, 2));

    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int nv = static_cast<int>(mesh.vertices().size());
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd u(nv), v(nv);
        for (int i = 0; i < nv; ++i) {
            u(i) = dist(rng);
            v(i) = dist(rng);
        }
        // Bitwise-symmetric bilinear evaluation.
        CHECK(sys.stiffness.bilinear(u, v) == sys.stiffness.bilinear(v, u));
        CHECK(sys.mass.bilinear(u, v) == sys.mass.bilinear(v, u));
        // Matrix-vector route agrees up to round-off.
        const double asym = (sys.stiffness * u).dot(v) - u.dot(sys.stiffness * v);
        CHECK(std::abs(asym) <= 1e-12 * std::abs(sys.stiffness.bilinear(u, u) + 1.0));
    }
}

TEST_CASE("dirichlet elimination") {
    const SimplicialMesh too_coarse = refine(unit_right_triangle, 1);
    const AssembledSystem sys1 = assemble(too_coarse, Eigen::MatrixXd::Identity(2, 2));
    CHECK(too_coarse.interior_count() == 0);
    CHECK_THROWS_AS(eliminate_dirichlet(sys1, too_coarse), EmptyInterior);

    const SimplicialMesh mesh = refine(unit_right_triangle, 2);
    CHECK(mesh.interior_count() == 3);
    const AssembledSystem sys = assemble(mesh, Eigen::MatrixXd::Identity(2, 2));
    const DirichletSystem dirichlet = eliminate_dirichlet(sys, mesh);
    CHECK(dirichlet.stiffness.rows() == 3);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dirichlet.stiffness.to_dense());
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(dirichlet.mass.to_dense());
    CHECK(em.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("assemble validates the coefficient matrix") {
    const SimplicialMesh mesh = refine(unit_right_triangle, 1);
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 3, 1;
    CHECK_THROWS_AS(assemble(mesh, bad), NotSymmetric);
    Eigen::MatrixXd indefinite(2, 2);
    indefinite << 1, 2, 2, 1;
    CHECK_THROWS_AS(assemble(mesh, indefinite), NotPositiveDefinite);
    CHECK_THROWS_AS(assemble(mesh, Eigen::MatrixXd::Identity(3, 3)), DimMismatch);
}

TEST_CASE("first Dirichlet eigenvalue converges to 5 pi^2 from above") {
    const double exact = 5.0 * M_PI * M_PI;
    double previous = std::numeric_limits<double>::infinity();
    for (int levels = 2; levels <= 4; ++levels) {
        const SimplicialMesh mesh = refine(unit_right_triangle, levels);
        const DirichletSystem sys =
            eliminate_dirichlet(assemble(mesh, Eigen::MatrixXd::Identity(2, 2)), mesh);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
            sys.stiffness.to_dense(), sys.mass.to_dense());
        const double lowest = es.eigenvalues().minCoeff();
        CHECK(lowest > exact);
        CHECK(lowest < previous);
        previous = lowest;
    }
    CHECK(previous <= exact * 1.05);
}

TEST_CASE("pullback equivalence of physical and reference assembly") {
    const PullbackDiscrepancy same = pullback_equivalence_check(Simplex::standard(2), 3);
    CHECK(same.stiffness_rel <= 1e-13);
    CHECK(same.mass_rel <= 1e-13);

    const Simplex diag = Simplex::from_vertices({vec2(0, 0), vec2(2, 0), vec2(0, 3)});
    const PullbackDiscrepancy scaled = pullback_equivalence_check(diag, 3);
    CHECK(scaled.stiffness_rel <= 1e-10);
    CHECK(scaled.mass_rel <= 1e-10);

    std::mt19937_64 rng(29);
    const PullbackDiscrepancy r3 = pullback_equivalence_check(random_simplex(rng, 3), 2);
    CHECK(r3.stiffness_rel <= 1e-10);
    CHECK(r3.mass_rel <= 1e-10);
}

TEST_CASE("mesh JSON dump") {
    const SimplicialMesh mesh = refine(unit_right_triangle, 1);
    const nlohmann::json j = mesh.to_json();
    CHECK(j.at("vertices").size() == 6);
    CHECK(j.at("cells").size() == 4);
    CHECK(j.at("facets").size() == 6);
    CHECK(j.at("facets").at(0).contains("verts"));
    CHECK(j.at("facets").at(0).contains("face"));
}
