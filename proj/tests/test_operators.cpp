/*
 * Copyright 2026 The semisparse Authors. All rights reserved.
 * This file is licensed to you under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License. You may obtain a copy
 * of the License at http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software distributed under
 * the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR REPRESENTATIONS
 * OF ANY KIND, either express or implied. See the License for the specific language
 * governing permissions and limitations under the License.
 */
#include <semisparse/operators.h>
#include <semisparse/primitives.h>

#include <doctest.h>

#include <random>
#include <vector>

using namespace semisparse;

namespace {

using Field = Eigen::MatrixXd;

Field random_field(Eigen::Index rows, Eigen::Index cols, std::mt19937& rng)
{
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Field f(rows, cols);
    for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = uni(rng);
    return f;
}

// Oracles: weighted sums written straight from the definitions, one loop per term.
double brute_U(const TriMesh<double>& m, const Field& a, const Field& b)
{
    double s = 0;
    for (Index t = 0; t < m.num_faces(); ++t)
        for (Eigen::Index c = 0; c < a.cols(); ++c) s += a(t, c) * b(t, c) * m.area(t);
    return s;
}

double brute_V(const TriMesh<double>& m, const Field& a, const Field& b)
{
    double s = 0;
    for (Index e = 0; e < m.num_edges(); ++e)
        for (Eigen::Index c = 0; c < a.cols(); ++c) s += a(e, c) * b(e, c) * m.edge_length(e);
    return s;
}

double brute_W(const TriMesh<double>& m, const Field& a, const Field& b)
{
    double s = 0;
    for (Index t = 0; t < m.num_faces(); ++t)
        for (int k = 0; k < 3; ++k)
            for (Eigen::Index c = 0; c < a.cols(); ++c) s += a(3 * t + k, c) * b(3 * t + k, c) * m.area(t);
    return s;
}

std::vector<TriMesh<double>> meshes()
{
    std::vector<TriMesh<double>> out;
    for (const auto& d :
         {make_single_triangle(), make_two_triangle_strip(), make_grid(5, 4), make_cube(3), make_icosphere(2),
          make_tetrahedron()}) {
        out.push_back(build_mesh<double>(d.positions, d.faces));
    }
    return out;
}

} // namespace

TEST_CASE("D on constant and boundary data")
{
    for (const auto& m : meshes()) {
        const Field u = Field::Constant(m.num_faces(), 3, 0.7);
        const Field du = apply_D(m, u);
        CHECK((du.array() == 0).all());

        std::mt19937 rng(3);
        const Field r = apply_D(m, random_field(m.num_faces(), 2, rng));
        for (Index e = 0; e < m.num_edges(); ++e) {
            if (m.is_boundary_edge(e)) CHECK((r.row(e).array() == 0).all());
        }
    }
}

TEST_CASE("two-triangle jump")
{
    const auto d = make_two_triangle_strip();
    const auto m = build_mesh<double>(d.positions, d.faces);
    // Faces (0,1,2) and (0,2,3) share edge 0-2. Face 0 walks it 2 -> 0 (sgn -1), face 1 walks
    // it 0 -> 2 (sgn +1), so the jump is b - a.
    Field u(2, 1);
    u << 2.5, -1.0;
    const Field du = apply_D(m, u);
    int interior = 0;
    for (Index e = 0; e < m.num_edges(); ++e) {
        if (m.is_boundary_edge(e)) continue;
        ++interior;
        CHECK(m.edges()(e, 0) == 0);
        CHECK(m.edges()(e, 1) == 2);
        CHECK(du(e, 0) == -1.0 - 2.5);
    }
    CHECK(interior == 1);

    const Field g = apply_grad(m, u);
    for (Index t = 0; t < 2; ++t) {
        int nonzero = 0;
        for (int i = 0; i < 3; ++i) {
            if (g(3 * t + i, 0) != 0) {
                ++nonzero;
                CHECK(std::abs(g(3 * t + i, 0)) == 3.5);
            }
        }
        CHECK(nonzero == 1);
    }
}

TEST_CASE("gradient of constant and isolated triangle")
{
    const auto d = make_icosphere(1);
    const auto m = build_mesh<double>(d.positions, d.faces);
    CHECK((apply_grad(m, Field::Ones(m.num_faces(), 3)).array() == 0).all());

    const auto s = make_single_triangle();
    const auto single = build_mesh<double>(s.positions, s.faces);
    Field u(1, 3);
    u << 1, 2, 3;
    CHECK((apply_grad(single, u).array() == 0).all());
    CHECK((apply_D_star(single, Field::Ones(3, 3)).array() == 0).all());
    CHECK((apply_grad2_star(single, Field::Ones(3, 3)).array() == 0).all());
}

TEST_CASE("second-order stencil values")
{
    const auto d = make_tetrahedron();
    const auto m = build_mesh<double>(d.positions, d.faces);
    const LineStencil& s = m.stencil(0, 0);
    REQUIRE(s.active);
    Field u = Field::Zero(m.num_faces(), 1);
    u(*s.tau_plus, 0) = 3;
    u(s.tau, 0) = 2;
    u(*s.tau_minus, 0) = 1;
    CHECK(apply_grad2(m, u)(0, 0) == 0);
    u(*s.tau_minus, 0) = 5;
    CHECK(apply_grad2(m, u)(0, 0) == 4);

    for (const auto& mesh : meshes()) {
        const Field g = apply_grad2(mesh, Field::Constant(mesh.num_faces(), 3, -1.25));
        CHECK((g.array() == 0).all());
    }
}

TEST_CASE("inactive stencils are exactly zero")
{
    const auto d = make_grid(4, 4);
    const auto m = build_mesh<double>(d.positions, d.faces);
    std::mt19937 rng(11);
    const Field g = apply_grad2(m, random_field(m.num_faces(), 3, rng));
    int inactive = 0;
    for (std::size_t l = 0; l < m.stencils().size(); ++l) {
        if (m.stencils()[l].active) continue;
        ++inactive;
        CHECK((g.row(static_cast<Eigen::Index>(l)).array() == 0).all());
    }
    CHECK(inactive > 0);
}

TEST_CASE("inner products")
{
    const auto d = make_icosphere(2);
    const auto m = build_mesh<double>(d.positions, d.faces);

    Field ind = Field::Zero(m.num_faces(), 1);
    ind(7, 0) = 1;
    CHECK(inner_U(m, ind, ind) == m.area(7));

    Field v1 = Field::Zero(m.num_edges(), 3), v2 = Field::Zero(m.num_edges(), 3);
    v1.row(0).setOnes();
    v2.row(1).setOnes();
    CHECK(inner_V(m, v1, v2) == 0);

    const Field ones = Field::Ones(m.num_faces(), 1);
    CHECK(norm_U(m, ones) * norm_U(m, ones) == doctest::Approx(m.total_area()).epsilon(1e-14));

    std::mt19937 rng(5);
    const Field a = random_field(m.num_faces(), 3, rng), b = random_field(m.num_faces(), 3, rng);
    CHECK(inner_U(m, a, b) == doctest::Approx(brute_U(m, a, b)).epsilon(1e-13));
    const Field w1 = random_field(3 * m.num_faces(), 3, rng), w2 = random_field(3 * m.num_faces(), 3, rng);
    CHECK(inner_W(m, w1, w2) == doctest::Approx(brute_W(m, w1, w2)).epsilon(1e-13));

    CHECK_THROWS_AS(inner_U(m, a, Field(a.rows(), 2)), SizeMismatch);
    CHECK_THROWS_AS(apply_D(m, Field(m.num_faces() + 1, 3)), SizeMismatch);
    CHECK_THROWS_AS(apply_D_star(m, Field(m.num_faces(), 3)), SizeMismatch);
    CHECK_THROWS_AS(apply_grad2_star(m, Field(m.num_faces(), 3)), SizeMismatch);
}

TEST_CASE("adjoint identities against brute-force inner products")
{
    std::mt19937 rng(2024);
    for (const auto& m : meshes()) {
        for (int trial = 0; trial < 20; ++trial) {
            const Field u = random_field(m.num_faces(), 3, rng);
            const Field v = random_field(m.num_edges(), 3, rng);
            const Field w = random_field(3 * m.num_faces(), 3, rng);

            const double lhs1 = brute_V(m, apply_D(m, u), v);
            const double rhs1 = brute_U(m, u, apply_D_star(m, v));
            const double scale1 = std::sqrt(brute_U(m, u, u) * brute_V(m, v, v));
            CHECK(std::abs(lhs1 - rhs1) <= 1e-10 * scale1);

            const double lhs2 = brute_W(m, apply_grad2(m, u), w);
            const double rhs2 = brute_U(m, u, apply_grad2_star(m, w));
            const double scale2 = std::sqrt(brute_U(m, u, u) * brute_W(m, w, w));
            CHECK(std::abs(lhs2 - rhs2) <= 1e-10 * scale2);
        }
    }
}

TEST_CASE("linearity on integer data is exact")
{
    const auto d = make_cube(2);
    const auto m = build_mesh<double>(d.positions, d.faces);
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> pick(-50, 50);
    Field u1(m.num_faces(), 3), u2(m.num_faces(), 3);
    for (Eigen::Index i = 0; i < u1.size(); ++i) {
        u1.data()[i] = pick(rng);
        u2.data()[i] = pick(rng);
    }
    const double alpha = 3;
    const Field combined = apply_D(m, Field(alpha * u1 + u2));
    const Field separate = alpha * apply_D(m, u1) + apply_D(m, u2);
    CHECK(combined == separate);
    CHECK(apply_grad2(m, Field(alpha * u1 + u2)) == Field(alpha * apply_grad2(m, u1) + apply_grad2(m, u2)));
}

TEST_CASE("orientation independence")
{
    const auto d = make_icosphere(2);
    const auto a = build_mesh<double>(d.positions, d.faces);
    const auto b = build_mesh<double>(d.positions, d.faces, EdgeOrientation::HighToLow);
    std::mt19937 rng(1);
    const Field u = random_field(a.num_faces(), 3, rng);
    CHECK(apply_D(b, u) == Field(-apply_D(a, u)));
    CHECK(apply_grad2(b, u) == apply_grad2(a, u));
}

TEST_CASE("assembled matrices agree with matrix-free operators")
{
    std::mt19937 rng(77);
    for (const auto& m : meshes()) {
        const auto ops = assemble_sparse_operators(m);
        double worst = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const Field u = random_field(m.num_faces(), 3, rng);
            worst = std::max(worst, (Field(ops.D * u) - apply_D(m, u)).cwiseAbs().maxCoeff());
            worst = std::max(worst, (Field(ops.G2 * u) - apply_grad2(m, u)).cwiseAbs().maxCoeff());
        }
        CHECK(worst <= 1e-14);

        for (int trial = 0; trial < 10; ++trial) {
            const Field v = random_field(m.num_edges(), 3, rng);
            const Field w = random_field(3 * m.num_faces(), 3, rng);
            const Field a = ops.D_star * v, b = apply_D_star(m, v);
            const Field c = ops.G2_star * w, e = apply_grad2_star(m, w);
            CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, b.cwiseAbs().maxCoeff()));
            CHECK((c - e).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, e.cwiseAbs().maxCoeff()));
        }

        // weighted-transpose identities, up to the rounding of 1/area * area
        const Eigen::MatrixXd lhs = Eigen::MatrixXd(ops.mass_U * ops.D_star);
        const Eigen::MatrixXd rhs = Eigen::MatrixXd(Eigen::SparseMatrix<double>(ops.D.transpose()) * ops.mass_V);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
        const Eigen::MatrixXd lhs2 = Eigen::MatrixXd(ops.mass_U * ops.G2_star);
        const Eigen::MatrixXd rhs2 = Eigen::MatrixXd(Eigen::SparseMatrix<double>(ops.G2.transpose()) * ops.mass_W);
        CHECK((lhs2 - rhs2).cwiseAbs().maxCoeff() <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, rhs2.cwiseAbs().maxCoeff()));

        // boundary edges have empty rows
        const Eigen::MatrixXd D = Eigen::MatrixXd(ops.D);
        for (Index e = 0; e < m.num_edges(); ++e) {
            if (m.is_boundary_edge(e)) CHECK((D.row(e).array() == 0).all());
        }
    }
}
