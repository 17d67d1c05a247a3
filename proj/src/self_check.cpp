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
#include <semisparse/self_check.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace semisparse {

namespace {

using Field = Eigen::MatrixXd;

Field random_field(Eigen::Index rows, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Field f(rows, 3);
    for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = g(rng);
    return f;
}

double relative_gap(double a, double b)
{
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

double max_abs(const Field& f) { return f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff(); }

double relative_gap(const Field& a, const Field& b)
{
    return max_abs(a - b) / std::max(1.0, max_abs(b));
}

} // namespace

std::vector<std::pair<std::string, double>> OperatorCheckReport::entries() const
{
    return {
        {"adjoint_D", adjoint_D},
        {"adjoint_grad2", adjoint_grad2},
        {"constant_kernel", constant_kernel},
        {"inactive_stencils", inactive_stencils},
        {"orientation_D", orientation_D},
        {"orientation_grad2", orientation_grad2},
        {"matrix_free", matrix_free},
    };
}

bool OperatorCheckReport::passed(double tolerance) const
{
    return constant_kernel == 0 && inactive_stencils == 0 && orientation_D == 0 &&
           orientation_grad2 == 0 && adjoint_D <= tolerance && adjoint_grad2 <= tolerance &&
           matrix_free <= tolerance;
}

OperatorCheckReport check_operators(const TriMesh<double>& mesh, int trials, std::uint64_t seed)
{
    OperatorCheckReport r;
    r.trials = trials;
    std::mt19937_64 rng(seed);
    const auto flipped = build_mesh<double>(mesh.vertices(), mesh.faces(),
        mesh.orientation() == EdgeOrientation::LowToHigh ? EdgeOrientation::HighToLow
                                                         : EdgeOrientation::LowToHigh);
    const auto ops = assemble_sparse_operators(mesh);
    const Eigen::Index T = mesh.num_faces(), E = mesh.num_edges(), L = 3 * T;

    r.constant_kernel = max_abs(apply_D(mesh, Field::Ones(T, 3)));

    for (int k = 0; k < trials; ++k) {
        const Field u = random_field(T, rng);
        const Field v = random_field(E, rng);
        const Field w = random_field(L, rng);

        const Field Du = apply_D(mesh, u);
        const Field G2u = apply_grad2(mesh, u);
        r.adjoint_D = std::max(r.adjoint_D,
            relative_gap(inner_V(mesh, Du, v), inner_U(mesh, u, apply_D_star(mesh, v))));
        r.adjoint_grad2 = std::max(r.adjoint_grad2,
            relative_gap(inner_W(mesh, G2u, w), inner_U(mesh, u, apply_grad2_star(mesh, w))));

        for (Eigen::Index l = 0; l < L; ++l) {
            if (!mesh.stencils()[static_cast<std::size_t>(l)].active) {
                r.inactive_stencils = std::max(r.inactive_stencils, G2u.row(l).cwiseAbs().maxCoeff());
            }
        }

        r.orientation_D = std::max(r.orientation_D, max_abs(Du + apply_D(flipped, u)));
        r.orientation_grad2 = std::max(r.orientation_grad2, max_abs(G2u - apply_grad2(flipped, u)));

        r.matrix_free = std::max({r.matrix_free,
            relative_gap(Field(ops.D * u), Du),
            relative_gap(Field(ops.G2 * u), G2u),
            relative_gap(Field(ops.D_star * v), apply_D_star(mesh, v)),
            relative_gap(Field(ops.G2_star * w), apply_grad2_star(mesh, w))});
    }
    return r;
}

} // namespace semisparse
