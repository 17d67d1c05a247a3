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
#pragma once

#include <semisparse/errors.h>
#include <semisparse/mesh.h>

#include <Eigen/Core>

#include <vector>

namespace semisparse {

struct VertexUpdateParams
{
    int iterations = 20;
    double step = 1.0;

    void validate() const
    {
        if (iterations < 0) throw InvalidParameter("vertex update iterations must be >= 0");
        if (!(step > 0 && step <= 1)) throw InvalidParameter("vertex update step must be in (0, 1]");
    }
};

///
/// Move vertices so that faces become orthogonal to the prescribed normals:
///
///   v_i += step / |F_i| * sum_{t in F_i} N_t (N_t . (c_t - v_i)),
///
/// with c_t the barycenter of face t. Jacobi-style: each sweep reads only the previous
/// positions. Vertices without incident faces are left where they are.
///
template <typename Scalar, typename Derived>
VertexMatrix<Scalar> update_vertices(
    const TriMesh<Scalar>& mesh,
    const Eigen::MatrixBase<Derived>& normals,
    const VertexUpdateParams& params = {})
{
    params.validate();
    if (normals.rows() != mesh.num_faces() || normals.cols() != 3) {
        throw SizeMismatch("update_vertices expects one 3-vector per face");
    }
    const auto& F = mesh.faces();
    const Index nv = mesh.num_vertices();
    const Index nf = mesh.num_faces();

    std::vector<int> valence(static_cast<std::size_t>(nv), 0);
    for (Index t = 0; t < nf; ++t) {
        for (int k = 0; k < 3; ++k) ++valence[F(t, k)];
    }

    VertexMatrix<Scalar> current = mesh.vertices();
    VertexMatrix<Scalar> delta(nv, 3);
    const Scalar step = static_cast<Scalar>(params.step);
    for (int it = 0; it < params.iterations; ++it) {
        delta.setZero();
        for (Index t = 0; t < nf; ++t) {
            const Eigen::Matrix<Scalar, 1, 3> n = normals.row(t);
            const Eigen::Matrix<Scalar, 1, 3> c =
                (current.row(F(t, 0)) + current.row(F(t, 1)) + current.row(F(t, 2))) / Scalar(3);
            for (int k = 0; k < 3; ++k) {
                const Index v = F(t, k);
                delta.row(v) += n * n.dot(c - current.row(v));
            }
        }
        for (Index v = 0; v < nv; ++v) {
            if (valence[v] > 0) current.row(v) += step / static_cast<Scalar>(valence[v]) * delta.row(v);
        }
    }
    return current;
}

/// sum over faces and their vertices of (N_t . (c_t - v))^2.
template <typename Scalar, typename Derived>
Scalar normal_agreement_residual(
    const VertexMatrix<Scalar>& positions,
    const FaceMatrix& faces,
    const Eigen::MatrixBase<Derived>& normals)
{
    Scalar sum = 0;
    for (Eigen::Index t = 0; t < faces.rows(); ++t) {
        const Eigen::Matrix<Scalar, 1, 3> n = normals.row(t);
        const Eigen::Matrix<Scalar, 1, 3> c =
            (positions.row(faces(t, 0)) + positions.row(faces(t, 1)) + positions.row(faces(t, 2))) /
            Scalar(3);
        for (int k = 0; k < 3; ++k) {
            const Scalar d = n.dot(c - positions.row(faces(t, k)));
            sum += d * d;
        }
    }
    return sum;
}

} // namespace semisparse
