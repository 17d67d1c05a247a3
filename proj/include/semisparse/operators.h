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
#include <Eigen/SparseCore>

#include <string>
#include <vector>

namespace semisparse {

namespace detail {

template <typename Derived>
void check_rows(const Eigen::MatrixBase<Derived>& field, Index expected, const char* what)
{
    if (field.rows() != expected) {
        throw SizeMismatch(
            std::string(what) + ": expected " + std::to_string(expected) + " rows, got " +
            std::to_string(field.rows()));
    }
}

template <typename DerivedA, typename DerivedB>
void check_same_shape(
    const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b,
    const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw SizeMismatch(std::string(what) + ": operand shapes differ");
    }
}

} // namespace detail

/// Per-edge jump operator. Boundary edges map to zero.
template <typename Scalar, typename Derived>
EdgeField<Scalar> apply_D(const TriMesh<Scalar>& mesh, const Eigen::MatrixBase<Derived>& u)
{
    detail::check_rows(u, mesh.num_faces(), "apply_D");
    EdgeField<Scalar> out = EdgeField<Scalar>::Zero(mesh.num_edges(), u.cols());
    for (Index e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.is_boundary_edge(e)) continue;
        const Index t0 = mesh.edge_face(e, 0), t1 = mesh.edge_face(e, 1);
        const Scalar s0 = mesh.edge_sign(e, 0), s1 = mesh.edge_sign(e, 1);
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            out(e, c) = u(t0, c) * s0 + u(t1, c) * s1;
        }
    }
    return out;
}

///
/// Adjoint of `apply_D` under the area-weighted face and length-weighted edge inner
/// products: (D* v)_t = (1 / area_t) * sum over interior edges e of t of sgn(e, t) len(e) v_e.
///
template <typename Scalar, typename Derived>
FaceField<Scalar> apply_D_star(const TriMesh<Scalar>& mesh, const Eigen::MatrixBase<Derived>& v)
{
    detail::check_rows(v, mesh.num_edges(), "apply_D_star");
    FaceField<Scalar> out = FaceField<Scalar>::Zero(mesh.num_faces(), v.cols());
    for (Index t = 0; t < mesh.num_faces(); ++t) {
        for (int i = 0; i < 3; ++i) {
            const Index e = mesh.face_edge(t, i);
            if (mesh.is_boundary_edge(e)) continue;
            const Scalar w = mesh.face_edge_sign(t, i) * mesh.edge_length(e);
            for (Eigen::Index c = 0; c < v.cols(); ++c) out(t, c) += w * v(e, c);
        }
        out.row(t) /= mesh.area(t);
    }
    return out;
}

///
/// Per-face gradient: row `3 * t + i` holds the jump across local edge `i` of face `t` (the
/// edge opposite local vertex `i`).
///
template <typename Scalar, typename Derived>
StencilField<Scalar> apply_grad(const TriMesh<Scalar>& mesh, const Eigen::MatrixBase<Derived>& u)
{
    const EdgeField<Scalar> jumps = apply_D(mesh, u);
    StencilField<Scalar> out(3 * mesh.num_faces(), u.cols());
    for (Index t = 0; t < mesh.num_faces(); ++t) {
        for (int i = 0; i < 3; ++i) out.row(3 * t + i) = jumps.row(mesh.face_edge(t, i));
    }
    return out;
}

/// Second-order differences u(tau+) - 2 u(tau) + u(tau-) on active stencils, zero elsewhere.
template <typename Scalar, typename Derived>
StencilField<Scalar> apply_grad2(const TriMesh<Scalar>& mesh, const Eigen::MatrixBase<Derived>& u)
{
    detail::check_rows(u, mesh.num_faces(), "apply_grad2");
    const auto& stencils = mesh.stencils();
    StencilField<Scalar> out = StencilField<Scalar>::Zero(3 * mesh.num_faces(), u.cols());
    for (std::size_t l = 0; l < stencils.size(); ++l) {
        const LineStencil& s = stencils[l];
        if (!s.active) continue;
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            out(l, c) = u(*s.tau_plus, c) - 2 * u(s.tau, c) + u(*s.tau_minus, c);
        }
    }
    return out;
}

/// Adjoint of `apply_grad2` under the area-weighted stencil inner product (`inner_W`).
template <typename Scalar, typename Derived>
FaceField<Scalar> apply_grad2_star(const TriMesh<Scalar>& mesh, const Eigen::MatrixBase<Derived>& w)
{
    detail::check_rows(w, 3 * mesh.num_faces(), "apply_grad2_star");
    const auto& stencils = mesh.stencils();
    FaceField<Scalar> out = FaceField<Scalar>::Zero(mesh.num_faces(), w.cols());
    for (std::size_t l = 0; l < stencils.size(); ++l) {
        const LineStencil& s = stencils[l];
        if (!s.active) continue;
        const Scalar a = mesh.area(s.tau);
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            const Scalar aw = a * w(l, c);
            out(*s.tau_plus, c) += aw;
            out(s.tau, c) -= 2 * aw;
            out(*s.tau_minus, c) += aw;
        }
    }
    for (Index t = 0; t < mesh.num_faces(); ++t) out.row(t) /= mesh.area(t);
    return out;
}

namespace detail {

// Weighted inner product over rows; row r carries weight weight(r / stride).
template <typename Scalar, typename DerivedA, typename DerivedB, typename Weights>
Scalar weighted_inner(
    const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b,
    const Weights& weight,
    Index stride)
{
    Scalar sum = 0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        Scalar row = 0;
        for (Eigen::Index c = 0; c < a.cols(); ++c) row += a(r, c) * b(r, c);
        sum += weight[static_cast<Index>(r) / stride] * row;
    }
    return sum;
}

} // namespace detail

/// Area-weighted inner product of face fields, summed over channels.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar inner_U(
    const TriMesh<Scalar>& mesh,
    const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b)
{
    detail::check_rows(a, mesh.num_faces(), "inner_U");
    detail::check_same_shape(a, b, "inner_U");
    return detail::weighted_inner<Scalar>(a, b, mesh.areas(), 1);
}

/// Length-weighted inner product of edge fields, summed over channels.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar inner_V(
    const TriMesh<Scalar>& mesh,
    const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b)
{
    detail::check_rows(a, mesh.num_edges(), "inner_V");
    detail::check_same_shape(a, b, "inner_V");
    return detail::weighted_inner<Scalar>(a, b, mesh.edge_lengths(), 1);
}

/// Inner product of stencil fields; each stencil is weighted by the area of its triangle.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar inner_W(
    const TriMesh<Scalar>& mesh,
    const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b)
{
    detail::check_rows(a, 3 * mesh.num_faces(), "inner_W");
    detail::check_same_shape(a, b, "inner_W");
    return detail::weighted_inner<Scalar>(a, b, mesh.areas(), 3);
}

template <typename Scalar, typename Derived>
Scalar norm_U(const TriMesh<Scalar>& mesh, const Eigen::MatrixBase<Derived>& a)
{
    return std::sqrt(inner_U(mesh, a, a));
}

template <typename Scalar, typename Derived>
Scalar norm_V(const TriMesh<Scalar>& mesh, const Eigen::MatrixBase<Derived>& a)
{
    return std::sqrt(inner_V(mesh, a, a));
}

template <typename Scalar, typename Derived>
Scalar norm_W(const TriMesh<Scalar>& mesh, const Eigen::MatrixBase<Derived>& a)
{
    return std::sqrt(inner_W(mesh, a, a));
}

///
/// The difference operators and inner-product weights as sparse matrices.
///
/// Adjoints are weighted transposes: `D_star = mass_U^-1 D^T mass_V` and
/// `G2_star = mass_U^-1 G2^T mass_W`.
///
template <typename Scalar>
struct OperatorBundle
{
    using SparseMatrix = Eigen::SparseMatrix<Scalar>;

    SparseMatrix D;       ///< E x T
    SparseMatrix D_star;  ///< T x E
    SparseMatrix G2;      ///< 3T x T
    SparseMatrix G2_star; ///< T x 3T
    SparseMatrix mass_U;  ///< T x T, face areas
    SparseMatrix mass_V;  ///< E x E, edge lengths
    SparseMatrix mass_W;  ///< 3T x 3T, owning-face areas
};

namespace detail {

template <typename Scalar>
Eigen::SparseMatrix<Scalar> diagonal_matrix(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& diag)
{
    Eigen::SparseMatrix<Scalar> m(diag.size(), diag.size());
    std::vector<Eigen::Triplet<Scalar>> entries;
    entries.reserve(static_cast<std::size_t>(diag.size()));
    for (Eigen::Index i = 0; i < diag.size(); ++i) entries.emplace_back(i, i, diag[i]);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

} // namespace detail

template <typename Scalar>
OperatorBundle<Scalar> assemble_sparse_operators(const TriMesh<Scalar>& mesh)
{
    using Triplet = Eigen::Triplet<Scalar>;
    const Index T = mesh.num_faces();
    const Index E = mesh.num_edges();
    OperatorBundle<Scalar> ops;

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(E) * 2);
    for (Index e = 0; e < E; ++e) {
        if (mesh.is_boundary_edge(e)) continue;
        for (int k = 0; k < 2; ++k) {
            entries.emplace_back(e, mesh.edge_face(e, k), Scalar(mesh.edge_sign(e, k)));
        }
    }
    ops.D.resize(E, T);
    ops.D.setFromTriplets(entries.begin(), entries.end());

    entries.clear();
    entries.reserve(static_cast<std::size_t>(T) * 9);
    const auto& stencils = mesh.stencils();
    for (std::size_t l = 0; l < stencils.size(); ++l) {
        const LineStencil& s = stencils[l];
        if (!s.active) continue;
        const auto row = static_cast<Index>(l);
        entries.emplace_back(row, *s.tau_plus, Scalar(1));
        entries.emplace_back(row, s.tau, Scalar(-2));
        entries.emplace_back(row, *s.tau_minus, Scalar(1));
    }
    ops.G2.resize(3 * T, T);
    ops.G2.setFromTriplets(entries.begin(), entries.end());

    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> stencil_weights(3 * T);
    for (Index t = 0; t < T; ++t) stencil_weights.template segment<3>(3 * t).setConstant(mesh.area(t));
    ops.mass_U = detail::diagonal_matrix<Scalar>(mesh.areas());
    ops.mass_V = detail::diagonal_matrix<Scalar>(mesh.edge_lengths());
    ops.mass_W = detail::diagonal_matrix<Scalar>(stencil_weights);

    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv_area = mesh.areas().cwiseInverse();
    const Eigen::SparseMatrix<Scalar> inv_mass_U = detail::diagonal_matrix<Scalar>(inv_area);
    ops.D_star = inv_mass_U * Eigen::SparseMatrix<Scalar>(ops.D.transpose()) * ops.mass_V;
    ops.G2_star = inv_mass_U * Eigen::SparseMatrix<Scalar>(ops.G2.transpose()) * ops.mass_W;
    return ops;
}

} // namespace semisparse
