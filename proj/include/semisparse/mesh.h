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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace semisparse {

using Index = int;

template <typename Scalar>
using VertexMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;
using FaceMatrix = Eigen::Matrix<Index, Eigen::Dynamic, 3>;
using EdgeMatrix = Eigen::Matrix<Index, Eigen::Dynamic, 2>;

/// Rule used to give every edge its fixed direction.
enum class EdgeOrientation {
    LowToHigh, ///< from the smaller vertex index to the larger one (default)
    HighToLow, ///< the reverse; only useful for checking orientation independence
};

///
/// Second-order stencil attached to one vertex (the apex) of a triangle.
///
/// The two edges of `tau` meeting at the apex are `e_plus` and `e_minus`; `tau_plus` and
/// `tau_minus` are the triangles on the other side of them. The stencil is inactive when
/// either edge lies on the boundary.
///
struct LineStencil
{
    Index tau = -1;
    std::optional<Index> tau_plus;
    std::optional<Index> tau_minus;
    Index e_plus = -1;
    Index e_minus = -1;
    bool active = false;
};

template <typename Scalar>
class TriMesh;

template <typename Scalar>
TriMesh<Scalar> build_mesh(
    VertexMatrix<Scalar> positions,
    FaceMatrix faces,
    EdgeOrientation orientation = EdgeOrientation::LowToHigh);

///
/// Immutable indexed triangle surface with the adjacency, orientation and metric data the
/// face-based difference operators need.
///
/// Local edge `i` of a triangle is the edge opposite its local vertex `i`, traversed from
/// vertex `i+1` to vertex `i+2` by the counter-clockwise face orientation. Stencil `k` of a
/// triangle has local vertex `k` as its apex and is stored at flat index `3 * tau + k`.
///
template <typename Scalar>
class TriMesh
{
public:
    using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Index num_vertices() const { return static_cast<Index>(m_vertices.rows()); }
    Index num_faces() const { return static_cast<Index>(m_faces.rows()); }
    Index num_edges() const { return static_cast<Index>(m_edges.rows()); }

    const VertexMatrix<Scalar>& vertices() const { return m_vertices; }
    const FaceMatrix& faces() const { return m_faces; }
    /// Edge endpoints in canonical direction (from, to).
    const EdgeMatrix& edges() const { return m_edges; }
    EdgeOrientation orientation() const { return m_orientation; }

    Index face_edge(Index tau, int i) const { return m_face_edges(tau, i); }
    int face_edge_sign(Index tau, int i) const { return m_face_edge_signs(tau, i); }

    /// Number of triangles incident to edge `e` (1 on the boundary, 2 otherwise).
    int edge_valence(Index e) const { return m_edge_faces(e, 1) < 0 ? 1 : 2; }
    Index edge_face(Index e, int k) const { return m_edge_faces(e, k); }
    /// sgn(e, tau) for the k-th incident triangle of `e`.
    int edge_sign(Index e, int k) const { return m_edge_signs(e, k); }
    bool is_boundary_edge(Index e) const { return edge_valence(e) == 1; }

    /// The triangle across edge `e` from `tau`, if any.
    std::optional<Index> opposite_face(Index e, Index tau) const
    {
        if (is_boundary_edge(e)) return std::nullopt;
        return m_edge_faces(e, 0) == tau ? m_edge_faces(e, 1) : m_edge_faces(e, 0);
    }

    Scalar area(Index tau) const { return m_areas[tau]; }
    Scalar edge_length(Index e) const { return m_edge_lengths[e]; }
    const VectorX& areas() const { return m_areas; }
    const VectorX& edge_lengths() const { return m_edge_lengths; }

    const LineStencil& stencil(Index tau, int k) const { return m_stencils[3 * tau + k]; }
    const std::vector<LineStencil>& stencils() const { return m_stencils; }
    Index num_active_stencils() const { return m_num_active_stencils; }
    Index num_boundary_edges() const { return m_num_boundary_edges; }

    Scalar total_area() const
    {
        Scalar sum = 0;
        for (Index t = 0; t < num_faces(); ++t) sum += m_areas[t];
        return sum;
    }

    /// Same connectivity and edge orientation, new positions (re-validated).
    TriMesh with_vertices(VertexMatrix<Scalar> positions) const;

    template <typename S>
    friend TriMesh<S> build_mesh(VertexMatrix<S> positions, FaceMatrix faces, EdgeOrientation orientation);

private:
    VertexMatrix<Scalar> m_vertices;
    FaceMatrix m_faces;
    EdgeMatrix m_edges;
    EdgeOrientation m_orientation = EdgeOrientation::LowToHigh;
    FaceMatrix m_face_edges;
    Eigen::Matrix<int, Eigen::Dynamic, 3> m_face_edge_signs;
    EdgeMatrix m_edge_faces;
    Eigen::Matrix<int, Eigen::Dynamic, 2> m_edge_signs;
    VectorX m_areas;
    VectorX m_edge_lengths;
    std::vector<LineStencil> m_stencils;
    Index m_num_active_stencils = 0;
    Index m_num_boundary_edges = 0;
};

///
/// Build the combinatorial and metric structure of a triangulated surface.
///
/// Faces must be counter-clockwise, consistently oriented, manifold and non-degenerate.
///
/// @throws IndexOutOfRange, DegenerateFace, NonManifoldEdge, InconsistentOrientation,
///         DegenerateStencil (two triangles glued along two edges).
///
template <typename Scalar>
TriMesh<Scalar> build_mesh(
    VertexMatrix<Scalar> positions,
    FaceMatrix faces,
    EdgeOrientation orientation)
{
    TriMesh<Scalar> mesh;
    const Index num_vertices = static_cast<Index>(positions.rows());
    const Index num_faces = static_cast<Index>(faces.rows());

    if (!positions.allFinite()) {
        throw DegenerateFace("vertex positions contain NaN or Inf");
    }

    mesh.m_areas.resize(num_faces);
    for (Index t = 0; t < num_faces; ++t) {
        for (int i = 0; i < 3; ++i) {
            if (faces(t, i) < 0 || faces(t, i) >= num_vertices) {
                throw IndexOutOfRange(
                    "face " + std::to_string(t) + " references vertex " +
                    std::to_string(faces(t, i)) + " of " + std::to_string(num_vertices));
            }
        }
        const Index a = faces(t, 0), b = faces(t, 1), c = faces(t, 2);
        if (a == b || b == c || a == c) {
            throw DegenerateFace("face " + std::to_string(t) + " repeats a vertex");
        }
        const Eigen::Matrix<Scalar, 1, 3> e1 = positions.row(b) - positions.row(a);
        const Eigen::Matrix<Scalar, 1, 3> e2 = positions.row(c) - positions.row(a);
        const Eigen::Matrix<Scalar, 1, 3> e3 = positions.row(c) - positions.row(b);
        const Scalar twice_area = e1.cross(e2).norm();
        const Scalar longest =
            std::max({e1.squaredNorm(), e2.squaredNorm(), e3.squaredNorm()});
        if (!(twice_area > std::numeric_limits<Scalar>::epsilon() * longest)) {
            throw DegenerateFace("face " + std::to_string(t) + " has zero area");
        }
        mesh.m_areas[t] = twice_area / 2;
    }

    // Edges are numbered in order of first appearance while scanning faces.
    std::unordered_map<std::uint64_t, Index> edge_ids;
    edge_ids.reserve(static_cast<std::size_t>(num_faces) * 2);
    std::vector<std::array<Index, 2>> edge_list;
    std::vector<std::array<Index, 2>> edge_faces;
    std::vector<std::array<int, 2>> edge_signs;
    mesh.m_face_edges.resize(num_faces, 3);
    mesh.m_face_edge_signs.resize(num_faces, 3);

    for (Index t = 0; t < num_faces; ++t) {
        for (int i = 0; i < 3; ++i) {
            const Index from = faces(t, (i + 1) % 3);
            const Index to = faces(t, (i + 2) % 3);
            const Index lo = std::min(from, to), hi = std::max(from, to);
            const std::uint64_t key =
                (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi);
            auto [it, inserted] = edge_ids.try_emplace(key, static_cast<Index>(edge_list.size()));
            const Index e = it->second;
            if (inserted) {
                if (orientation == EdgeOrientation::LowToHigh) {
                    edge_list.push_back({lo, hi});
                } else {
                    edge_list.push_back({hi, lo});
                }
                edge_faces.push_back({-1, -1});
                edge_signs.push_back({0, 0});
            }
            const int sign = (edge_list[e][0] == from) ? 1 : -1;
            if (edge_faces[e][0] < 0) {
                edge_faces[e][0] = t;
                edge_signs[e][0] = sign;
            } else if (edge_faces[e][1] < 0) {
                if (edge_signs[e][0] == sign) {
                    throw InconsistentOrientation(
                        "faces " + std::to_string(edge_faces[e][0]) + " and " +
                        std::to_string(t) + " traverse edge (" + std::to_string(lo) + ", " +
                        std::to_string(hi) + ") in the same direction");
                }
                edge_faces[e][1] = t;
                edge_signs[e][1] = sign;
            } else {
                throw NonManifoldEdge(
                    "edge (" + std::to_string(lo) + ", " + std::to_string(hi) +
                    ") has more than two incident faces");
            }
            mesh.m_face_edges(t, i) = e;
            mesh.m_face_edge_signs(t, i) = sign;
        }
    }

    const Index num_edges = static_cast<Index>(edge_list.size());
    mesh.m_edges.resize(num_edges, 2);
    mesh.m_edge_faces.resize(num_edges, 2);
    mesh.m_edge_signs.resize(num_edges, 2);
    mesh.m_edge_lengths.resize(num_edges);
    for (Index e = 0; e < num_edges; ++e) {
        mesh.m_edges(e, 0) = edge_list[e][0];
        mesh.m_edges(e, 1) = edge_list[e][1];
        mesh.m_edge_faces(e, 0) = edge_faces[e][0];
        mesh.m_edge_faces(e, 1) = edge_faces[e][1];
        mesh.m_edge_signs(e, 0) = edge_signs[e][0];
        mesh.m_edge_signs(e, 1) = edge_signs[e][1];
        mesh.m_edge_lengths[e] =
            (positions.row(edge_list[e][1]) - positions.row(edge_list[e][0])).norm();
        if (edge_faces[e][1] < 0) ++mesh.m_num_boundary_edges;
    }

    mesh.m_vertices = std::move(positions);
    mesh.m_faces = std::move(faces);
    mesh.m_orientation = orientation;

    mesh.m_stencils.resize(static_cast<std::size_t>(num_faces) * 3);
    for (Index t = 0; t < num_faces; ++t) {
        for (int k = 0; k < 3; ++k) {
            LineStencil& s = mesh.m_stencils[3 * t + k];
            s.tau = t;
            // edge from the apex to the next vertex, and from the previous vertex to the apex
            s.e_plus = mesh.m_face_edges(t, (k + 2) % 3);
            s.e_minus = mesh.m_face_edges(t, (k + 1) % 3);
            s.tau_plus = mesh.opposite_face(s.e_plus, t);
            s.tau_minus = mesh.opposite_face(s.e_minus, t);
            s.active = s.tau_plus.has_value() && s.tau_minus.has_value();
            if (s.active && *s.tau_plus == *s.tau_minus) {
                throw DegenerateStencil(
                    "face " + std::to_string(t) + " shares two edges with face " +
                    std::to_string(*s.tau_plus));
            }
            if (s.active) ++mesh.m_num_active_stencils;
        }
    }
    return mesh;
}

template <typename Scalar>
TriMesh<Scalar> TriMesh<Scalar>::with_vertices(VertexMatrix<Scalar> positions) const
{
    if (positions.rows() != m_vertices.rows()) {
        throw SizeMismatch(
            "expected " + std::to_string(m_vertices.rows()) + " vertices, got " +
            std::to_string(positions.rows()));
    }
    return build_mesh<Scalar>(std::move(positions), m_faces, m_orientation);
}

/// Per-face vector data; one row per triangle, one column per channel.
template <typename Scalar>
using FaceField = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
/// Per-edge vector data; one row per edge.
template <typename Scalar>
using EdgeField = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
/// Per-stencil vector data; row `3 * tau + k` holds stencil k of triangle tau.
template <typename Scalar>
using StencilField = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

///
/// Unit normals of the faces, oriented by the counter-clockwise vertex order.
///
template <typename Scalar>
FaceField<Scalar> face_normals(const TriMesh<Scalar>& mesh)
{
    const auto& V = mesh.vertices();
    const auto& F = mesh.faces();
    FaceField<Scalar> normals(mesh.num_faces(), 3);
    for (Index t = 0; t < mesh.num_faces(); ++t) {
        const Eigen::Matrix<Scalar, 1, 3> a = V.row(F(t, 0));
        const Eigen::Matrix<Scalar, 1, 3> n =
            (V.row(F(t, 1)) - a).cross(V.row(F(t, 2)) - a);
        const Scalar len = n.norm();
        if (!(len > 0)) {
            throw DegenerateFace("face " + std::to_string(t) + " has no normal");
        }
        normals.row(t) = n / len;
    }
    return normals;
}

template <typename Scalar>
Scalar mean_edge_length(const TriMesh<Scalar>& mesh)
{
    if (mesh.num_edges() == 0) {
        throw SizeMismatch("mean edge length of a mesh without edges");
    }
    Scalar sum = 0;
    for (Index e = 0; e < mesh.num_edges(); ++e) sum += mesh.edge_length(e);
    return sum / static_cast<Scalar>(mesh.num_edges());
}

} // namespace semisparse
