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
#include <semisparse/primitives.h>

#include <array>
#include <cmath>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

namespace semisparse {

namespace {

MeshData to_mesh_data(
    const std::vector<Eigen::RowVector3d>& positions,
    const std::vector<std::array<Index, 3>>& faces)
{
    MeshData data;
    data.positions.resize(static_cast<Eigen::Index>(positions.size()), 3);
    for (std::size_t i = 0; i < positions.size(); ++i) data.positions.row(static_cast<Eigen::Index>(i)) = positions[i];
    data.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
    for (std::size_t t = 0; t < faces.size(); ++t) {
        data.faces.row(static_cast<Eigen::Index>(t)) << faces[t][0], faces[t][1], faces[t][2];
    }
    return data;
}

void add_quad(std::vector<std::array<Index, 3>>& faces, Index a, Index b, Index c, Index d)
{
    faces.push_back({a, b, c});
    faces.push_back({a, c, d});
}

} // namespace

MeshData make_single_triangle()
{
    return to_mesh_data({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
}

MeshData make_two_triangle_strip()
{
    return to_mesh_data({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, {{0, 1, 2}, {0, 2, 3}});
}

MeshData make_tetrahedron()
{
    std::vector<Eigen::RowVector3d> p = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    std::vector<std::array<Index, 3>> faces = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    for (auto& f : faces) {
        const Eigen::RowVector3d n = (p[f[1]] - p[f[0]]).cross(p[f[2]] - p[f[0]]);
        if (n.dot(p[f[0]] + p[f[1]] + p[f[2]]) < 0) std::swap(f[1], f[2]);
    }
    return to_mesh_data(p, faces);
}

MeshData make_grid(int nx, int ny)
{
    std::vector<Eigen::RowVector3d> positions;
    std::vector<std::array<Index, 3>> faces;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) positions.emplace_back(i, j, 0);
    }
    auto id = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) add_quad(faces, id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
    }
    return to_mesh_data(positions, faces);
}

MeshData make_cube(int n)
{
    using Lattice = Eigen::Vector3i;
    struct Side
    {
        Lattice origin, u, v; // u x v points outward
    };
    const std::array<Side, 6> sides = {{
        {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}}, // z = 0
        {{0, 0, n}, {1, 0, 0}, {0, 1, 0}}, // z = 1
        {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}}, // x = 0
        {{n, 0, 0}, {0, 1, 0}, {0, 0, 1}}, // x = 1
        {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}}, // y = 0
        {{0, n, 0}, {0, 0, 1}, {1, 0, 0}}, // y = 1
    }};

    std::vector<Eigen::RowVector3d> positions;
    std::vector<std::array<Index, 3>> faces;
    std::unordered_map<long, Index> ids;
    auto vertex = [&](const Lattice& p) {
        const long key = (static_cast<long>(p.x()) * (n + 1) + p.y()) * (n + 1) + p.z();
        auto [it, inserted] = ids.try_emplace(key, static_cast<Index>(positions.size()));
        if (inserted) positions.push_back(p.cast<double>().transpose() / n);
        return it->second;
    };
    for (const Side& s : sides) {
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                auto at = [&](int a, int b) { return vertex(s.origin + a * s.u + b * s.v); };
                add_quad(faces, at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
            }
        }
    }
    return to_mesh_data(positions, faces);
}

MeshData make_icosphere(int levels)
{
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::RowVector3d> positions = {
        {-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0},
        {0, -1, g}, {0, 1, g}, {0, -1, -g}, {0, 1, -g},
        {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1},
    };
    for (auto& p : positions) p.normalize();
    std::vector<std::array<Index, 3>> faces = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
    };
    for (int level = 0; level < levels; ++level) {
        std::map<std::pair<Index, Index>, Index> midpoints;
        auto midpoint = [&](Index a, Index b) {
            const auto key = std::minmax(a, b);
            auto [it, inserted] = midpoints.try_emplace({key.first, key.second}, static_cast<Index>(positions.size()));
            if (inserted) positions.push_back((positions[a] + positions[b]).normalized());
            return it->second;
        };
        std::vector<std::array<Index, 3>> refined;
        refined.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const Index ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
            refined.push_back({f[0], ab, ca});
            refined.push_back({f[1], bc, ab});
            refined.push_back({f[2], ca, bc});
            refined.push_back({ab, bc, ca});
        }
        faces = std::move(refined);
    }
    return to_mesh_data(positions, faces);
}

} // namespace semisparse
