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
#include <semisparse/io.h>

#include <cmath>
#include <fstream>
#include <random>

namespace semisparse {

namespace {

Eigen::Vector3d random_unit(std::mt19937_64& rng, std::normal_distribution<double>& gauss)
{
    for (;;) {
        const Eigen::Vector3d d(gauss(rng), gauss(rng), gauss(rng));
        const double len = d.norm();
        if (len > 0) return d / len;
    }
}

VertexMatrix<double> vertex_normals(const TriMesh<double>& mesh)
{
    const auto& V = mesh.vertices();
    const auto& F = mesh.faces();
    VertexMatrix<double> normals = VertexMatrix<double>::Zero(mesh.num_vertices(), 3);
    for (Index t = 0; t < mesh.num_faces(); ++t) {
        // cross product length is twice the area, so this is area weighted
        const Eigen::RowVector3d a = V.row(F(t, 0));
        const Eigen::RowVector3d n = (V.row(F(t, 1)) - a).cross(V.row(F(t, 2)) - a);
        for (int k = 0; k < 3; ++k) normals.row(F(t, k)) += n;
    }
    for (Index v = 0; v < mesh.num_vertices(); ++v) {
        const double len = normals.row(v).norm();
        if (len > 0) normals.row(v) /= len;
    }
    return normals;
}

} // namespace

std::string to_string(NoiseDirection direction)
{
    return direction == NoiseDirection::RandomUnit ? "random-unit" : "vertex-normal";
}

NoiseDirection parse_noise_direction(const std::string& name)
{
    if (name == "random-unit") return NoiseDirection::RandomUnit;
    if (name == "vertex-normal") return NoiseDirection::VertexNormal;
    throw InvalidParameter("unknown noise direction '" + name + "'");
}

VertexMatrix<double> noise_displacements(const TriMesh<double>& mesh, const NoiseSpec& spec)
{
    if (!(std::isfinite(spec.sigma_rel) && spec.sigma_rel >= 0)) {
        throw InvalidParameter("sigma_rel must be finite and non-negative");
    }
    const double sigma = spec.sigma_rel * mean_edge_length(mesh);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    VertexMatrix<double> normals;
    if (spec.direction == NoiseDirection::VertexNormal) normals = vertex_normals(mesh);

    VertexMatrix<double> offsets(mesh.num_vertices(), 3);
    for (Index v = 0; v < mesh.num_vertices(); ++v) {
        const Eigen::Vector3d d = spec.direction == NoiseDirection::RandomUnit
                                      ? random_unit(rng, gauss)
                                      : Eigen::Vector3d(normals.row(v).transpose());
        const double g = sigma * gauss(rng);
        offsets.row(v) = g * d.transpose();
    }
    return offsets;
}

TriMesh<double> add_noise(const TriMesh<double>& mesh, const NoiseSpec& spec)
{
    return mesh.with_vertices(mesh.vertices() + noise_displacements(mesh, spec));
}

void write_noise_meta(
    const std::filesystem::path& path,
    const NoiseSpec& spec,
    const std::filesystem::path& source,
    double mean_edge_len)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "source=" << source.string() << '\n'
        << "sigma_rel=" << format_double(spec.sigma_rel) << '\n'
        << "mean_edge_length=" << format_double(mean_edge_len) << '\n'
        << "sigma=" << format_double(spec.sigma_rel * mean_edge_len) << '\n'
        << "direction_mode=" << to_string(spec.direction) << '\n'
        << "seed=" << spec.seed << '\n';
}

} // namespace semisparse
