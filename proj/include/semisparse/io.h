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

#include <semisparse/mesh.h>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace semisparse {

/// Raw positions and triangles, before adjacency is built.
struct MeshData
{
    VertexMatrix<double> positions;
    FaceMatrix faces;
};

enum class MeshFormat { Obj, Off };

/// Format from the file extension (.obj / .off, case-insensitive).
MeshFormat mesh_format(const std::filesystem::path& path);

struct ReadOptions
{
    /// Fan-triangulate polygons instead of rejecting them.
    bool triangulate = false;
};

MeshData read_obj(std::istream& in, const std::string& name = "<obj>", const ReadOptions& options = {});
MeshData read_off(std::istream& in, const std::string& name = "<off>", const ReadOptions& options = {});
void write_obj(std::ostream& out, const VertexMatrix<double>& positions, const FaceMatrix& faces);
void write_off(std::ostream& out, const VertexMatrix<double>& positions, const FaceMatrix& faces);

MeshData read_mesh_data(const std::filesystem::path& path, const ReadOptions& options = {});
TriMesh<double> read_mesh(const std::filesystem::path& path, const ReadOptions& options = {});
void write_mesh(const std::filesystem::path& path, const VertexMatrix<double>& positions, const FaceMatrix& faces);
void write_mesh(const std::filesystem::path& path, const TriMesh<double>& mesh);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

// ---------------------------------------------------------------------------------------------

enum class NoiseDirection {
    RandomUnit,   ///< uniform on the sphere
    VertexNormal, ///< area-weighted vertex normal
};

struct NoiseSpec
{
    /// Standard deviation as a multiple of the mean edge length.
    double sigma_rel = 0.3;
    NoiseDirection direction = NoiseDirection::RandomUnit;
    std::uint64_t seed = 0;
};

/// Per-vertex offsets g * d, g ~ Normal(0, (sigma_rel * mean edge length)^2).
VertexMatrix<double> noise_displacements(const TriMesh<double>& mesh, const NoiseSpec& spec);

TriMesh<double> add_noise(const TriMesh<double>& mesh, const NoiseSpec& spec);

/// Writes the noise parameters next to a generated mesh, as `key=value` lines.
void write_noise_meta(
    const std::filesystem::path& path,
    const NoiseSpec& spec,
    const std::filesystem::path& source,
    double mean_edge_len);

std::string to_string(NoiseDirection direction);
NoiseDirection parse_noise_direction(const std::string& name);

// ---------------------------------------------------------------------------------------------

struct MetricsReport
{
    double mean_angular_error_deg = 0;
    double max_angular_error_deg = 0;
    double vertex_rms = 0;
    Index face_count = 0;
    Index vertex_count = 0;
};

/// Angle between two 3-vectors in degrees, in [0, 180].
double angle_degrees(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

/// Angular error of face normals and RMS vertex offset against a reference with the same
/// connectivity.
///
/// @throws ConnectivityMismatch
MetricsReport compute_metrics(const TriMesh<double>& denoised, const TriMesh<double>& ground_truth);

/// Same, for explicit normal fields (one unit 3-vector per row).
MetricsReport compute_normal_metrics(const FaceField<double>& normals, const FaceField<double>& reference);

} // namespace semisparse
