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

#include <algorithm>
#include <cmath>
#include <numbers>

namespace semisparse {

double angle_degrees(const Eigen::Vector3d& a, const Eigen::Vector3d& b)
{
    // atan2 keeps precision near 0 and 180 degrees where acos does not
    const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
    return std::clamp(angle * 180.0 / std::numbers::pi, 0.0, 180.0);
}

MetricsReport compute_normal_metrics(const FaceField<double>& normals, const FaceField<double>& reference)
{
    if (normals.rows() != reference.rows() || normals.cols() != 3 || reference.cols() != 3) {
        throw ConnectivityMismatch("normal fields differ in shape");
    }
    MetricsReport report;
    report.face_count = static_cast<Index>(normals.rows());
    double sum = 0;
    for (Eigen::Index t = 0; t < normals.rows(); ++t) {
        const double angle =
            angle_degrees(normals.row(t).transpose(), reference.row(t).transpose());
        sum += angle;
        report.max_angular_error_deg = std::max(report.max_angular_error_deg, angle);
    }
    if (normals.rows() > 0) report.mean_angular_error_deg = sum / static_cast<double>(normals.rows());
    return report;
}

MetricsReport compute_metrics(const TriMesh<double>& denoised, const TriMesh<double>& ground_truth)
{
    if (denoised.num_vertices() != ground_truth.num_vertices() ||
        denoised.num_faces() != ground_truth.num_faces() ||
        denoised.faces() != ground_truth.faces()) {
        throw ConnectivityMismatch("meshes do not share vertex count, face count and face indices");
    }
    MetricsReport report = compute_normal_metrics(face_normals(denoised), face_normals(ground_truth));
    report.vertex_count = denoised.num_vertices();
    if (denoised.num_vertices() > 0) {
        const double sq = (denoised.vertices() - ground_truth.vertices()).rowwise().squaredNorm().sum();
        report.vertex_rms = std::sqrt(sq / static_cast<double>(denoised.num_vertices()));
    }
    return report;
}

} // namespace semisparse
