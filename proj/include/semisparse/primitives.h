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

#include <semisparse/io.h>

namespace semisparse {

// Small meshes used by tests, the acceptance suite and `check-operators` demos.

MeshData make_single_triangle();

/// Unit square in z = 0 split along its diagonal.
MeshData make_two_triangle_strip();

/// Regular tetrahedron-like closed surface on 4 vertices, outward oriented.
MeshData make_tetrahedron();

/// Open nx by ny grid of unit-spaced squares in z = 0, each split by a diagonal, facing +z.
MeshData make_grid(int nx, int ny);

/// Surface of the unit cube [0,1]^3 with each face cut into n x n squares and each square
/// split by a diagonal; outward oriented.
MeshData make_cube(int n);

/// Subdivided icosahedron projected onto the unit sphere.
MeshData make_icosphere(int levels);

} // namespace semisparse
