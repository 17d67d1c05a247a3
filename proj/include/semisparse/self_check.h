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
#include <string>
#include <utility>
#include <vector>

namespace semisparse {

///
/// Numerical self-test of the discrete operators on one mesh: adjoint identities on random
/// fields, exact zeros where the operators must vanish, independence from the edge orientation,
/// and agreement between the sparse matrices and the matrix-free kernels.
///
struct OperatorCheckReport
{
    double adjoint_D = 0;           ///< max relative |(Du,v)_V - (u,D*v)_U|
    double adjoint_grad2 = 0;       ///< max relative |(G2 u,w)_W - (u,G2* w)_U|
    double constant_kernel = 0;     ///< max |D 1|
    double inactive_stencils = 0;   ///< max |G2 u| over inactive stencils
    double orientation_D = 0;       ///< max |D_low u + D_high u|
    double orientation_grad2 = 0;   ///< max |G2_low u - G2_high u|
    double matrix_free = 0;         ///< max relative gap between sparse and matrix-free products
    int trials = 0;

    /// (name, value) pairs in print order.
    std::vector<std::pair<std::string, double>> entries() const;

    /// The exactness checks must be 0; the rest must not exceed `tolerance`.
    bool passed(double tolerance) const;
};

OperatorCheckReport check_operators(const TriMesh<double>& mesh, int trials = 20, std::uint64_t seed = 1);

} // namespace semisparse
