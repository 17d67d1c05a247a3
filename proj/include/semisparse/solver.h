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
#include <semisparse/operators.h>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace semisparse {

/// Threshold used by the hard-threshold step of the second-order variable.
enum class ThresholdMode {
    Ratio,     ///< alpha2 / rho2
    ExactProx, ///< sqrt(2 alpha2 / rho2), the exact minimizer of the L0 proximal problem
};

template <typename Scalar = double>
struct SolverParams
{
    Scalar beta = 1;       ///< fidelity weight on ||N - N0||^2
    Scalar alpha1 = 0.005; ///< group-L1 weight on the first-order deviation grad N - grad N0
    Scalar alpha2 = 2;     ///< L0 weight on the second-order differences of N
    Scalar rho1 = 1;       ///< penalty on the first-order splitting constraint
    Scalar rho2 = 1;       ///< penalty on the second-order splitting constraint
    /// Both penalties are multiplied by this factor after every iteration, up to
    /// `rho_max`. 1 keeps them fixed.
    Scalar rho_growth = 1;
    Scalar rho_max = 1e6;
    int max_iter = 100;
    Scalar primal_tol = 1e-6;
    ThresholdMode threshold_mode = ThresholdMode::ExactProx;

    void validate() const
    {
        auto require = [](bool ok, const char* what) {
            if (!ok) throw InvalidParameter(what);
        };
        require(std::isfinite(beta) && beta > 0, "beta must be positive");
        require(std::isfinite(alpha1) && alpha1 >= 0, "alpha1 must be non-negative");
        require(std::isfinite(alpha2) && alpha2 >= 0, "alpha2 must be non-negative");
        require(std::isfinite(rho1) && rho1 > 0, "rho1 must be positive");
        require(std::isfinite(rho2) && rho2 > 0, "rho2 must be positive");
        require(std::isfinite(rho_growth) && rho_growth >= 1, "rho_growth must be >= 1");
        require(rho_max >= std::max(rho1, rho2), "rho_max must be >= rho1 and rho2");
        require(max_iter > 0, "max_iter must be positive");
        require(std::isfinite(primal_tol) && primal_tol > 0, "primal_tol must be positive");
    }

    Scalar hard_threshold() const
    {
        return threshold_mode == ThresholdMode::Ratio ? alpha2 / rho2
                                                             : std::sqrt(2 * alpha2 / rho2);
    }
};

template <typename Scalar = double>
struct SolverState
{
    FaceField<Scalar> N;
    EdgeField<Scalar> P;
    StencilField<Scalar> Q;
    EdgeField<Scalar> lambda_P;
    StencilField<Scalar> lambda_Q;
    int iteration = 0;
};

template <typename Scalar = double>
struct IterationRecord
{
    int iter = 0;
    Scalar energy = 0;
    Scalar r_P = 0; ///< ||(grad N - grad N0) - P||_V
    Scalar r_Q = 0; ///< ||grad2 N - Q||_W
    Scalar dN = 0;  ///< ||N_k - N_{k-1}||_U
    double seconds = 0;
    /// Residuals divided by the norm of a unit field on the same space.
    Scalar rel_r_P = 0;
    Scalar rel_r_Q = 0;
    /// max over faces of | ||N_t|| - 1 | after projection.
    Scalar unit_deviation = 0;
    /// ||A N - b|| / ||b|| of the linear solve, before projection.
    Scalar linear_residual = 0;
};

template <typename Scalar = double>
struct Diagnostics
{
    std::vector<IterationRecord<Scalar>> records;
    bool converged = false;
};

/// Everything but the wall-clock column agrees bit for bit.
template <typename Scalar>
bool same_numerics(const Diagnostics<Scalar>& a, const Diagnostics<Scalar>& b)
{
    if (a.records.size() != b.records.size() || a.converged != b.converged) return false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto& x = a.records[i];
        const auto& y = b.records[i];
        if (x.iter != y.iter || x.energy != y.energy || x.r_P != y.r_P || x.r_Q != y.r_Q ||
            x.dN != y.dN || x.unit_deviation != y.unit_deviation ||
            x.linear_residual != y.linear_residual) {
            return false;
        }
    }
    return true;
}

/// CSV with header `iter,energy,r_P,r_Q,dN,seconds`.
void write_diagnostics_csv(std::ostream& out, const Diagnostics<double>& diagnostics);

// ---------------------------------------------------------------------------------------------
// Proximal maps on one group (one row of a field).

/// x * max(0, 1 - threshold / ||x||); zero when ||x|| <= threshold.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 1, Eigen::Dynamic> group_soft_shrink(
    const Eigen::MatrixBase<Derived>& x,
    typename Derived::Scalar threshold)
{
    using Scalar = typename Derived::Scalar;
    const Scalar norm = x.norm();
    if (norm <= threshold) return Eigen::Matrix<Scalar, 1, Eigen::Dynamic>::Zero(x.size());
    return x * (1 - threshold / norm);
}

/// x unchanged when ||x|| > threshold, zero otherwise (ties go to zero).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 1, Eigen::Dynamic> group_hard_threshold(
    const Eigen::MatrixBase<Derived>& x,
    typename Derived::Scalar threshold)
{
    using Scalar = typename Derived::Scalar;
    if (x.norm() <= threshold) return Eigen::Matrix<Scalar, 1, Eigen::Dynamic>::Zero(x.size());
    return x;
}

// ---------------------------------------------------------------------------------------------

///
/// Value of the normal-filter energy
///
///   beta/2 ||N - N0||_U^2 + alpha1 sum_e len(e) ||(DN - DN0)_e|| + alpha2 #{l : (grad2 N)_l != 0}.
///
template <typename Scalar>
Scalar energy(
    const TriMesh<Scalar>& mesh,
    const FaceField<Scalar>& N,
    const FaceField<Scalar>& N0,
    const SolverParams<Scalar>& params)
{
    detail::check_same_shape(N, N0, "energy");
    const FaceField<Scalar> diff = N - N0;
    const Scalar fidelity = inner_U(mesh, diff, diff);

    const EdgeField<Scalar> dd = apply_D(mesh, diff);
    Scalar first_order = 0;
    for (Index e = 0; e < mesh.num_edges(); ++e) first_order += mesh.edge_length(e) * dd.row(e).norm();

    const StencilField<Scalar> g2 = apply_grad2(mesh, N);
    Index nonzero = 0;
    for (Eigen::Index l = 0; l < g2.rows(); ++l) {
        if (!g2.row(l).isZero(0)) ++nonzero;
    }
    return params.beta / 2 * fidelity + params.alpha1 * first_order +
           params.alpha2 * static_cast<Scalar>(nonzero);
}

///
/// Factorized normal equations of the N-subproblem,
///
///   (beta M_U + rho1 D^T M_V D + rho2 G2^T M_W G2) N = rhs,
///
/// shared by every channel and every iteration.
///
template <typename Scalar>
class NormalSystem
{
public:
    using SparseMatrix = Eigen::SparseMatrix<Scalar>;

    NormalSystem(const OperatorBundle<Scalar>& ops, const SolverParams<Scalar>& params)
        : m_ops(ops)
        , m_params(params)
    {
        m_Dt_MV = SparseMatrix(ops.D.transpose()) * ops.mass_V;
        m_G2t_MW = SparseMatrix(ops.G2.transpose()) * ops.mass_W;
        m_first = m_Dt_MV * ops.D;
        m_second = m_G2t_MW * ops.G2;
        assemble();
        m_solver.analyzePattern(m_matrix);
        factorize();
    }

    /// Change the penalties and refactorize (the sparsity pattern is unchanged).
    void set_penalties(Scalar rho1, Scalar rho2)
    {
        m_params.rho1 = rho1;
        m_params.rho2 = rho2;
        assemble();
        factorize();
    }

    const SparseMatrix& matrix() const { return m_matrix; }

    FaceField<Scalar> rhs(
        const SolverState<Scalar>& state,
        const FaceField<Scalar>& N0,
        const EdgeField<Scalar>& DN0) const
    {
        const Scalar rho1 = m_params.rho1, rho2 = m_params.rho2;
        return m_params.beta * (m_ops.mass_U * N0) +
               rho1 * (m_Dt_MV * (DN0 + state.P - state.lambda_P / rho1)) +
               rho2 * (m_G2t_MW * (state.Q - state.lambda_Q / rho2));
    }

    /// Solve without projection; `relative_residual` receives ||A N - b|| / ||b||.
    FaceField<Scalar> solve(const FaceField<Scalar>& b, Scalar* relative_residual = nullptr) const
    {
        FaceField<Scalar> N = m_solver.solve(b);
        if (m_solver.info() != Eigen::Success) {
            throw LinearSolveFailure("back substitution failed");
        }
        const Scalar bnorm = b.norm();
        const Scalar residual = (m_matrix * N - b).norm() / (bnorm > 0 ? bnorm : Scalar(1));
        if (!(residual <= s_tolerance)) {
            throw LinearSolveFailure(
                "relative residual " + std::to_string(static_cast<double>(residual)) +
                " exceeds " + std::to_string(static_cast<double>(s_tolerance)));
        }
        if (relative_residual) *relative_residual = residual;
        return N;
    }

    static constexpr Scalar s_tolerance = Scalar(1e-10);

private:
    void assemble()
    {
        // explicit zeros keep the pattern identical for every penalty value
        m_matrix = m_params.beta * m_ops.mass_U + m_params.rho1 * m_first + m_params.rho2 * m_second;
        m_matrix.makeCompressed();
    }

    void factorize()
    {
        m_solver.factorize(m_matrix);
        if (m_solver.info() != Eigen::Success) {
            throw LinearSolveFailure("factorization of the normal system failed");
        }
    }

    const OperatorBundle<Scalar>& m_ops;
    SolverParams<Scalar> m_params;
    SparseMatrix m_Dt_MV;
    SparseMatrix m_G2t_MW;
    SparseMatrix m_first;
    SparseMatrix m_second;
    SparseMatrix m_matrix;
    Eigen::SimplicialLDLT<SparseMatrix> m_solver;
};

///
/// Rescale every row to unit length. Rows that solved to zero keep the row of `fallback`.
///
/// @return max over rows of | ||N_t|| - 1 | after projection.
///
template <typename Scalar>
Scalar project_to_unit_sphere(FaceField<Scalar>& N, const FaceField<Scalar>& fallback)
{
    Scalar deviation = 0;
    for (Eigen::Index t = 0; t < N.rows(); ++t) {
        const Scalar len = N.row(t).norm();
        if (len > 0) {
            N.row(t) /= len;
        } else {
            N.row(t) = fallback.row(t);
        }
        deviation = std::max(deviation, std::abs(N.row(t).norm() - Scalar(1)));
    }
    return deviation;
}

/// One N-update: solve the normal equations, then project each face normal to unit length.
template <typename Scalar>
FaceField<Scalar> n_subproblem(
    const TriMesh<Scalar>& mesh,
    const OperatorBundle<Scalar>& ops,
    const SolverState<Scalar>& state,
    const FaceField<Scalar>& N0,
    const SolverParams<Scalar>& params)
{
    detail::check_rows(N0, mesh.num_faces(), "n_subproblem");
    const NormalSystem<Scalar> system(ops, params);
    const EdgeField<Scalar> DN0 = ops.D * N0;
    FaceField<Scalar> N = system.solve(system.rhs(state, N0, DN0));
    project_to_unit_sphere(N, state.N);
    return N;
}

/// Group soft shrinkage of (DN - DN0) + lambda_P / rho1 on interior edges.
template <typename Scalar>
EdgeField<Scalar> p_subproblem(
    const TriMesh<Scalar>& mesh,
    const EdgeField<Scalar>& grad_deviation,
    const EdgeField<Scalar>& lambda_P,
    const SolverParams<Scalar>& params)
{
    detail::check_rows(grad_deviation, mesh.num_edges(), "p_subproblem");
    detail::check_same_shape(grad_deviation, lambda_P, "p_subproblem");
    const Scalar threshold = params.alpha1 / params.rho1;
    EdgeField<Scalar> P = EdgeField<Scalar>::Zero(grad_deviation.rows(), grad_deviation.cols());
    for (Index e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.is_boundary_edge(e)) continue;
        P.row(e) = group_soft_shrink(grad_deviation.row(e) + lambda_P.row(e) / params.rho1, threshold);
    }
    return P;
}

template <typename Scalar>
EdgeField<Scalar> p_subproblem(
    const TriMesh<Scalar>& mesh,
    const SolverState<Scalar>& state,
    const FaceField<Scalar>& N0,
    const SolverParams<Scalar>& params)
{
    return p_subproblem(mesh, EdgeField<Scalar>(apply_D(mesh, state.N - N0)), state.lambda_P, params);
}

/// Group hard threshold of grad2 N + lambda_Q / rho2 on active stencils.
template <typename Scalar>
StencilField<Scalar> q_subproblem(
    const TriMesh<Scalar>& mesh,
    const StencilField<Scalar>& grad2_N,
    const StencilField<Scalar>& lambda_Q,
    const SolverParams<Scalar>& params)
{
    detail::check_rows(grad2_N, 3 * mesh.num_faces(), "q_subproblem");
    detail::check_same_shape(grad2_N, lambda_Q, "q_subproblem");
    const Scalar threshold = params.hard_threshold();
    const auto& stencils = mesh.stencils();
    StencilField<Scalar> Q = StencilField<Scalar>::Zero(grad2_N.rows(), grad2_N.cols());
    for (std::size_t l = 0; l < stencils.size(); ++l) {
        if (!stencils[l].active) continue;
        const auto row = static_cast<Eigen::Index>(l);
        Q.row(row) = group_hard_threshold(grad2_N.row(row) + lambda_Q.row(row) / params.rho2, threshold);
    }
    return Q;
}

template <typename Scalar>
StencilField<Scalar> q_subproblem(
    const TriMesh<Scalar>& mesh,
    const SolverState<Scalar>& state,
    const SolverParams<Scalar>& params)
{
    return q_subproblem(mesh, apply_grad2(mesh, state.N), state.lambda_Q, params);
}

/// Dual ascent on both splitting constraints, in place.
template <typename Scalar>
void update_multipliers(
    const TriMesh<Scalar>& mesh,
    SolverState<Scalar>& state,
    const FaceField<Scalar>& N0,
    const SolverParams<Scalar>& params)
{
    const EdgeField<Scalar> grad_deviation = apply_D(mesh, state.N - N0);
    state.lambda_P += params.rho1 * (grad_deviation - state.P);
    state.lambda_Q += params.rho2 * (apply_grad2(mesh, state.N) - state.Q);
}

template <typename Scalar>
SolverState<Scalar> initial_state(const TriMesh<Scalar>& mesh, const FaceField<Scalar>& N0)
{
    SolverState<Scalar> state;
    state.N = N0;
    state.P = EdgeField<Scalar>::Zero(mesh.num_edges(), N0.cols());
    state.Q = apply_grad2(mesh, N0);
    state.lambda_P = EdgeField<Scalar>::Zero(mesh.num_edges(), N0.cols());
    state.lambda_Q = StencilField<Scalar>::Zero(3 * mesh.num_faces(), N0.cols());
    return state;
}

template <typename Scalar>
struct FilterResult
{
    FaceField<Scalar> normals;
    Diagnostics<Scalar> diagnostics;
};

///
/// Filter a unit normal field with the semi-sparse energy by ADMM.
///
/// Iterates N -> P -> Q -> multipliers from N = N0, P = 0, Q = grad2 N0, zero multipliers,
/// and stops once both primal residuals, divided by the norm of a unit field on their space,
/// drop to `primal_tol`, or after `max_iter` iterations.
///
/// @throws LinearSolveFailure, NonFinite, InvalidParameter, SizeMismatch.
///
template <typename Scalar>
FilterResult<Scalar> solve_normal_filter(
    const TriMesh<Scalar>& mesh,
    const FaceField<Scalar>& N0,
    const SolverParams<Scalar>& params,
    const std::function<void(const SolverState<Scalar>&)>& on_iteration = {})
{
    params.validate();
    detail::check_rows(N0, mesh.num_faces(), "solve_normal_filter");
    if (!N0.allFinite()) throw NonFinite("input normal field");

    const auto start = std::chrono::steady_clock::now();
    const OperatorBundle<Scalar> ops = assemble_sparse_operators(mesh);
    NormalSystem<Scalar> system(ops, params);
    SolverParams<Scalar> current = params;
    const EdgeField<Scalar> DN0 = ops.D * N0;

    const Scalar unit_V = std::sqrt(mesh.edge_lengths().sum());
    const Scalar unit_W = std::sqrt(3 * mesh.total_area());

    FilterResult<Scalar> result;
    SolverState<Scalar> state = initial_state(mesh, N0);

    for (int k = 1; k <= params.max_iter; ++k) {
        IterationRecord<Scalar> rec;
        rec.iter = k;

        FaceField<Scalar> N = system.solve(system.rhs(state, N0, DN0), &rec.linear_residual);
        rec.unit_deviation = project_to_unit_sphere(N, state.N);
        if (!N.allFinite()) throw NonFinite("normal field at iteration " + std::to_string(k));
        rec.dN = norm_U(mesh, FaceField<Scalar>(N - state.N));
        state.N = std::move(N);

        const EdgeField<Scalar> grad_deviation = ops.D * state.N - DN0;
        const StencilField<Scalar> grad2_N = ops.G2 * state.N;
        state.P = p_subproblem(mesh, grad_deviation, state.lambda_P, current);
        state.Q = q_subproblem(mesh, grad2_N, state.lambda_Q, current);

        const EdgeField<Scalar> res_P = grad_deviation - state.P;
        const StencilField<Scalar> res_Q = grad2_N - state.Q;
        state.lambda_P += current.rho1 * res_P;
        state.lambda_Q += current.rho2 * res_Q;
        if (!state.lambda_P.allFinite() || !state.lambda_Q.allFinite()) {
            throw NonFinite("multipliers at iteration " + std::to_string(k));
        }
        state.iteration = k;

        rec.r_P = norm_V(mesh, res_P);
        rec.r_Q = norm_W(mesh, res_Q);
        rec.rel_r_P = unit_V > 0 ? rec.r_P / unit_V : Scalar(0);
        rec.rel_r_Q = unit_W > 0 ? rec.r_Q / unit_W : Scalar(0);
        rec.energy = energy(mesh, state.N, N0, params);
        rec.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.diagnostics.records.push_back(rec);
        if (on_iteration) on_iteration(state);

        if (std::max(rec.rel_r_P, rec.rel_r_Q) <= params.primal_tol) {
            result.diagnostics.converged = true;
            break;
        }
        if (params.rho_growth > 1 && (current.rho1 < params.rho_max || current.rho2 < params.rho_max)) {
            current.rho1 = std::min(current.rho1 * params.rho_growth, params.rho_max);
            current.rho2 = std::min(current.rho2 * params.rho_growth, params.rho_max);
            system.set_penalties(current.rho1, current.rho2);
        }
    }
    result.normals = std::move(state.N);
    return result;
}

} // namespace semisparse
