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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <semisparse/io.h>
#include <semisparse/operators.h>
#include <semisparse/primitives.h>
#include <semisparse/self_check.h>
#include <semisparse/solver.h>
#include <semisparse/vertex_update.h>

#include "oracles.h"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace semisparse;

namespace {

using Field = Eigen::MatrixXd;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail)
{
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

TriMesh<double> mesh_of(const MeshData& d) { return build_mesh<double>(d.positions, d.faces); }

struct RegressionCase
{
    std::string name;
    MeshData clean;
    double min_improvement;  // fraction
    double frozen_improvement; // fraction, measured when the defaults were frozen
};

// Cube and icosphere under seeded Gaussian noise of 0.3 mean edge lengths.
std::vector<RegressionCase> regression_cases()
{
    return {
        {"cube", make_cube(16), 0.70, 0.795},
        {"icosphere", make_icosphere(4), 0.50, 0.620},
    };
}

constexpr std::uint64_t k_seed = 42;

struct PipelineRun
{
    TriMesh<double> clean, noisy, output;
    FilterResult<double> filter;
    double sphere_deviation = 0;
    double seconds = 0;
};

PipelineRun run_pipeline(const MeshData& clean_data)
{
    PipelineRun r{mesh_of(clean_data), mesh_of(clean_data), mesh_of(clean_data), {}, 0, 0};
    NoiseSpec spec;
    spec.seed = k_seed;
    r.noisy = add_noise(r.clean, spec);
    const auto start = Clock::now();
    r.filter = solve_normal_filter<double>(r.noisy, face_normals(r.noisy), SolverParams<double>{},
        [&](const SolverState<double>& s) {
            r.sphere_deviation = std::max(r.sphere_deviation, (s.N.rowwise().norm().array() - 1).abs().maxCoeff());
        });
    r.output = r.noisy.with_vertices(update_vertices(r.noisy, r.filter.normals, VertexUpdateParams{}));
    r.seconds = seconds_since(start);
    return r;
}

void adjoint_identities()
{
    const std::vector<std::pair<std::string, MeshData>> meshes = {
        {"triangle", make_single_triangle()},
        {"strip", make_two_triangle_strip()},
        {"grid", make_grid(12, 9)},
        {"cube", make_cube(8)},
        {"icosphere", make_icosphere(3)},
    };
    const auto start = Clock::now();
    double worst = 0;
    for (const auto& [name, d] : meshes) {
        const auto rep = check_operators(mesh_of(d), 100, 7);
        worst = std::max({worst, rep.adjoint_D, rep.adjoint_grad2});
    }
    const double t = seconds_since(start);
    report(1, "adjoint identities", worst <= 1e-10 && t < 5,
        fmt("max relative gap %.3g", worst) + fmt(" over 5 meshes x 100 pairs in %.2f s", t));
}

void exact_zeros()
{
    double worst_kernel = 0, worst_inactive = 0;
    std::size_t inactive = 0;
    for (const auto& d : {make_single_triangle(), make_two_triangle_strip(), make_grid(7, 5), make_cube(4)}) {
        const auto m = mesh_of(d);
        const auto rep = check_operators(m, 20, 3);
        worst_kernel = std::max(worst_kernel, rep.constant_kernel);
        worst_inactive = std::max(worst_inactive, rep.inactive_stencils);
        // constant fields with arbitrary values, not only ones
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g;
        const Eigen::RowVector3d c(g(rng), g(rng), g(rng));
        worst_kernel = std::max(worst_kernel, apply_D(m, Field(c.replicate(m.num_faces(), 1))).cwiseAbs().maxCoeff());
        inactive += static_cast<std::size_t>(3 * m.num_faces() - m.num_active_stencils());
    }
    report(2, "exact zeros", worst_kernel == 0 && worst_inactive == 0 && inactive > 0,
        fmt("max |D const| = %g", worst_kernel) + fmt(", max inactive stencil = %g", worst_inactive) +
            " over " + std::to_string(inactive) + " inactive stencils");
}

void orientation_invariance()
{
    double worst_D = 0, worst_G2 = 0;
    for (const auto& d : {make_grid(9, 7), make_cube(6), make_icosphere(2), make_tetrahedron()}) {
        const auto rep = check_operators(mesh_of(d), 20, 11);
        worst_D = std::max(worst_D, rep.orientation_D);
        worst_G2 = std::max(worst_G2, rep.orientation_grad2);
    }
    report(3, "orientation invariance", worst_D == 0 && worst_G2 == 0,
        fmt("max |D + D_flipped| = %g", worst_D) + fmt(", max |G2 - G2_flipped| = %g", worst_G2));
}

void prox_correctness()
{
    // every edge and stencil of the tetrahedron is interior, so each row is a free instance
    const auto m = mesh_of(make_tetrahedron());
    const Eigen::Index E = m.num_edges(), L = 3 * m.num_faces();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> value(-3, 3), weight(0.01, 2);
    const int n = 10000;

    double soft_gap = 0;
    for (int i = 0; i < n; ++i) {
        SolverParams<double> p;
        p.alpha1 = weight(rng);
        p.rho1 = weight(rng);
        const double a = value(rng);
        const Eigen::Index e = i % E;
        Field dev = Field::Zero(E, 3), lambda = Field::Zero(E, 3);
        dev(e, i % 3) = a;
        const double oracle = oracles::lasso(a, p.alpha1, p.rho1, m.edge_length(e));
        soft_gap = std::max(soft_gap, std::abs(p_subproblem(m, dev, lambda, p)(e, i % 3) - oracle));
    }

    int hard_mismatch = 0;
    for (auto mode : {ThresholdMode::ExactProx, ThresholdMode::Ratio}) {
        for (int i = 0; i < n; ++i) {
            SolverParams<double> p;
            p.threshold_mode = mode;
            p.alpha2 = weight(rng);
            p.rho2 = weight(rng);
            const double x = value(rng);
            const Eigen::Index l = i % L;
            Field g2 = Field::Zero(L, 3), lambda = Field::Zero(L, 3);
            g2(l, i % 3) = x;
            // a threshold T is the exact L0 prox for weight rho2 T^2 / 2
            const double T = p.hard_threshold();
            const double oracle = oracles::l0_prox(x, p.rho2 * T * T / 2, p.rho2);
            if (q_subproblem(m, g2, lambda, p)(l, i % 3) != oracle) ++hard_mismatch;
        }
    }
    report(4, "prox correctness", soft_gap <= 1e-8 && hard_mismatch == 0,
        fmt("soft max gap %.3g", soft_gap) + ", hard mismatches " + std::to_string(hard_mismatch) +
            " of " + std::to_string(2 * n));
}

void sphere_constraint(const std::vector<PipelineRun>& runs)
{
    double worst = 0;
    for (const auto& r : runs) worst = std::max(worst, r.sphere_deviation);
    report(5, "sphere constraint", worst <= 1e-12, fmt("max | |N| - 1 | = %.3g", worst));
}

void fixed_point()
{
    const auto m = mesh_of(make_grid(10, 10));
    const Field N0 = face_normals(m);
    const auto result = solve_normal_filter(m, N0, SolverParams<double>{});
    const double gap = (result.normals - N0).cwiseAbs().maxCoeff();
    const auto iters = result.diagnostics.records.size();
    report(6, "flat fixed point", gap <= 1e-8 && iters <= 5,
        fmt("max deviation %.3g", gap) + " after " + std::to_string(iters) + " iterations");
}

void denoising_regression(const std::vector<RegressionCase>& cases, const std::vector<PipelineRun>& runs)
{
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto before = compute_metrics(runs[i].noisy, runs[i].clean);
        const auto after = compute_metrics(runs[i].output, runs[i].clean);
        const double gain = 1 - after.mean_angular_error_deg / before.mean_angular_error_deg;
        const bool case_ok = gain >= cases[i].min_improvement &&
                             std::abs(gain - cases[i].frozen_improvement) <= 0.02 &&
                             after.vertex_rms <= before.vertex_rms && runs[i].seconds < 60;
        ok = ok && case_ok;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s%s %d faces %.2f->%.2f deg (%.1f%%, frozen %.1f%%), rms %.5f->%.5f, %.1f s",
            i ? "; " : "", cases[i].name.c_str(), static_cast<int>(runs[i].clean.num_faces()),
            before.mean_angular_error_deg, after.mean_angular_error_deg, 100 * gain,
            100 * cases[i].frozen_improvement, before.vertex_rms, after.vertex_rms, runs[i].seconds);
        detail += buf;
    }
    report(7, "denoising regression", ok, detail);
}

std::string mesh_bytes(const TriMesh<double>& m)
{
    std::ostringstream out;
    write_obj(out, m.vertices(), m.faces());
    return out.str();
}

// CSV without the wall-clock column.
std::string diagnostics_numbers(const Diagnostics<double>& d)
{
    Diagnostics<double> copy = d;
    for (auto& r : copy.records) r.seconds = 0;
    std::ostringstream out;
    write_diagnostics_csv(out, copy);
    return out.str();
}

void determinism(const std::vector<RegressionCase>& cases, const std::vector<PipelineRun>& runs)
{
    bool ok = true;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto again = run_pipeline(cases[i].clean);
        ok = ok && mesh_bytes(again.output) == mesh_bytes(runs[i].output) &&
             diagnostics_numbers(again.filter.diagnostics) == diagnostics_numbers(runs[i].filter.diagnostics) &&
             same_numerics(again.filter.diagnostics, runs[i].filter.diagnostics);
    }
    report(8, "determinism", ok, ok ? "output meshes and diagnostics identical across reruns" : "reruns differ");
}

void residuals(const std::vector<RegressionCase>& cases, const std::vector<PipelineRun>& runs, int max_iter)
{
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& rec = runs[i].filter.diagnostics.records;
        auto residual = [&](std::size_t k) { return std::max(rec[k].rel_r_P, rec[k].rel_r_Q); };
        const bool converged = runs[i].filter.diagnostics.converged;
        bool decreasing = static_cast<int>(rec.size()) == max_iter && rec.size() >= 10;
        for (std::size_t k = rec.size() - 9; decreasing && k < rec.size(); ++k) {
            decreasing = residual(k) < residual(k - 1);
        }
        ok = ok && (converged || decreasing);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s%s %zu iterations, final residual %.3g, %s", i ? "; " : "",
            cases[i].name.c_str(), rec.size(), residual(rec.size() - 1),
            converged ? "converged" : decreasing ? "decreasing over last 10" : "not decreasing over last 10");
        detail += buf;
    }
    report(9, "ADMM residuals", ok, detail);
}

} // namespace

int main()
{
    adjoint_identities();
    exact_zeros();
    orientation_invariance();
    prox_correctness();

    const auto cases = regression_cases();
    std::vector<PipelineRun> runs;
    for (const auto& c : cases) runs.push_back(run_pipeline(c.clean));

    sphere_constraint(runs);
    fixed_point();
    denoising_regression(cases, runs);
    determinism(cases, runs);
    residuals(cases, runs, SolverParams<double>{}.max_iter);

    std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
