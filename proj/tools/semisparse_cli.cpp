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
#include <semisparse/errors.h>
#include <semisparse/io.h>
#include <semisparse/self_check.h>
#include <semisparse/solver.h>
#include <semisparse/vertex_update.h>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace semisparse;

constexpr int k_exit_ok = 0;
constexpr int k_exit_usage = 1;
constexpr int k_exit_data = 2;
constexpr int k_exit_numerical = 3;

struct Config
{
    std::string input;
    std::string output;
    std::string reference;
    std::string diagnostics;
    std::string threshold_mode = "prox";
    std::string noise_direction = to_string(NoiseDirection::RandomUnit);
    bool triangulate = false;
    int check_trials = 20;
    double check_tolerance = 1e-10;
    SolverParams<double> solver;
    VertexUpdateParams vertex;
    NoiseSpec noise;
};

ReadOptions read_options(const Config& c)
{
    ReadOptions o;
    o.triangulate = c.triangulate;
    return o;
}

int run_denoise(Config& c)
{
    c.solver.threshold_mode = c.threshold_mode == "ratio" ? ThresholdMode::Ratio : ThresholdMode::ExactProx;
    c.solver.validate();
    c.vertex.validate();
    const auto mesh = read_mesh(c.input, read_options(c));
    const FaceField<double> N0 = face_normals(mesh);
    const auto result = solve_normal_filter(mesh, N0, c.solver);
    const auto positions = update_vertices(mesh, result.normals, c.vertex);
    write_mesh(c.output, positions, mesh.faces());

    if (!c.diagnostics.empty()) {
        std::ofstream out(c.diagnostics, std::ios::binary);
        if (!out) throw IoError("cannot write " + c.diagnostics);
        write_diagnostics_csv(out, result.diagnostics);
    }
    const auto& last = result.diagnostics.records.back();
    std::cerr << "iterations " << last.iter << (result.diagnostics.converged ? " (converged)" : "")
              << ", residuals " << format_double(last.rel_r_P) << " " << format_double(last.rel_r_Q) << "\n";
    return k_exit_ok;
}

int run_add_noise(Config& c)
{
    c.noise.direction = parse_noise_direction(c.noise_direction);
    const auto mesh = read_mesh(c.input, read_options(c));
    const auto noisy = add_noise(mesh, c.noise);
    write_mesh(c.output, noisy);
    write_noise_meta(c.output + ".meta", c.noise, c.input, mean_edge_length(mesh));
    return k_exit_ok;
}

int run_metrics(const Config& c)
{
    const auto mesh = read_mesh(c.input, read_options(c));
    const auto reference = read_mesh(c.reference, read_options(c));
    const auto r = compute_metrics(mesh, reference);
    std::cout << "mean_angular_error_deg=" << format_double(r.mean_angular_error_deg) << "\n"
              << "max_angular_error_deg=" << format_double(r.max_angular_error_deg) << "\n"
              << "vertex_rms=" << format_double(r.vertex_rms) << "\n"
              << "face_count=" << r.face_count << "\n"
              << "vertex_count=" << r.vertex_count << "\n";
    return k_exit_ok;
}

int run_check_operators(const Config& c)
{
    const auto mesh = read_mesh(c.input, read_options(c));
    const auto report = check_operators(mesh, c.check_trials);
    for (const auto& [name, value] : report.entries()) {
        std::cout << name << "=" << format_double(value) << "\n";
    }
    const bool ok = report.passed(c.check_tolerance);
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? k_exit_ok : k_exit_numerical;
}

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Usage: return k_exit_usage;
    case ErrorKind::Data: return k_exit_data;
    case ErrorKind::Numerical: return k_exit_numerical;
    }
    return k_exit_data;
}

} // namespace

int main(int argc, char** argv)
{
    Config c;
    CLI::App app{"Feature-preserving triangle mesh denoising by sparse second-order normal filtering."};
    app.set_config("--config", "", "key=value file supplying any option; command-line flags win");
    app.require_subcommand(1);

    auto* denoise = app.add_subcommand("denoise", "Filter face normals, then move vertices to match them");
    auto* noise = app.add_subcommand("add-noise", "Displace vertices with seeded Gaussian noise");
    auto* metrics = app.add_subcommand("metrics", "Compare a mesh against a reference with the same connectivity");
    auto* check = app.add_subcommand("check-operators", "Self-test the discrete operators on a mesh");
    for (auto* sub : {denoise, noise, metrics, check}) sub->fallthrough();

    app.add_option("-i,--input", c.input, "Input mesh (.obj or .off)");
    app.add_option("-o,--output", c.output, "Output mesh (.obj or .off)");
    app.add_flag("--triangulate", c.triangulate, "Fan-triangulate polygons instead of rejecting them");

    const std::string solver_group = "Normal filter";
    app.add_option("--beta", c.solver.beta,
           "Fidelity weight: quadratic pull of the filtered normals toward the input face normals")
        ->capture_default_str()->group(solver_group);
    app.add_option("--alpha1", c.solver.alpha1,
           "Edge-length-weighted L1 weight on the change of the normal jumps across edges (first order)")
        ->capture_default_str()->group(solver_group);
    app.add_option("--alpha2", c.solver.alpha2,
           "L0 weight: cost per line stencil whose second difference of normals is nonzero (second order)")
        ->capture_default_str()->group(solver_group);
    app.add_option("--rho1", c.solver.rho1,
           "Penalty of the splitting constraint tying the edge variable to the first-order jumps")
        ->capture_default_str()->group(solver_group);
    app.add_option("--rho2", c.solver.rho2,
           "Penalty of the splitting constraint tying the stencil variable to the second differences")
        ->capture_default_str()->group(solver_group);
    app.add_option("--rho-growth", c.solver.rho_growth, "Factor applied to both penalties after each iteration")
        ->capture_default_str()->group(solver_group);
    app.add_option("--rho-max", c.solver.rho_max, "Upper bound for the penalties when they grow")
        ->capture_default_str()->group(solver_group);
    app.add_option("--max-iter", c.solver.max_iter, "Iteration limit")->capture_default_str()->group(solver_group);
    app.add_option("--primal-tol", c.solver.primal_tol, "Stop when both normalized constraint residuals fall below this")
        ->capture_default_str()->group(solver_group);
    app.add_option("--threshold-mode", c.threshold_mode,
           "Hard threshold on stencil groups: prox = sqrt(2 alpha2/rho2), ratio = alpha2/rho2")
        ->check(CLI::IsMember({"prox", "ratio"}))->capture_default_str()->group(solver_group);
    app.add_option("--diagnostics", c.diagnostics, "Write per-iteration CSV (iter,energy,r_P,r_Q,dN,seconds)")
        ->group(solver_group);

    const std::string vertex_group = "Vertex update";
    app.add_option("--vertex-iterations", c.vertex.iterations, "Sweeps of the vertex update")
        ->capture_default_str()->group(vertex_group);
    app.add_option("--vertex-step", c.vertex.step, "Step size of each sweep, in (0, 1]")
        ->capture_default_str()->group(vertex_group);

    const std::string noise_group = "Noise";
    app.add_option("--sigma-rel", c.noise.sigma_rel, "Noise standard deviation in units of the mean edge length")
        ->capture_default_str()->group(noise_group);
    app.add_option("--seed", c.noise.seed, "Random seed")->capture_default_str()->group(noise_group);
    app.add_option("--direction", c.noise_direction, "Displacement direction: random-unit or vertex-normal")
        ->check(CLI::IsMember({to_string(NoiseDirection::RandomUnit), to_string(NoiseDirection::VertexNormal)}))
        ->capture_default_str()->group(noise_group);

    const std::string metric_group = "Metrics and checks";
    app.add_option("--reference", c.reference, "Reference mesh for metrics")->group(metric_group);
    app.add_option("--trials", c.check_trials, "Random field pairs per check")
        ->capture_default_str()->group(metric_group);
    app.add_option("--tolerance", c.check_tolerance, "Largest accepted relative residual")
        ->capture_default_str()->group(metric_group);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? k_exit_ok : k_exit_usage;
    }

    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw InvalidParameter(what);
    };
    try {
        require(!c.input.empty(), "--input is required");
        if (*denoise) {
            require(!c.output.empty(), "--output is required");
            return run_denoise(c);
        }
        if (*noise) {
            require(!c.output.empty(), "--output is required");
            return run_add_noise(c);
        }
        if (*metrics) {
            require(!c.reference.empty(), "--reference is required");
            return run_metrics(c);
        }
        return run_check_operators(c);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return k_exit_data;
    }
}
