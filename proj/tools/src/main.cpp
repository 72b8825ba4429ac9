// mspm: spectral kernel regression and random-field inference on
// triangulated surfaces. Subcommands chain into a pipeline:
//
//   eigen      build a Laplace-Beltrami eigenbasis for a mesh
//   smooth     kernel-regress a per-vertex field against a basis
//   spm        group analysis: T/F map + family-wise corrected p-value
//   power      closed-form detection-power curve over subject counts
//   gibbs-demo step-function overshoot, least-squares vs heat kernel
//   sweep      Monte Carlo type-I error across smoothing bandwidths
//   replay     re-run a recorded manifest and reproduce its outputs
//
// Every subcommand writes manifest.json next to its outputs; `replay`
// re-executes such a manifest after checking the input hashes still match.
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

#include "cli_support.hpp"

#include "mspm/error.hpp"
#include "mspm/fem.hpp"
#include "mspm/field.hpp"
#include "mspm/kernel.hpp"
#include "mspm/mesh.hpp"
#include "mspm/mesh_io.hpp"
#include "mspm/rft.hpp"
#include "mspm/rng.hpp"
#include "mspm/spectral.hpp"
#include "mspm/stats.hpp"
#include "mspm/synthetic.hpp"
#include "mspm/version.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mspm;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

int run_cli(const std::vector<std::string>& args);

// --- shared loaders -------------------------------------------------------

SpectralBasis load_basis_for(const TriangleMesh& mesh, const fs::path& path) {
    SpectralBasis basis = load_basis(path);
    if (basis.n() != static_cast<Eigen::Index>(mesh.vertex_count())) {
        throw ArgumentError("basis " + path.string() + " has " +
                            std::to_string(basis.n()) + " vertices but the mesh has " +
                            std::to_string(mesh.vertex_count()));
    }
    return basis;
}

ScalarField load_field_for(const TriangleMesh& mesh, const fs::path& path) {
    ScalarField field = read_field_csv(path);
    if (field.values.size() != static_cast<Eigen::Index>(mesh.vertex_count())) {
        throw ArgumentError("field " + path.string() + " has " +
                            std::to_string(field.values.size()) +
                            " values but the mesh has " +
                            std::to_string(mesh.vertex_count()) + " vertices");
    }
    return field;
}

// --- eigen ----------------------------------------------------------------

struct EigenArgs {
    std::string mesh;
    long k = 500;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_eigen(const EigenArgs& a) {
    const fs::path out = cli::ensure_out_dir(a.out);
    const TriangleMesh mesh = read_mesh(a.mesh);
    const FemMatrices fem = assemble_cotan(mesh);
    SolveOptions options;
    if (a.seed != 0) options.seed = a.seed;
    const SpectralBasis basis =
        solve_eigen(fem, static_cast<Eigen::Index>(a.k), a.tol, options);

    save_basis(out / "basis.bin", basis);
    cli::write_eigenvalue_csv(out / "eigenvalues.csv", basis.eigenvalues);

    cli::RunManifest manifest;
    manifest.subcommand = "eigen";
    manifest.flags = {{"--mesh", {a.mesh}},
                      {"--k", {std::to_string(a.k)}},
                      {"--tol", {cli::format_double(a.tol)}},
                      {"--seed", {std::to_string(a.seed)}},
                      {"--out", {a.out}}};
    manifest.input_hashes[a.mesh] = cli::hash_file(a.mesh);
    manifest.seed = a.seed;
    cli::write_manifest(out, manifest);

    std::cout << "wrote " << (out / "basis.bin").string() << " (" << basis.k()
              << " modes, " << basis.n() << " vertices)\n";
    return 0;
}

// --- smooth ---------------------------------------------------------------

struct SmoothArgs {
    std::string mesh;
    std::string basis;
    std::string field;
    std::string kernel = "heat";
    double t = 5.0;
    long k = 0;  // 0 = full basis
    std::string out;
};

int cmd_smooth(const SmoothArgs& a) {
    const fs::path out = cli::ensure_out_dir(a.out);
    const TriangleMesh mesh = read_mesh(a.mesh);
    const SpectralBasis basis = load_basis_for(mesh, a.basis);
    const ScalarField field = load_field_for(mesh, a.field);

    KernelSpec spec = [&] {
        if (a.kernel == "heat") return KernelSpec::heat(a.t);
        if (a.kernel == "lse") return KernelSpec::identity();
        throw ArgumentError("unknown kernel '" + a.kernel + "' (expected heat or lse)");
    }();
    spec = spec.truncated(static_cast<Eigen::Index>(a.k));

    ScalarField smoothed = regress(field, basis, spec);
    smoothed.name = "smoothed";
    write_field_csv(out / "smoothed.csv", smoothed);
    write_vtk(out / "smoothed.vtk", mesh, smoothed);

    cli::RunManifest manifest;
    manifest.subcommand = "smooth";
    manifest.flags = {{"--mesh", {a.mesh}},   {"--basis", {a.basis}},
                      {"--field", {a.field}}, {"--kernel", {a.kernel}},
                      {"--t", {cli::format_double(a.t)}}, {"--k", {std::to_string(a.k)}},
                      {"--out", {a.out}}};
    for (const auto& input : {a.mesh, a.basis, a.field}) {
        manifest.input_hashes[input] = cli::hash_file(input);
    }
    cli::write_manifest(out, manifest);

    std::cout << "wrote " << (out / "smoothed.csv").string() << "\n";
    return 0;
}

// --- spm ------------------------------------------------------------------

struct SpmArgs {
    std::string mesh;
    std::string basis;
    std::vector<std::string> group_a;
    std::vector<std::string> group_b;
    double t = 5.0;
    double alpha = 0.1;
    std::string out;
};

int cmd_spm(const SpmArgs& a) {
    const fs::path out = cli::ensure_out_dir(a.out);
    const TriangleMesh mesh = read_mesh(a.mesh);
    const SpectralBasis basis = load_basis_for(mesh, a.basis);
    const Minkowski mink = minkowski_functionals(mesh);

    Cohort cohort;
    for (const auto& path : a.group_a) {
        cohort.fields.push_back(load_field_for(mesh, path));
        cohort.group.push_back(0);
    }
    for (const auto& path : a.group_b) {
        cohort.fields.push_back(load_field_for(mesh, path));
        cohort.group.push_back(1);
    }
    if (a.group_b.empty()) cohort.group.clear();  // one-sample design

    const StatReport report = analyze_cohort(cohort, basis, mink, a.t);

    ScalarField map = report.stat_map;
    map.name = report.statistic_kind == "T" ? "t_stat" : "f_stat";
    write_field_csv(out / "statmap.csv", map);
    write_vtk(out / "statmap.vtk", mesh, map);
    {
        std::ofstream json(out / "report.json", std::ios::binary);
        json << to_json(report);
    }

    // Family-wise decision at the requested level. The threshold the
    // maximum must clear is informational only: with very small
    // denominator df the EC expansion's tail never falls to alpha and no
    // finite threshold exists, but the p-value decision still stands.
    // The F threshold is the squared two-sided T threshold (numerator df 1).
    const bool reject = report.corrected_p <= a.alpha;
    std::string threshold_text = "unattainable";
    try {
        double threshold = 0.0;
        if (report.statistic_kind == "T") {
            threshold = alpha_quantile(a.alpha, mink, report.dof_den, a.t);
        } else {
            const double z = alpha_quantile(a.alpha / 2.0, mink, report.dof_den, a.t);
            threshold = z * z;
        }
        threshold_text = cli::format_double(threshold);
    } catch (const ArgumentError&) {
    }
    std::cout << "max " << report.statistic_kind << " = " << report.max_stat
              << " at vertex " << report.max_vertex
              << ", corrected p = " << report.corrected_p << ", alpha=" << a.alpha
              << " threshold = " << threshold_text << " -> "
              << (reject ? "reject" : "retain") << "\n";

    cli::RunManifest manifest;
    manifest.subcommand = "spm";
    manifest.flags = {{"--mesh", {a.mesh}},
                      {"--basis", {a.basis}},
                      {"--group-a", a.group_a},
                      {"--t", {cli::format_double(a.t)}},
                      {"--alpha", {cli::format_double(a.alpha)}},
                      {"--out", {a.out}}};
    if (!a.group_b.empty()) manifest.flags["--group-b"] = a.group_b;
    manifest.input_hashes[a.mesh] = cli::hash_file(a.mesh);
    manifest.input_hashes[a.basis] = cli::hash_file(a.basis);
    for (const auto& path : a.group_a) manifest.input_hashes[path] = cli::hash_file(path);
    for (const auto& path : a.group_b) manifest.input_hashes[path] = cli::hash_file(path);
    cli::write_manifest(out, manifest);
    return 0;
}

// --- power ----------------------------------------------------------------

struct PowerArgs {
    std::string mink_template;
    std::string mink_signal;
    double c = 0.5;
    std::string n_range = "5:40";
    double alpha = 0.1;
    double t = 5.0;
    double dof = 0.0;  // 0 = use n - 1 at each point
    std::string out;
};

int cmd_power(const PowerArgs& a) {
    const fs::path out = cli::ensure_out_dir(a.out);
    const auto [m0, m1, m2] = cli::parse_triple(a.mink_template);
    const auto [s0, s1, s2] = cli::parse_triple(a.mink_signal);
    const Minkowski search{m0, m1, m2};
    const Minkowski signal{s0, s1, s2};

    std::vector<std::vector<double>> rows;
    for (const long n : cli::parse_range(a.n_range)) {
        const double dof = a.dof > 0.0 ? a.dof : static_cast<double>(n - 1);
        rows.push_back({static_cast<double>(n),
                        power(static_cast<Eigen::Index>(n), a.c, search, signal, dof,
                              a.t, a.alpha)});
    }
    cli::write_curve_csv(out / "power.csv", "n,power", rows);

    cli::RunManifest manifest;
    manifest.subcommand = "power";
    manifest.flags = {{"--minkowski-template", {a.mink_template}},
                      {"--minkowski-signal", {a.mink_signal}},
                      {"--c", {cli::format_double(a.c)}},
                      {"--n-range", {a.n_range}},
                      {"--alpha", {cli::format_double(a.alpha)}},
                      {"--t", {cli::format_double(a.t)}},
                      {"--dof", {cli::format_double(a.dof)}},
                      {"--out", {a.out}}};
    cli::write_manifest(out, manifest);

    std::cout << "wrote " << (out / "power.csv").string() << " (" << rows.size()
              << " points)\n";
    return 0;
}

// --- gibbs-demo -------------------------------------------------------------

struct GibbsArgs {
    long resolution = 24;
    double t = 1e-4;
    long k = 0;  // 0 = min(7225, n - 1)
    double tol = 1e-8;
    std::string out;
};

int cmd_gibbs_demo(const GibbsArgs& a) {
    const fs::path out = cli::ensure_out_dir(a.out);
    if (a.resolution < 8) throw ArgumentError("--resolution must be at least 8");

    HatSurfaceSpec hat;
    hat.radial_resolution = static_cast<std::int32_t>(a.resolution);
    hat.angular_resolution = static_cast<std::int32_t>(2 * a.resolution);
    auto [mesh, field] = hat_surface(hat);
    const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
    const Eigen::Index k =
        a.k > 0 ? static_cast<Eigen::Index>(a.k) : std::min<Eigen::Index>(7225, n - 1);

    const FemMatrices fem = assemble_cotan(mesh);
    const SpectralBasis basis = solve_eigen(fem, k, a.tol);

    const KernelSpec lse = KernelSpec::identity().truncated(k);
    const KernelSpec heat = KernelSpec::heat(a.t).truncated(k);
    ScalarField lse_fit = regress(field, basis, lse);
    ScalarField heat_fit = regress(field, basis, heat);
    lse_fit.name = "lse";
    heat_fit.name = "heat";

    // The step's true maximum is 1, so anything above it is ringing.
    const double lse_over = std::max(0.0, lse_fit.values.maxCoeff() - 1.0);
    const double heat_over = std::max(0.0, heat_fit.values.maxCoeff() - 1.0);

    write_field_csv(out / "lse.csv", lse_fit);
    write_field_csv(out / "heat.csv", heat_fit);
    write_vtk(out / "lse.vtk", mesh, lse_fit);
    write_vtk(out / "heat.vtk", mesh, heat_fit);
    {
        std::ofstream json(out / "report.json", std::ios::binary);
        json << "{\n"
             << "  \"vertices\": " << n << ",\n"
             << "  \"modes\": " << k << ",\n"
             << "  \"bandwidth_t\": " << a.t << ",\n"
             << "  \"lse_overshoot\": " << lse_over << ",\n"
             << "  \"heat_overshoot\": " << heat_over << "\n"
             << "}\n";
    }

    cli::RunManifest manifest;
    manifest.subcommand = "gibbs-demo";
    manifest.flags = {{"--resolution", {std::to_string(a.resolution)}},
                      {"--t", {cli::format_double(a.t)}},
                      {"--k", {std::to_string(a.k)}},
                      {"--tol", {cli::format_double(a.tol)}},
                      {"--out", {a.out}}};
    cli::write_manifest(out, manifest);

    std::cout << "lse overshoot = " << lse_over << ", heat(t=" << a.t
              << ") overshoot = " << heat_over << "\n";
    return 0;
}

// --- synth ------------------------------------------------------------------

struct SynthArgs {
    std::string surface = "sphere";
    long level = 3;
    long radial = 16;
    long angular = 32;
    double scale = 1.0;
    double noise_sigma = 1.0;
    long noise_count = 0;
    std::uint64_t seed = 2026;
    std::string out;
};

int cmd_synth(const SynthArgs& a) {
    const fs::path out = cli::ensure_out_dir(a.out);

    TriangleMesh mesh;
    if (a.surface == "sphere") {
        mesh = unit_sphere(static_cast<std::int32_t>(a.level));
    } else if (a.surface == "hat") {
        HatSurfaceSpec hat;
        hat.radial_resolution = static_cast<std::int32_t>(a.radial);
        hat.angular_resolution = static_cast<std::int32_t>(a.angular);
        auto [hat_mesh, field] = hat_surface(hat);
        mesh = std::move(hat_mesh);
        write_field_csv(out / "field.csv", field);
    } else {
        throw ArgumentError("unknown surface '" + a.surface + "' (expected sphere or hat)");
    }
    if (a.scale != 1.0) mesh = scale_mesh(mesh, a.scale);
    write_off(out / "mesh.off", mesh);

    // Optional i.i.d. noise subjects for downstream group analyses.
    for (long i = 0; i < a.noise_count; ++i) {
        ScalarField noise = gaussian_noise_field(
            mesh, a.noise_sigma, mix_seed(a.seed, static_cast<std::uint64_t>(i)));
        char name[32];
        std::snprintf(name, sizeof name, "noise_%03ld.csv", i);
        write_field_csv(out / name, noise);
    }

    cli::RunManifest manifest;
    manifest.subcommand = "synth";
    manifest.flags = {{"--surface", {a.surface}},
                      {"--level", {std::to_string(a.level)}},
                      {"--radial", {std::to_string(a.radial)}},
                      {"--angular", {std::to_string(a.angular)}},
                      {"--scale", {cli::format_double(a.scale)}},
                      {"--noise-sigma", {cli::format_double(a.noise_sigma)}},
                      {"--noise-count", {std::to_string(a.noise_count)}},
                      {"--seed", {std::to_string(a.seed)}},
                      {"--out", {a.out}}};
    manifest.seed = a.seed;
    cli::write_manifest(out, manifest);

    std::cout << "wrote " << (out / "mesh.off").string() << " ("
              << mesh.vertex_count() << " vertices, " << mesh.face_count()
              << " faces)\n";
    return 0;
}

// --- sweep ------------------------------------------------------------------

struct SweepArgs {
    std::string mesh;
    std::string basis;
    std::vector<double> bandwidths;
    long subjects = 20;
    long replicates = 50;
    double sigma = 1.0;
    double alpha = 0.1;
    std::uint64_t seed = 2026;
    std::string out;
};

int cmd_sweep(const SweepArgs& a) {
    const fs::path out = cli::ensure_out_dir(a.out);
    if (a.subjects < 2) throw ArgumentError("--subjects must be at least 2");
    if (a.replicates < 1) throw ArgumentError("--replicates must be at least 1");
    const TriangleMesh mesh = read_mesh(a.mesh);
    const SpectralBasis basis = load_basis_for(mesh, a.basis);
    const Minkowski mink = minkowski_functionals(mesh);

    // Null cohorts: i.i.d. noise subjects, seeded per (replicate, subject).
    std::vector<double> p_sum(a.bandwidths.size(), 0.0);
    std::vector<double> reject_sum(a.bandwidths.size(), 0.0);
    for (long rep = 0; rep < a.replicates; ++rep) {
        Cohort cohort;
        for (long subject = 0; subject < a.subjects; ++subject) {
            const std::uint64_t seed = mix_seed(a.seed, static_cast<std::uint64_t>(rep),
                                                static_cast<std::uint64_t>(subject));
            cohort.fields.push_back(gaussian_noise_field(mesh, a.sigma, seed));
        }
        const auto points = type1_sweep(cohort, basis, mink, a.bandwidths, a.alpha);
        for (std::size_t i = 0; i < points.size(); ++i) {
            p_sum[i] += points[i].corrected_p;
            reject_sum[i] += points[i].reject ? 1.0 : 0.0;
        }
    }

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < a.bandwidths.size(); ++i) {
        rows.push_back({a.bandwidths[i], p_sum[i] / static_cast<double>(a.replicates),
                        reject_sum[i] / static_cast<double>(a.replicates)});
    }
    cli::write_curve_csv(out / "sweep.csv", "bandwidth,mean_corrected_p,rejection_rate",
                         rows);

    cli::RunManifest manifest;
    manifest.subcommand = "sweep";
    std::vector<std::string> bandwidth_text;
    for (const double t : a.bandwidths) bandwidth_text.push_back(cli::format_double(t));
    manifest.flags = {{"--mesh", {a.mesh}},
                      {"--basis", {a.basis}},
                      {"--bandwidths", bandwidth_text},
                      {"--subjects", {std::to_string(a.subjects)}},
                      {"--replicates", {std::to_string(a.replicates)}},
                      {"--sigma", {cli::format_double(a.sigma)}},
                      {"--alpha", {cli::format_double(a.alpha)}},
                      {"--seed", {std::to_string(a.seed)}},
                      {"--out", {a.out}}};
    manifest.input_hashes[a.mesh] = cli::hash_file(a.mesh);
    manifest.input_hashes[a.basis] = cli::hash_file(a.basis);
    manifest.seed = a.seed;
    cli::write_manifest(out, manifest);

    std::cout << "wrote " << (out / "sweep.csv").string() << " (" << rows.size()
              << " bandwidths x " << a.replicates << " replicates)\n";
    return 0;
}

// --- replay -----------------------------------------------------------------

struct ReplayArgs {
    std::string manifest;
    std::string out;  // optional override for the recorded --out
};

int cmd_replay(const ReplayArgs& a) {
    cli::RunManifest manifest = cli::read_manifest(a.manifest);
    if (manifest.subcommand == "replay") {
        throw ArgumentError("refusing to replay a replay manifest");
    }
    for (const auto& [path, recorded] : manifest.input_hashes) {
        const std::string current = cli::hash_file(path);
        if (current != recorded) {
            throw ParseError("input " + path + " changed since the recorded run (" +
                             recorded + " -> " + current + ")");
        }
    }
    if (!a.out.empty()) manifest.flags["--out"] = {a.out};

    std::vector<std::string> args{manifest.subcommand};
    for (const auto& [flag, values] : manifest.flags) {
        for (const auto& value : values) {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return run_cli(args);
}

// --- driver -----------------------------------------------------------------

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"spectral kernel regression and random-field inference on meshes"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    EigenArgs eigen_args;
    auto* eigen_cmd = app.add_subcommand("eigen", "build a Laplace-Beltrami eigenbasis");
    eigen_cmd->add_option("--mesh", eigen_args.mesh, "input mesh (.off/.ply)")->required();
    eigen_cmd->add_option("--k", eigen_args.k, "number of eigenpairs")->capture_default_str();
    eigen_cmd->add_option("--tol", eigen_args.tol, "relative residual tolerance")
        ->capture_default_str();
    eigen_cmd->add_option("--seed", eigen_args.seed, "solver start-vector seed (0 = default)")
        ->capture_default_str();
    eigen_cmd->add_option("--out", eigen_args.out, "output directory")->required();

    SmoothArgs smooth_args;
    auto* smooth_cmd = app.add_subcommand("smooth", "kernel-regress a field");
    smooth_cmd->add_option("--mesh", smooth_args.mesh, "input mesh")->required();
    smooth_cmd->add_option("--basis", smooth_args.basis, "basis.bin from eigen")->required();
    smooth_cmd->add_option("--field", smooth_args.field, "field CSV")->required();
    smooth_cmd->add_option("--kernel", smooth_args.kernel, "heat or lse")
        ->capture_default_str();
    smooth_cmd->add_option("--t", smooth_args.t, "heat bandwidth")->capture_default_str();
    smooth_cmd->add_option("--k", smooth_args.k, "basis truncation (0 = all)")
        ->capture_default_str();
    smooth_cmd->add_option("--out", smooth_args.out, "output directory")->required();

    SpmArgs spm_args;
    auto* spm_cmd = app.add_subcommand("spm", "group T/F map with corrected p-value");
    spm_cmd->add_option("--mesh", spm_args.mesh, "input mesh (must be closed)")->required();
    spm_cmd->add_option("--basis", spm_args.basis, "basis.bin from eigen")->required();
    spm_cmd->add_option("--group-a", spm_args.group_a, "field CSVs, first group")
        ->required()
        ->expected(-1);
    spm_cmd->add_option("--group-b", spm_args.group_b, "field CSVs, second group")
        ->expected(-1);
    spm_cmd->add_option("--t", spm_args.t, "smoothing bandwidth")->capture_default_str();
    spm_cmd->add_option("--alpha", spm_args.alpha, "detection level")->capture_default_str();
    spm_cmd->add_option("--out", spm_args.out, "output directory")->required();

    PowerArgs power_args;
    auto* power_cmd = app.add_subcommand("power", "closed-form power curve");
    power_cmd
        ->add_option("--minkowski-template", power_args.mink_template,
                     "search-region mu0,mu1,mu2")
        ->required();
    power_cmd
        ->add_option("--minkowski-signal", power_args.mink_signal,
                     "signal-region mu0,mu1,mu2")
        ->required();
    power_cmd->add_option("--c", power_args.c, "signal size in noise SDs")
        ->capture_default_str();
    power_cmd->add_option("--n-range", power_args.n_range, "subjects lo:hi[:step]")
        ->capture_default_str();
    power_cmd->add_option("--alpha", power_args.alpha, "detection level")
        ->capture_default_str();
    power_cmd->add_option("--t", power_args.t, "smoothing bandwidth")->capture_default_str();
    power_cmd->add_option("--dof", power_args.dof, "T degrees of freedom (0 = n-1)")
        ->capture_default_str();
    power_cmd->add_option("--out", power_args.out, "output directory")->required();

    GibbsArgs gibbs_args;
    auto* gibbs_cmd =
        app.add_subcommand("gibbs-demo", "step-function overshoot, LSE vs heat kernel");
    gibbs_cmd->add_option("--resolution", gibbs_args.resolution, "radial rings (>= 8)")
        ->capture_default_str();
    gibbs_cmd->add_option("--t", gibbs_args.t, "heat bandwidth")->capture_default_str();
    gibbs_cmd->add_option("--k", gibbs_args.k, "modes (0 = min(7225, n-1))")
        ->capture_default_str();
    gibbs_cmd->add_option("--tol", gibbs_args.tol, "eigen solve tolerance")
        ->capture_default_str();
    gibbs_cmd->add_option("--out", gibbs_args.out, "output directory")->required();

    SynthArgs synth_args;
    auto* synth_cmd =
        app.add_subcommand("synth", "generate a test surface (and optional noise fields)");
    synth_cmd->add_option("--surface", synth_args.surface, "sphere or hat")
        ->capture_default_str();
    synth_cmd->add_option("--level", synth_args.level, "sphere subdivision level (0..7)")
        ->capture_default_str();
    synth_cmd->add_option("--radial", synth_args.radial, "hat radial rings (>= 8)")
        ->capture_default_str();
    synth_cmd->add_option("--angular", synth_args.angular, "hat ring vertices (>= 8)")
        ->capture_default_str();
    synth_cmd->add_option("--scale", synth_args.scale, "uniform scale factor")
        ->capture_default_str();
    synth_cmd
        ->add_option("--noise-sigma", synth_args.noise_sigma, "noise standard deviation")
        ->capture_default_str();
    synth_cmd
        ->add_option("--noise-count", synth_args.noise_count,
                     "number of noise fields to write")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth_args.seed, "root seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_args.out, "output directory")->required();

    SweepArgs sweep_args;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Monte Carlo type-I error across bandwidths");
    sweep_cmd->add_option("--mesh", sweep_args.mesh, "input mesh (must be closed)")
        ->required();
    sweep_cmd->add_option("--basis", sweep_args.basis, "basis.bin from eigen")->required();
    sweep_cmd
        ->add_option("--bandwidths", sweep_args.bandwidths,
                     "ascending bandwidth list")
        ->required()
        ->expected(-1);
    sweep_cmd->add_option("--subjects", sweep_args.subjects, "subjects per null cohort")
        ->capture_default_str();
    sweep_cmd->add_option("--replicates", sweep_args.replicates, "Monte Carlo cohorts")
        ->capture_default_str();
    sweep_cmd->add_option("--sigma", sweep_args.sigma, "noise standard deviation")
        ->capture_default_str();
    sweep_cmd->add_option("--alpha", sweep_args.alpha, "detection level")
        ->capture_default_str();
    sweep_cmd->add_option("--seed", sweep_args.seed, "root seed")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_args.out, "output directory")->required();

    ReplayArgs replay_args;
    auto* replay_cmd = app.add_subcommand("replay", "re-run a recorded manifest");
    replay_cmd->add_option("--manifest", replay_args.manifest, "manifest.json path")
        ->required();
    replay_cmd->add_option("--out", replay_args.out, "override the recorded output dir");

    try {
        // CLI11's vector overload consumes the arguments back to front.
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // CLI11 returns 0 for --help/--version; anything else is a usage error.
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (eigen_cmd->parsed()) return cmd_eigen(eigen_args);
        if (smooth_cmd->parsed()) return cmd_smooth(smooth_args);
        if (spm_cmd->parsed()) return cmd_spm(spm_args);
        if (power_cmd->parsed()) return cmd_power(power_args);
        if (gibbs_cmd->parsed()) return cmd_gibbs_demo(gibbs_args);
        if (synth_cmd->parsed()) return cmd_synth(synth_args);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
        if (replay_cmd->parsed()) return cmd_replay(replay_args);
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        // Parse, mesh-validation, topology, and variance errors all signal
        // problems with the input data.
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("MSPM_THREADS")) {
        const int count = std::atoi(threads);
        if (count > 0) Eigen::setNbThreads(count);
    }
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args);
}
