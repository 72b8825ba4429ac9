// End-to-end tests of the mspm executable: every subcommand runs as a real
// child process and the tests inspect exit codes and output files only.

#include "mspm/field.hpp"
#include "mspm/mesh.hpp"
#include "mspm/mesh_io.hpp"
#include "mspm/stats.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef MSPM_CLI_PATH
#error "MSPM_CLI_PATH must point at the mspm executable"
#endif

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(MSPM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void append_line(const std::filesystem::path& path, const std::string& line) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    out << line << "\n";
}

// Numeric value following "key": in a flat JSON object.
double json_double(const std::string& text, const std::string& key) {
    const auto pos = text.find("\"" + key + "\"");
    REQUIRE(pos != std::string::npos);
    const auto colon = text.find(':', pos);
    REQUIRE(colon != std::string::npos);
    return std::stod(text.substr(colon + 1));
}

// Values of the second CSV column, skipping the header.
std::vector<double> second_column(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));  // header
    std::vector<double> values;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    return values;
}

std::string q(const std::filesystem::path& path) { return path.string(); }

} // namespace

TEST_CASE("cli: version, help, and usage failures") {
    CHECK(run("--version") == 0);
    CHECK(run("--help") == 0);
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("eigen --mesh nowhere.off") == 2);  // missing required --out
}

TEST_CASE("cli: eigen produces a deterministic spherical-harmonic spectrum") {
    oracle::TempDir tmp;
    const auto synth = tmp / "synth";
    REQUIRE(run("synth --surface sphere --level 3 --out " + q(synth)) == 0);
    const auto mesh_path = synth / "mesh.off";

    SUBCASE("k = 0 is a usage error, exit 2") {
        CHECK(run("eigen --mesh " + q(mesh_path) + " --k 0 --out " + q(tmp / "e0")) == 2);
    }
    SUBCASE("k beyond the vertex count is a usage error") {
        CHECK(run("eigen --mesh " + q(mesh_path) + " --k 100000 --out " + q(tmp / "e0")) ==
              2);
    }
    SUBCASE("missing and corrupt meshes are data errors, exit 3") {
        CHECK(run("eigen --mesh " + q(tmp / "absent.off") + " --k 5 --out " +
                  q(tmp / "e0")) == 3);
        std::ofstream bad(tmp / "bad.off");
        bad << "OFF\nnot a mesh\n";
        bad.close();
        CHECK(run("eigen --mesh " + q(tmp / "bad.off") + " --k 5 --out " + q(tmp / "e0")) ==
              3);
    }
    SUBCASE("spectrum clusters at l(l+1) and reruns are byte-identical") {
        const auto e1 = tmp / "e1";
        const auto e2 = tmp / "e2";
        REQUIRE(run("eigen --mesh " + q(mesh_path) + " --k 9 --out " + q(e1)) == 0);
        REQUIRE(run("eigen --mesh " + q(mesh_path) + " --k 9 --out " + q(e2)) == 0);
        CHECK(slurp(e1 / "basis.bin") == slurp(e2 / "basis.bin"));
        CHECK(slurp(e1 / "eigenvalues.csv") == slurp(e2 / "eigenvalues.csv"));

        const std::vector<double> lambda = second_column(e1 / "eigenvalues.csv");
        REQUIRE(lambda.size() == 9);
        CHECK(std::abs(lambda[0]) < 1e-8);
        for (int j = 1; j <= 3; ++j) {
            CHECK(lambda[static_cast<std::size_t>(j)] == doctest::Approx(2.0).epsilon(0.02));
        }
        for (int j = 4; j <= 8; ++j) {
            CHECK(lambda[static_cast<std::size_t>(j)] == doctest::Approx(6.0).epsilon(0.02));
        }
    }
}

TEST_CASE("cli: smooth obeys the kernel identities across invocations") {
    oracle::TempDir tmp;
    const auto synth = tmp / "synth";
    REQUIRE(run("synth --surface sphere --level 1 --noise-count 1 --seed 5 --out " +
                q(synth)) == 0);
    const auto mesh_path = synth / "mesh.off";
    const auto field_path = synth / "noise_000.csv";
    const auto basis_dir = tmp / "basis";
    REQUIRE(run("eigen --mesh " + q(mesh_path) + " --k 20 --out " + q(basis_dir)) == 0);
    const std::string common =
        " --mesh " + q(mesh_path) + " --basis " + q(basis_dir / "basis.bin");

    SUBCASE("heat at t = 0 equals the least-squares fit byte for byte") {
        REQUIRE(run("smooth" + common + " --field " + q(field_path) +
                    " --kernel heat --t 0 --out " + q(tmp / "t0")) == 0);
        REQUIRE(run("smooth" + common + " --field " + q(field_path) +
                    " --kernel lse --out " + q(tmp / "lse")) == 0);
        CHECK(slurp(tmp / "t0" / "smoothed.csv") == slurp(tmp / "lse" / "smoothed.csv"));
    }
    SUBCASE("a huge bandwidth flattens the field") {
        REQUIRE(run("smooth" + common + " --field " + q(field_path) +
                    " --t 1e6 --out " + q(tmp / "flat")) == 0);
        const mspm::ScalarField flat =
            mspm::read_field_csv(tmp / "flat" / "smoothed.csv");
        CHECK(flat.values.maxCoeff() - flat.values.minCoeff() < 1e-6);
    }
    SUBCASE("two half-bandwidth passes equal one full pass") {
        REQUIRE(run("smooth" + common + " --field " + q(field_path) + " --t 1 --out " +
                    q(tmp / "once")) == 0);
        REQUIRE(run("smooth" + common + " --field " + q(tmp / "once" / "smoothed.csv") +
                    " --t 1 --out " + q(tmp / "twice")) == 0);
        REQUIRE(run("smooth" + common + " --field " + q(field_path) + " --t 2 --out " +
                    q(tmp / "full")) == 0);
        const mspm::ScalarField twice =
            mspm::read_field_csv(tmp / "twice" / "smoothed.csv");
        const mspm::ScalarField full =
            mspm::read_field_csv(tmp / "full" / "smoothed.csv");
        REQUIRE(twice.values.size() == full.values.size());
        CHECK((twice.values - full.values).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("unknown kernel names are usage errors") {
        CHECK(run("smooth" + common + " --field " + q(field_path) +
                  " --kernel cubic --out " + q(tmp / "bad")) == 2);
    }
}

TEST_CASE("cli: spm emits stat maps and reports") {
    oracle::TempDir tmp;
    const auto synth = tmp / "synth";
    REQUIRE(run("synth --surface sphere --level 1 --noise-count 6 --seed 9 --out " +
                q(synth)) == 0);
    const auto mesh_path = synth / "mesh.off";
    const auto basis_dir = tmp / "basis";
    REQUIRE(run("eigen --mesh " + q(mesh_path) + " --k 15 --out " + q(basis_dir)) == 0);
    const std::string common =
        " --mesh " + q(mesh_path) + " --basis " + q(basis_dir / "basis.bin") + " --t 0.5";
    auto noise = [&](int i) { return q(synth / ("noise_00" + std::to_string(i) + ".csv")); };

    SUBCASE("one-sample run produces a T report consistent with its map") {
        const auto out = tmp / "one";
        REQUIRE(run("spm" + common + " --group-a " + noise(0) + " " + noise(1) + " " +
                    noise(2) + " " + noise(3) + " --out " + q(out)) == 0);
        const mspm::StatReport report =
            mspm::stat_report_from_json(slurp(out / "report.json"));
        CHECK(report.statistic_kind == "T");
        CHECK(report.dof_den == 3.0);
        CHECK(report.bandwidth_t == 0.5);
        const mspm::ScalarField map = mspm::read_field_csv(out / "statmap.csv");
        REQUIRE(map.values.size() == 42);
        Eigen::Index argmax = 0;
        CHECK(report.max_stat == map.values.maxCoeff(&argmax));
        CHECK(report.max_vertex == static_cast<std::int64_t>(argmax));
        CHECK(report.corrected_p >= 0.0);
        CHECK(report.corrected_p <= 1.0);
    }
    SUBCASE("identical groups give F = 0 and corrected p clamped to 1") {
        const auto out = tmp / "null";
        REQUIRE(run("spm" + common + " --group-a " + noise(0) + " " + noise(1) +
                    " --group-b " + noise(0) + " " + noise(1) + " --out " + q(out)) == 0);
        const mspm::StatReport report =
            mspm::stat_report_from_json(slurp(out / "report.json"));
        CHECK(report.statistic_kind == "F");
        CHECK(report.max_stat == 0.0);
        CHECK(report.corrected_p == 1.0);
    }
    SUBCASE("swapping the groups leaves the F map byte-identical") {
        const auto ab = tmp / "ab";
        const auto ba = tmp / "ba";
        const std::string ga = noise(0) + " " + noise(1) + " " + noise(2);
        const std::string gb = noise(3) + " " + noise(4) + " " + noise(5);
        REQUIRE(run("spm" + common + " --group-a " + ga + " --group-b " + gb + " --out " +
                    q(ab)) == 0);
        REQUIRE(run("spm" + common + " --group-a " + gb + " --group-b " + ga + " --out " +
                    q(ba)) == 0);
        CHECK(slurp(ab / "statmap.csv") == slurp(ba / "statmap.csv"));
        CHECK(slurp(ab / "report.json") == slurp(ba / "report.json"));
    }
    SUBCASE("open surfaces are a data error for inference") {
        const auto hat = tmp / "hat";
        REQUIRE(run("synth --surface hat --radial 8 --angular 12 --out " + q(hat)) == 0);
        const auto hat_basis = tmp / "hatbasis";
        REQUIRE(run("eigen --mesh " + q(hat / "mesh.off") + " --k 10 --out " +
                    q(hat_basis)) == 0);
        CHECK(run("spm --mesh " + q(hat / "mesh.off") + " --basis " +
                  q(hat_basis / "basis.bin") + " --t 0.5 --group-a " + noise(0) + " " +
                  noise(1) + " --out " + q(tmp / "open")) == 3);
    }
}

TEST_CASE("cli: replay reproduces runs and verifies input hashes") {
    oracle::TempDir tmp;
    const auto synth = tmp / "synth";
    REQUIRE(run("synth --surface sphere --level 2 --out " + q(synth)) == 0);
    const auto mesh_path = synth / "mesh.off";
    const auto first = tmp / "first";
    REQUIRE(run("eigen --mesh " + q(mesh_path) + " --k 12 --out " + q(first)) == 0);

    SUBCASE("replayed outputs are byte-identical") {
        const auto second = tmp / "second";
        REQUIRE(run("replay --manifest " + q(first / "manifest.json") + " --out " +
                    q(second)) == 0);
        CHECK(slurp(first / "basis.bin") == slurp(second / "basis.bin"));
        CHECK(slurp(first / "eigenvalues.csv") == slurp(second / "eigenvalues.csv"));
    }
    SUBCASE("a changed input hash fails the replay with a data error") {
        append_line(mesh_path, "# tampered after the recorded run");
        CHECK(run("replay --manifest " + q(first / "manifest.json") + " --out " +
                  q(tmp / "second")) == 3);
    }
    SUBCASE("replay manifests refuse to nest") {
        std::string manifest = slurp(first / "manifest.json");
        const auto pos = manifest.find("\"eigen\"");
        REQUIRE(pos != std::string::npos);
        manifest.replace(pos, 7, "\"replay\"");
        std::ofstream out(tmp / "nested.json", std::ios::binary);
        out << manifest;
        out.close();
        CHECK(run("replay --manifest " + q(tmp / "nested.json")) == 2);
    }
    SUBCASE("a missing manifest is a data error") {
        CHECK(run("replay --manifest " + q(tmp / "absent.json")) == 3);
    }
}

TEST_CASE("cli: power writes the closed-form curve") {
    oracle::TempDir tmp;
    const std::string mink = " --minkowski-template 2,0,628 --minkowski-signal 2,0,628";

    SUBCASE("zero effect reproduces the null detection rate at every n") {
        const auto out = tmp / "null";
        REQUIRE(run("power" + mink + " --c 0 --n-range 5:15:5 --alpha 0.1 --t 1 --out " +
                    q(out)) == 0);
        const std::vector<double> values = second_column(out / "power.csv");
        REQUIRE(values.size() == 3);
        for (const double p : values) {
            CHECK(p == doctest::Approx(1.0 - std::exp(-0.1)).epsilon(1e-4));
        }
    }
    SUBCASE("power grows with the sample size") {
        const auto out = tmp / "grow";
        REQUIRE(run("power --minkowski-template 2,0,628 --minkowski-signal 1,0,30"
                    " --c 0.5 --n-range 5:40:5 --alpha 0.05 --t 1 --out " +
                    q(out)) == 0);
        const std::vector<double> values = second_column(out / "power.csv");
        REQUIRE(values.size() == 8);
        for (std::size_t i = 1; i < values.size(); ++i) {
            CHECK(values[i] >= values[i - 1] - 1e-12);
        }
        CHECK(values.back() > values.front());
    }
    SUBCASE("malformed Minkowski triples and ranges are usage errors") {
        CHECK(run("power --minkowski-template 1,2 --minkowski-signal 1,0,30 --out " +
                  q(tmp / "bad")) == 2);
        CHECK(run("power" + mink + " --n-range 9:5 --out " + q(tmp / "bad")) == 2);
    }
}

TEST_CASE("cli: gibbs-demo reports the overshoot pair deterministically") {
    oracle::TempDir tmp;
    const auto a = tmp / "a";
    REQUIRE(run("gibbs-demo --resolution 8 --k 64 --t 1e-4 --out " + q(a)) == 0);
    const std::string report = slurp(a / "report.json");
    const double lse_over = json_double(report, "lse_overshoot");
    const double heat_over = json_double(report, "heat_overshoot");
    CHECK(lse_over > 0.0);
    CHECK(heat_over >= 0.0);
    CHECK(heat_over <= lse_over);

    SUBCASE("reruns are byte-identical") {
        const auto b = tmp / "b";
        REQUIRE(run("gibbs-demo --resolution 8 --k 64 --t 1e-4 --out " + q(b)) == 0);
        CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
        CHECK(slurp(a / "lse.csv") == slurp(b / "lse.csv"));
        CHECK(slurp(a / "heat.csv") == slurp(b / "heat.csv"));
    }
    SUBCASE("t = 0 collapses the two fits") {
        const auto c = tmp / "c";
        REQUIRE(run("gibbs-demo --resolution 8 --k 64 --t 0 --out " + q(c)) == 0);
        const std::string zero = slurp(c / "report.json");
        CHECK(json_double(zero, "lse_overshoot") == json_double(zero, "heat_overshoot"));
        CHECK(slurp(c / "lse.csv") == slurp(c / "heat.csv"));
    }
    SUBCASE("resolution below 8 is a usage error") {
        CHECK(run("gibbs-demo --resolution 4 --out " + q(tmp / "bad")) == 2);
    }
}

TEST_CASE("cli: sweep estimates the null rejection curve and replays") {
    oracle::TempDir tmp;
    const auto synth = tmp / "synth";
    REQUIRE(run("synth --surface sphere --level 1 --out " + q(synth)) == 0);
    const auto basis_dir = tmp / "basis";
    REQUIRE(run("eigen --mesh " + q(synth / "mesh.off") + " --k 10 --out " +
                q(basis_dir)) == 0);

    const auto out = tmp / "sweep";
    REQUIRE(run("sweep --mesh " + q(synth / "mesh.off") + " --basis " +
                q(basis_dir / "basis.bin") +
                " --bandwidths 0.5 1.0 --subjects 4 --replicates 2 --alpha 0.1 --out " +
                q(out)) == 0);
    std::ifstream csv(out / "sweep.csv");
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "bandwidth,mean_corrected_p,rejection_rate");
    int rows = 0;
    while (std::getline(csv, line)) {
        double bandwidth = 0.0, mean_p = 0.0, rate = 0.0;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &bandwidth, &mean_p, &rate) == 3);
        CHECK(mean_p >= 0.0);
        CHECK(mean_p <= 1.0);
        CHECK(rate >= 0.0);
        CHECK(rate <= 1.0);
        ++rows;
    }
    CHECK(rows == 2);

    SUBCASE("replaying the sweep manifest reproduces the curve byte for byte") {
        const auto again = tmp / "again";
        REQUIRE(run("replay --manifest " + q(out / "manifest.json") + " --out " +
                    q(again)) == 0);
        CHECK(slurp(out / "sweep.csv") == slurp(again / "sweep.csv"));
    }
}

TEST_CASE("cli: synth writes parseable surfaces and seeded noise") {
    oracle::TempDir tmp;
    SUBCASE("hat surface with noise subjects") {
        const auto out = tmp / "hat";
        REQUIRE(run("synth --surface hat --radial 8 --angular 12 --noise-count 2"
                    " --seed 31 --out " +
                    q(out)) == 0);
        const mspm::TriangleMesh mesh = mspm::read_mesh(out / "mesh.off");
        CHECK(mesh.vertex_count() == 8 * 12 + 1);
        const mspm::ScalarField field = mspm::read_field_csv(out / "field.csv");
        REQUIRE(field.values.size() == 97);
        for (Eigen::Index i = 0; i < field.values.size(); ++i) {
            CHECK((field.values[i] == 0.0 || field.values[i] == 1.0));
        }
        const mspm::ScalarField n0 = mspm::read_field_csv(out / "noise_000.csv");
        const mspm::ScalarField n1 = mspm::read_field_csv(out / "noise_001.csv");
        REQUIRE(n0.values.size() == 97);
        CHECK_FALSE(oracle::exact_equal(n0.values, n1.values));

        const auto rerun = tmp / "rerun";
        REQUIRE(run("synth --surface hat --radial 8 --angular 12 --noise-count 2"
                    " --seed 31 --out " +
                    q(rerun)) == 0);
        CHECK(slurp(out / "noise_000.csv") == slurp(rerun / "noise_000.csv"));
        CHECK(slurp(out / "mesh.off") == slurp(rerun / "mesh.off"));
    }
    SUBCASE("scaled sphere") {
        const auto out = tmp / "sphere";
        REQUIRE(run("synth --surface sphere --level 0 --scale 10 --out " + q(out)) == 0);
        const mspm::TriangleMesh mesh = mspm::read_mesh(out / "mesh.off");
        CHECK(mesh.vertex_count() == 12);
        for (const auto& v : mesh.vertices) {
            CHECK(v.norm() == doctest::Approx(10.0).epsilon(1e-9));
        }
    }
    SUBCASE("usage errors") {
        CHECK(run("synth --surface pyramid --out " + q(tmp / "bad")) == 2);
        CHECK(run("synth --surface sphere --level 9 --out " + q(tmp / "bad")) == 2);
        CHECK(run("synth --surface hat --radial 4 --out " + q(tmp / "bad")) == 2);
    }
}
