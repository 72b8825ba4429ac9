#include "cli_support.hpp"

#include "mspm/error.hpp"
#include "mspm/version.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace mspm::cli {

namespace {

std::string iso_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

} // namespace

std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input for hashing: " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char chunk[65536];
    while (in.read(chunk, sizeof chunk) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 0x100000001b3ull;
        }
    }
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "fnv1a:%016llx",
                  static_cast<unsigned long long>(hash));
    return buffer;
}

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest) {
    nlohmann::json j;
    j["subcommand"] = manifest.subcommand;
    j["flags"] = manifest.flags;
    j["input_hashes"] = manifest.input_hashes;
    j["seed"] = manifest.seed;
    j["version"] = manifest.version.empty() ? std::string(kVersion) : manifest.version;
    j["timestamp"] = manifest.timestamp.empty() ? iso_utc_now() : manifest.timestamp;
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    if (!out) throw ParseError("cannot write " + (out_dir / "manifest.json").string());
    out << j.dump(2) << "\n";
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open manifest: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed manifest " + path.string() + ": " + e.what());
    }
    RunManifest manifest;
    try {
        manifest.subcommand = j.at("subcommand").get<std::string>();
        manifest.flags =
            j.at("flags").get<std::map<std::string, std::vector<std::string>>>();
        manifest.input_hashes =
            j.at("input_hashes").get<std::map<std::string, std::string>>();
        manifest.seed = j.at("seed").get<std::uint64_t>();
        manifest.version = j.at("version").get<std::string>();
        manifest.timestamp = j.at("timestamp").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("incomplete manifest " + path.string() + ": " + e.what());
    }
    return manifest;
}

std::filesystem::path ensure_out_dir(const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw ArgumentError("cannot create output directory " + out_dir.string());
    }
    return out_dir;
}

void write_eigenvalue_csv(const std::filesystem::path& path,
                          const Eigen::VectorXd& eigenvalues) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << "index,eigenvalue\n";
    char line[64];
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        std::snprintf(line, sizeof line, "%lld,%.17g\n", static_cast<long long>(i),
                      eigenvalues[i]);
        out << line;
    }
}

void write_curve_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path.string());
    out << header << "\n";
    char cell[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(cell, sizeof cell, "%.17g", row[i]);
            out << (i == 0 ? "" : ",") << cell;
        }
        out << "\n";
    }
}

std::string format_double(double value) {
    char buffer[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
        if (std::strtod(buffer, nullptr) == value) break;
    }
    return buffer;
}

std::array<double, 3> parse_triple(const std::string& text) {
    std::array<double, 3> values{};
    char trailing = 0;
    const int got = std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &values[0], &values[1],
                                &values[2], &trailing);
    if (got != 3) {
        throw ArgumentError("expected three comma-separated numbers, got '" + text + "'");
    }
    return values;
}

std::vector<long> parse_range(const std::string& text) {
    long lo = 0;
    long hi = 0;
    long step = 1;
    char trailing = 0;
    int got = std::sscanf(text.c_str(), "%ld:%ld:%ld%c", &lo, &hi, &step, &trailing);
    if (got != 3) {
        step = 1;
        got = std::sscanf(text.c_str(), "%ld:%ld%c", &lo, &hi, &trailing);
        if (got != 2) {
            throw ArgumentError("expected 'lo:hi' or 'lo:hi:step', got '" + text + "'");
        }
    }
    if (lo > hi) throw ArgumentError("range start exceeds range end in '" + text + "'");
    if (step < 1) throw ArgumentError("range step must be at least 1 in '" + text + "'");
    std::vector<long> values;
    for (long v = lo; v <= hi; v += step) values.push_back(v);
    return values;
}

} // namespace mspm::cli
