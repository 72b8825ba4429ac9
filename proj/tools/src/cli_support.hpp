#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mspm::cli {

// FNV-1a hash of a file's bytes, rendered as "fnv1a:<16 hex digits>".
// Used to pin run inputs inside the manifest.
std::string hash_file(const std::filesystem::path& path);

// Everything needed to reproduce a run: the subcommand, its flags (each
// flag may repeat, hence the value list), hashes of every input file read,
// the seed in effect, the library version, and a wall-clock timestamp.
// The timestamp is informational; replays compare every output except the
// manifest itself.
struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::vector<std::string>> flags;
    std::map<std::string, std::string> input_hashes;
    std::uint64_t seed = 0;
    std::string version;
    std::string timestamp;
};

// Serializes the manifest (sorted keys, 2-space indent) to out_dir/manifest.json.
void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest);

// Parses a manifest written by write_manifest.
// Throws ParseError on malformed or incomplete JSON.
RunManifest read_manifest(const std::filesystem::path& path);

// Creates the output directory (and parents) if needed.
// Throws ArgumentError when the path exists but is not a directory.
std::filesystem::path ensure_out_dir(const std::filesystem::path& out_dir);

// Writes "index,eigenvalue" rows with 17 significant digits.
void write_eigenvalue_csv(const std::filesystem::path& path, const Eigen::VectorXd& eigenvalues);

// Writes arbitrary curve data: a header row followed by one row per entry
// of `rows`, each printed with 17 significant digits.
void write_curve_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::vector<double>>& rows);

// Shortest decimal rendering that parses back to exactly `value`.
// Used wherever a double becomes a replayable command-line flag.
std::string format_double(double value);

// Parses "a,b,c" into exactly three doubles. Throws ArgumentError otherwise.
std::array<double, 3> parse_triple(const std::string& text);

// Parses "lo:hi" or "lo:hi:step" into an inclusive integer range.
// Throws ArgumentError for malformed text, lo > hi, or step < 1.
std::vector<long> parse_range(const std::string& text);

} // namespace mspm::cli
