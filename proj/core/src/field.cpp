#include "mspm/field.hpp"
#include "mspm/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace mspm {

ScalarField make_field(std::string name, Eigen::VectorXd values) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw ArgumentError("field '" + name + "' has a non-finite value at vertex " +
                                std::to_string(i));
        }
    }
    return ScalarField{std::move(name), std::move(values)};
}

ScalarField read_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open field CSV: " + path.string());

    std::vector<std::pair<long long, double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Trim trailing CR from Windows line endings.
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string index_tok, value_tok;
        if (!std::getline(ls, index_tok, ',') || !std::getline(ls, value_tok)) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected two comma-separated columns");
        }
        std::size_t used = 0;
        long long index = 0;
        double value = 0.0;
        try {
            index = std::stoll(index_tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != index_tok.size()) {
            if (lineno == 1 && rows.empty()) continue;  // header line
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": bad vertex index '" + index_tok + "'");
        }
        try {
            value = std::stod(value_tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": bad value '" + value_tok + "'");
        }
        if (!std::isfinite(value)) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": non-finite value");
        }
        rows.emplace_back(index, value);
    }

    Eigen::VectorXd values(static_cast<Eigen::Index>(rows.size()));
    std::vector<bool> seen(rows.size(), false);
    for (const auto& [index, value] : rows) {
        if (index < 0 || index >= static_cast<long long>(rows.size())) {
            throw ParseError(path.string() + ": vertex index " + std::to_string(index) +
                             " outside [0, " + std::to_string(rows.size()) + ")");
        }
        if (seen[static_cast<std::size_t>(index)]) {
            throw ParseError(path.string() + ": vertex index " + std::to_string(index) +
                             " appears twice");
        }
        seen[static_cast<std::size_t>(index)] = true;
        values[static_cast<Eigen::Index>(index)] = value;
    }
    return ScalarField{path.stem().string(), std::move(values)};
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& field) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    out << "vertex_index,value\n";
    char buf[64];
    for (Eigen::Index i = 0; i < field.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%lld,%.17g\n", static_cast<long long>(i),
                      field.values[i]);
        out << buf;
    }
    if (!out) throw ParseError("write failed: " + path.string());
}

} // namespace mspm
