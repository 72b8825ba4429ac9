#include "mspm/mesh_io.hpp"
#include "mspm/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace mspm {

namespace {

/// Whitespace token stream that drops '#' comments to end of line.
class TokenStream {
public:
    TokenStream(std::istream& in, std::string origin)
        : in_(in), origin_(std::move(origin)) {}

    std::optional<std::string> next() {
        std::string tok;
        while (true) {
            const int c = in_.get();
            if (c == EOF) {
                if (tok.empty()) return std::nullopt;
                return tok;
            }
            if (c == '#') {
                std::string rest;
                std::getline(in_, rest);
                ++line_;
                if (!tok.empty()) return tok;
                continue;
            }
            if (std::isspace(c)) {
                if (c == '\n') ++line_;
                if (!tok.empty()) return tok;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
    }

    std::string where() const { return origin_ + ":" + std::to_string(line_ + 1); }

    long long next_int(const char* what) {
        const auto tok = next();
        if (!tok) throw ParseError(where() + ": unexpected end of file reading " + what);
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(*tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok->size()) {
            throw ParseError(where() + ": expected integer " + std::string(what) + ", got '" +
                             *tok + "'");
        }
        return v;
    }

    double next_double(const char* what) {
        const auto tok = next();
        if (!tok) throw ParseError(where() + ": unexpected end of file reading " + what);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(*tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok->size()) {
            throw ParseError(where() + ": expected number " + std::string(what) + ", got '" +
                             *tok + "'");
        }
        return v;
    }

private:
    std::istream& in_;
    std::string origin_;
    std::size_t line_ = 0;
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

TriangleMesh read_off(std::istream& in, const std::string& origin) {
    TokenStream ts(in, origin);
    auto first = ts.next();
    if (!first) throw ParseError(origin + ": empty OFF file");

    long long nv = 0;
    if (lower(*first) == "off") {
        nv = ts.next_int("vertex count");
    } else {
        // Headerless variant: the first token is already the vertex count.
        std::size_t used = 0;
        try {
            nv = std::stoll(*first, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != first->size()) {
            throw ParseError(origin + ": expected 'OFF' keyword or vertex count, got '" +
                             *first + "'");
        }
    }
    const long long nf = ts.next_int("face count");
    ts.next_int("edge count");  // present in the format but unused
    if (nv < 0 || nf < 0) throw ParseError(origin + ": negative counts");

    std::vector<Eigen::Vector3d> vertices;
    vertices.reserve(static_cast<std::size_t>(nv));
    for (long long i = 0; i < nv; ++i) {
        const double x = ts.next_double("x");
        const double y = ts.next_double("y");
        const double z = ts.next_double("z");
        vertices.emplace_back(x, y, z);
    }

    std::vector<std::array<std::int32_t, 3>> faces;
    faces.reserve(static_cast<std::size_t>(nf));
    for (long long f = 0; f < nf; ++f) {
        const long long count = ts.next_int("face vertex count");
        if (count != 3) {
            throw ParseError(ts.where() + ": face " + std::to_string(f) + " has " +
                             std::to_string(count) + " vertices; only triangles are supported");
        }
        std::array<std::int32_t, 3> face{};
        for (int c = 0; c < 3; ++c) {
            face[c] = static_cast<std::int32_t>(ts.next_int("vertex index"));
        }
        faces.push_back(face);
    }
    return build_mesh(std::move(vertices), std::move(faces));
}

TriangleMesh read_off(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file: " + path.string());
    return read_off(in, path.string());
}

void write_off(const std::filesystem::path& path, const TriangleMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    out << "OFF\n" << mesh.vertex_count() << " " << mesh.face_count() << " 0\n";
    char buf[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out << buf;
    }
    for (const auto& f : mesh.faces) {
        out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
    }
    if (!out) throw ParseError("write failed: " + path.string());
}

namespace {

struct PlyProperty {
    std::string name;
    bool is_list = false;
};

struct PlyElement {
    std::string name;
    long long count = 0;
    std::vector<PlyProperty> properties;
};

} // namespace

TriangleMesh read_ply(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line)) {
            throw ParseError(origin + ": unexpected end of file in PLY header");
        }
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };

    if (lower(next_line()) != "ply") throw ParseError(origin + ": missing 'ply' magic");

    std::vector<PlyElement> elements;
    bool saw_format = false;
    while (true) {
        std::istringstream ls(next_line());
        std::string word;
        ls >> word;
        word = lower(word);
        if (word.empty() || word == "comment" || word == "obj_info") continue;
        if (word == "format") {
            std::string kind;
            ls >> kind;
            if (lower(kind) != "ascii") {
                throw ParseError(origin + ": only ascii PLY is supported, got format '" +
                                 kind + "'");
            }
            saw_format = true;
        } else if (word == "element") {
            PlyElement el;
            ls >> el.name >> el.count;
            if (ls.fail() || el.count < 0) {
                throw ParseError(origin + ":" + std::to_string(lineno) + ": bad element line");
            }
            el.name = lower(el.name);
            elements.push_back(std::move(el));
        } else if (word == "property") {
            if (elements.empty()) {
                throw ParseError(origin + ":" + std::to_string(lineno) +
                                 ": property before any element");
            }
            PlyProperty prop;
            std::string type;
            ls >> type;
            if (lower(type) == "list") {
                std::string count_type, value_type;
                ls >> count_type >> value_type >> prop.name;
                prop.is_list = true;
            } else {
                ls >> prop.name;
            }
            if (ls.fail()) {
                throw ParseError(origin + ":" + std::to_string(lineno) + ": bad property line");
            }
            prop.name = lower(prop.name);
            elements.back().properties.push_back(std::move(prop));
        } else if (word == "end_header") {
            break;
        } else {
            throw ParseError(origin + ":" + std::to_string(lineno) +
                             ": unknown header keyword '" + word + "'");
        }
    }
    if (!saw_format) throw ParseError(origin + ": PLY header has no format line");

    TokenStream ts(in, origin);
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<std::int32_t, 3>> faces;

    for (const auto& el : elements) {
        if (el.name == "vertex") {
            int ix = -1, iy = -1, iz = -1;
            for (std::size_t p = 0; p < el.properties.size(); ++p) {
                if (el.properties[p].is_list) {
                    throw ParseError(origin + ": list property on vertex element");
                }
                if (el.properties[p].name == "x") ix = static_cast<int>(p);
                if (el.properties[p].name == "y") iy = static_cast<int>(p);
                if (el.properties[p].name == "z") iz = static_cast<int>(p);
            }
            if (ix < 0 || iy < 0 || iz < 0) {
                throw ParseError(origin + ": vertex element lacks x/y/z properties");
            }
            vertices.reserve(static_cast<std::size_t>(el.count));
            std::vector<double> row(el.properties.size());
            for (long long i = 0; i < el.count; ++i) {
                for (auto& value : row) value = ts.next_double("vertex property");
                vertices.emplace_back(row[ix], row[iy], row[iz]);
            }
        } else if (el.name == "face") {
            int list_pos = -1;
            for (std::size_t p = 0; p < el.properties.size(); ++p) {
                if (el.properties[p].is_list) {
                    list_pos = static_cast<int>(p);
                    break;
                }
            }
            if (list_pos < 0) throw ParseError(origin + ": face element lacks a list property");
            faces.reserve(static_cast<std::size_t>(el.count));
            for (long long f = 0; f < el.count; ++f) {
                for (int p = 0; p < list_pos; ++p) ts.next_double("face property");
                const long long count = ts.next_int("face vertex count");
                if (count != 3) {
                    throw ParseError(ts.where() + ": face " + std::to_string(f) + " has " +
                                     std::to_string(count) +
                                     " vertices; only triangles are supported");
                }
                std::array<std::int32_t, 3> face{};
                for (int c = 0; c < 3; ++c) {
                    face[c] = static_cast<std::int32_t>(ts.next_int("vertex index"));
                }
                faces.push_back(face);
                const auto trailing = el.properties.size() - static_cast<std::size_t>(list_pos) - 1;
                for (std::size_t p = 0; p < trailing; ++p) ts.next_double("face property");
            }
        } else {
            // Unknown element: consume count * property-count tokens. Lists
            // inside unknown elements are unsupported.
            for (const auto& prop : el.properties) {
                if (prop.is_list) {
                    throw ParseError(origin + ": list property on unsupported element '" +
                                     el.name + "'");
                }
            }
            for (long long i = 0; i < el.count; ++i) {
                for (std::size_t p = 0; p < el.properties.size(); ++p) {
                    ts.next_double("property");
                }
            }
        }
    }
    return build_mesh(std::move(vertices), std::move(faces));
}

TriangleMesh read_ply(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file: " + path.string());
    return read_ply(in, path.string());
}

TriangleMesh read_mesh(const std::filesystem::path& path) {
    const std::string ext = lower(path.extension().string());
    if (ext == ".off") return read_off(path);
    if (ext == ".ply") return read_ply(path);
    throw ParseError("unknown mesh extension '" + ext + "' (expected .off or .ply): " +
                     path.string());
}

namespace {

void write_vtk_impl(const std::filesystem::path& path, const TriangleMesh& mesh,
                    const ScalarField* field) {
    if (field && field->values.size() != static_cast<Eigen::Index>(mesh.vertex_count())) {
        throw ArgumentError("field length " + std::to_string(field->values.size()) +
                            " does not match vertex count " +
                            std::to_string(mesh.vertex_count()));
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    out << "# vtk DataFile Version 3.0\n";
    out << "mspm surface\n";
    out << "ASCII\n";
    out << "DATASET POLYDATA\n";
    out << "POINTS " << mesh.vertex_count() << " double\n";
    char buf[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out << buf;
    }
    out << "POLYGONS " << mesh.face_count() << " " << mesh.face_count() * 4 << "\n";
    for (const auto& f : mesh.faces) {
        out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
    }
    if (field) {
        std::string name = field->name.empty() ? "field" : field->name;
        std::replace(name.begin(), name.end(), ' ', '_');
        out << "POINT_DATA " << mesh.vertex_count() << "\n";
        out << "SCALARS " << name << " double 1\n";
        out << "LOOKUP_TABLE default\n";
        for (Eigen::Index i = 0; i < field->values.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g\n", field->values[i]);
            out << buf;
        }
    }
    if (!out) throw ParseError("write failed: " + path.string());
}

} // namespace

void write_vtk(const std::filesystem::path& path, const TriangleMesh& mesh) {
    write_vtk_impl(path, mesh, nullptr);
}

void write_vtk(const std::filesystem::path& path, const TriangleMesh& mesh,
               const ScalarField& field) {
    write_vtk_impl(path, mesh, &field);
}

} // namespace mspm
