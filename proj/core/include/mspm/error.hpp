#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace mspm {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or unreadable input (file formats, serialized containers).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Invalid argument values or incompatible dimensions.
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

/// An edge is shared by more than two faces.
class NonManifoldEdgeError : public Error {
public:
    explicit NonManifoldEdgeError(const std::string& msg) : Error(msg) {}
};

/// A face repeats a vertex index.
class DegenerateFaceError : public Error {
public:
    explicit DegenerateFaceError(const std::string& msg) : Error(msg) {}
};

/// A face references a vertex index outside [0, vertex_count).
class IndexOutOfRangeError : public Error {
public:
    explicit IndexOutOfRangeError(const std::string& msg) : Error(msg) {}
};

/// Adjacent faces disagree on orientation across a shared edge.
class OrientationError : public Error {
public:
    explicit OrientationError(const std::string& msg) : Error(msg) {}
};

/// Operation requires a topology the mesh does not have (e.g. closed surface).
class UnsupportedTopologyError : public Error {
public:
    explicit UnsupportedTopologyError(const std::string& msg) : Error(msg) {}
};

/// Matrix assembly failed (e.g. zero-area face).
class AssemblyError : public Error {
public:
    explicit AssemblyError(const std::string& msg) : Error(msg) {}
};

/// An iterative or direct solver failed to reach the requested accuracy.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

/// A statistic is undefined because sample variance vanishes somewhere.
class ZeroVarianceError : public Error {
public:
    explicit ZeroVarianceError(const std::string& msg) : Error(msg) {}
};

/// Emit a non-fatal diagnostic (prefixed, one line). By default the message
/// goes to stderr; embedders can reroute it with set_warning_handler.
void log_warning(const std::string& msg);

/// Receives each diagnostic message (without the "[mspm] warning: " prefix).
using WarningHandler = std::function<void(const std::string&)>;

/// Install a replacement sink for log_warning and return the previous one.
/// Passing an empty handler restores the stderr default. Not thread-safe:
/// callers must not race installation against concurrent library calls.
WarningHandler set_warning_handler(WarningHandler handler);

} // namespace mspm
