#pragma once

#include "mspm/field.hpp"
#include "mspm/mesh.hpp"
#include "mspm/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mspm {

/// Per-subject scalar fields on a shared mesh, with optional two-group
/// labels. An empty `group` vector (or a single distinct label) means a
/// one-sample design; otherwise exactly two distinct labels are allowed
/// and the group with the smaller label is taken first in differences.
struct Cohort {
    std::vector<ScalarField> fields;
    std::vector<std::int32_t> group;
};

/// T statistic map.
/// One group:  T(p) = mean(p) / (sd(p)/sqrt(n)),            dof = n-1.
/// Two groups: pooled-variance two-sample T,                dof = n1+n2-2.
struct TFieldResult {
    ScalarField stat;
    double dof = 0.0;
};

/// @throws ArgumentError  mismatched lengths, <2 subjects per group,
///                        more than two groups
/// @throws ZeroVarianceError naming the first offending vertex
TFieldResult t_field(const Cohort& cohort);

/// F statistic map for a two-group design: the square of the two-sample
/// T map, with degrees of freedom (1, n1+n2-2).
struct FFieldResult {
    ScalarField stat;
    double dof_num = 1.0;
    double dof_den = 0.0;
};

/// @throws as t_field; requires exactly two groups
FFieldResult f_field(const Cohort& cohort);

/// Summary of one statistical-parametric-mapping run. The JSON form
/// carries every scalar member (not the map itself, which goes to
/// CSV/VTK).
struct StatReport {
    std::string statistic_kind;  // "T" or "F"
    double dof_num = 0.0;        // 0 for T fields
    double dof_den = 0.0;
    ScalarField stat_map;
    double max_stat = 0.0;
    std::int64_t max_vertex = 0;
    double corrected_p = 1.0;
    Minkowski minkowski;
    double bandwidth_t = 0.0;
    std::uint64_t seed = 0;
};

std::string to_json(const StatReport& report);
/// @throws ParseError on malformed or incomplete JSON
StatReport stat_report_from_json(const std::string& text);

/// Full pipeline for one bandwidth: smooth every subject with the heat
/// kernel at `bandwidth` over the whole basis, form the group statistic
/// (T for one group, F for two), and attach the random-field-theory
/// corrected p-value of the maximum.
/// @throws ArgumentError for bandwidth <= 0 plus constituent errors
StatReport analyze_cohort(const Cohort& cohort, const SpectralBasis& basis,
                          const Minkowski& mink, double bandwidth,
                          std::uint64_t seed = 0);

/// Corrected p of the observed max statistic across a list of smoothing
/// bandwidths (ascending, positive).
struct SweepPoint {
    double bandwidth = 0.0;
    double max_stat = 0.0;
    double corrected_p = 1.0;
    bool reject = false;
};

/// @throws ArgumentError for an empty, non-ascending, or nonpositive
///         bandwidth list, or alpha outside (0, 0.5)
std::vector<SweepPoint> type1_sweep(const Cohort& cohort, const SpectralBasis& basis,
                                    const Minkowski& mink,
                                    const std::vector<double>& bandwidths, double alpha);

} // namespace mspm
