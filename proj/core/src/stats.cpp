#include "mspm/stats.hpp"
#include "mspm/error.hpp"
#include "mspm/kernel.hpp"
#include "mspm/rft.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace mspm {

namespace {

struct GroupIndex {
    std::vector<Eigen::Index> first;
    std::vector<Eigen::Index> second;  // empty for one-sample designs
};

GroupIndex split_groups(const Cohort& cohort) {
    const auto n = cohort.fields.size();
    if (n < 2) throw ArgumentError("cohort needs at least 2 subjects");
    const Eigen::Index len = cohort.fields.front().values.size();
    for (const auto& field : cohort.fields) {
        if (field.values.size() != len) {
            throw ArgumentError("cohort fields have mismatched lengths");
        }
    }
    if (!cohort.group.empty() && cohort.group.size() != n) {
        throw ArgumentError("group labels must match the subject count");
    }

    GroupIndex index;
    if (cohort.group.empty()) {
        for (std::size_t i = 0; i < n; ++i) index.first.push_back(static_cast<Eigen::Index>(i));
        return index;
    }
    const std::set<std::int32_t> labels(cohort.group.begin(), cohort.group.end());
    if (labels.size() == 1) {
        for (std::size_t i = 0; i < n; ++i) index.first.push_back(static_cast<Eigen::Index>(i));
        return index;
    }
    if (labels.size() != 2) {
        throw ArgumentError("cohort has " + std::to_string(labels.size()) +
                            " distinct group labels; at most two are supported");
    }
    const std::int32_t lo = *labels.begin();
    for (std::size_t i = 0; i < n; ++i) {
        (cohort.group[i] == lo ? index.first : index.second)
            .push_back(static_cast<Eigen::Index>(i));
    }
    if (index.first.size() < 2 || index.second.size() < 2) {
        throw ArgumentError("each compared group needs at least 2 subjects");
    }
    return index;
}

void accumulate(const Cohort& cohort, const std::vector<Eigen::Index>& members,
                Eigen::VectorXd& mean, Eigen::VectorXd& ss) {
    const Eigen::Index len = cohort.fields.front().values.size();
    mean = Eigen::VectorXd::Zero(len);
    for (const auto i : members) mean += cohort.fields[static_cast<std::size_t>(i)].values;
    mean /= static_cast<double>(members.size());
    ss = Eigen::VectorXd::Zero(len);
    for (const auto i : members) {
        const Eigen::VectorXd d = cohort.fields[static_cast<std::size_t>(i)].values - mean;
        ss += d.cwiseProduct(d);
    }
}

TFieldResult two_sample_t(const Cohort& cohort, const GroupIndex& index) {
    Eigen::VectorXd mean1, ss1, mean2, ss2;
    accumulate(cohort, index.first, mean1, ss1);
    accumulate(cohort, index.second, mean2, ss2);
    const double n1 = static_cast<double>(index.first.size());
    const double n2 = static_cast<double>(index.second.size());
    const double dof = n1 + n2 - 2.0;

    TFieldResult out;
    out.dof = dof;
    out.stat.name = "t_stat";
    out.stat.values.resize(mean1.size());
    for (Eigen::Index v = 0; v < mean1.size(); ++v) {
        const double pooled = (ss1[v] + ss2[v]) / dof;
        if (!(pooled > 0.0)) {
            throw ZeroVarianceError("pooled variance vanishes at vertex " + std::to_string(v));
        }
        const double se = std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
        out.stat.values[v] = (mean1[v] - mean2[v]) / se;
    }
    return out;
}

} // namespace

TFieldResult t_field(const Cohort& cohort) {
    const GroupIndex index = split_groups(cohort);
    if (!index.second.empty()) return two_sample_t(cohort, index);

    Eigen::VectorXd mean, ss;
    accumulate(cohort, index.first, mean, ss);
    const double n = static_cast<double>(index.first.size());

    TFieldResult out;
    out.dof = n - 1.0;
    out.stat.name = "t_stat";
    out.stat.values.resize(mean.size());
    for (Eigen::Index v = 0; v < mean.size(); ++v) {
        const double variance = ss[v] / (n - 1.0);
        if (!(variance > 0.0)) {
            throw ZeroVarianceError("sample variance vanishes at vertex " + std::to_string(v));
        }
        out.stat.values[v] = mean[v] / std::sqrt(variance / n);
    }
    return out;
}

FFieldResult f_field(const Cohort& cohort) {
    const GroupIndex index = split_groups(cohort);
    if (index.second.empty()) {
        throw ArgumentError("F field requires a two-group cohort");
    }
    const TFieldResult t = two_sample_t(cohort, index);
    FFieldResult out;
    out.dof_num = 1.0;
    out.dof_den = t.dof;
    out.stat.name = "f_stat";
    out.stat.values = t.stat.values.cwiseProduct(t.stat.values);
    return out;
}

std::string to_json(const StatReport& report) {
    nlohmann::json j;
    j["statistic_kind"] = report.statistic_kind;
    j["dof_num"] = report.dof_num;
    j["dof_den"] = report.dof_den;
    j["max_stat"] = report.max_stat;
    j["max_vertex"] = report.max_vertex;
    j["corrected_p"] = report.corrected_p;
    j["minkowski"] = {{"mu0", report.minkowski.mu0},
                      {"mu1", report.minkowski.mu1},
                      {"mu2", report.minkowski.mu2}};
    j["bandwidth_t"] = report.bandwidth_t;
    j["seed"] = report.seed;
    return j.dump(2) + "\n";
}

StatReport stat_report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad StatReport JSON: ") + e.what());
    }
    StatReport report;
    try {
        report.statistic_kind = j.at("statistic_kind").get<std::string>();
        report.dof_num = j.at("dof_num").get<double>();
        report.dof_den = j.at("dof_den").get<double>();
        report.max_stat = j.at("max_stat").get<double>();
        report.max_vertex = j.at("max_vertex").get<std::int64_t>();
        report.corrected_p = j.at("corrected_p").get<double>();
        report.minkowski.mu0 = j.at("minkowski").at("mu0").get<double>();
        report.minkowski.mu1 = j.at("minkowski").at("mu1").get<double>();
        report.minkowski.mu2 = j.at("minkowski").at("mu2").get<double>();
        report.bandwidth_t = j.at("bandwidth_t").get<double>();
        report.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("incomplete StatReport JSON: ") + e.what());
    }
    return report;
}

StatReport analyze_cohort(const Cohort& cohort, const SpectralBasis& basis,
                          const Minkowski& mink, double bandwidth, std::uint64_t seed) {
    if (!(bandwidth > 0.0)) {
        throw ArgumentError("analysis bandwidth must be positive, got " +
                            std::to_string(bandwidth));
    }
    const KernelSpec spec = KernelSpec::heat(bandwidth);
    Cohort smoothed;
    smoothed.group = cohort.group;
    smoothed.fields.reserve(cohort.fields.size());
    for (const auto& field : cohort.fields) {
        smoothed.fields.push_back(regress(field, basis, spec));
    }

    const GroupIndex index = split_groups(smoothed);
    StatReport report;
    report.bandwidth_t = bandwidth;
    report.minkowski = mink;
    report.seed = seed;
    if (index.second.empty()) {
        TFieldResult t = t_field(smoothed);
        report.statistic_kind = "T";
        report.dof_num = 0.0;
        report.dof_den = t.dof;
        report.stat_map = std::move(t.stat);
    } else {
        FFieldResult f = f_field(smoothed);
        report.statistic_kind = "F";
        report.dof_num = f.dof_num;
        report.dof_den = f.dof_den;
        report.stat_map = std::move(f.stat);
    }

    Eigen::Index argmax = 0;
    report.max_stat = report.stat_map.values.maxCoeff(&argmax);
    report.max_vertex = static_cast<std::int64_t>(argmax);
    if (report.statistic_kind == "T") {
        report.corrected_p =
            corrected_pvalue(report.max_stat, mink, report.dof_den, bandwidth);
    } else {
        report.corrected_p =
            corrected_pvalue_f(report.max_stat, mink, report.dof_den, bandwidth);
    }
    return report;
}

std::vector<SweepPoint> type1_sweep(const Cohort& cohort, const SpectralBasis& basis,
                                    const Minkowski& mink,
                                    const std::vector<double>& bandwidths, double alpha) {
    if (bandwidths.empty()) throw ArgumentError("bandwidth list is empty");
    for (std::size_t i = 0; i < bandwidths.size(); ++i) {
        if (!(bandwidths[i] > 0.0)) {
            throw ArgumentError("sweep bandwidths must be positive");
        }
        if (i > 0 && bandwidths[i] <= bandwidths[i - 1]) {
            throw ArgumentError("sweep bandwidths must be strictly ascending");
        }
    }
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw ArgumentError("alpha must lie in (0, 0.5), got " + std::to_string(alpha));
    }
    std::vector<SweepPoint> points;
    points.reserve(bandwidths.size());
    for (const double t : bandwidths) {
        const StatReport report = analyze_cohort(cohort, basis, mink, t);
        SweepPoint point;
        point.bandwidth = t;
        point.max_stat = report.max_stat;
        point.corrected_p = report.corrected_p;
        point.reject = report.corrected_p < alpha;
        points.push_back(point);
    }
    return points;
}

} // namespace mspm
