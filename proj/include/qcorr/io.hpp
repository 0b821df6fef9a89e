#pragma once

// Serialization shared by the CLI and its tests: 12-significant-digit float
// formatting, angle parsing with the "pi" suffix, and the CSV/JSON emitters
// for reports, curves, designs and experiment estimates. All output is
// deterministic for identical inputs.

#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcorr/expsim.hpp"
#include "qcorr/steering.hpp"
#include "qcorr/sweep.hpp"

namespace qcorr::io {

using ordered_json = nlohmann::ordered_json;

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Rounds through the 12-significant-digit text form so JSON numbers carry the
// same precision as CSV fields.
inline double round12(double v) {
    return std::strtod(format_double(v).c_str(), nullptr);
}

// Accepts plain radians ("0.7853") or a "pi"-suffixed multiplier ("0.35pi",
// "pi"). Throws DomainError on anything else.
inline double parse_angle(const std::string& text) {
    if (text.empty()) throw DomainError("empty angle");
    std::string body = text;
    bool pi = false;
    if (body.size() >= 2 && body.substr(body.size() - 2) == "pi") {
        pi = true;
        body = body.substr(0, body.size() - 2);
    }
    if (body.empty() && pi) return kPi;
    char* end = nullptr;
    const double value = std::strtod(body.c_str(), &end);
    if (end != body.c_str() + body.size()) throw DomainError("unparseable angle: " + text);
    return pi ? value * kPi : value;
}

inline const char* branch_name(BellBranch b) { return b == BellBranch::xy ? "xy" : "xz"; }

inline const char* measure_name(Measure m) {
    switch (m) {
        case Measure::entanglement: return "entanglement";
        case Measure::bell: return "bell";
        case Measure::steering: return "steering";
        case Measure::unsteering: return "unsteering";
    }
    return "";
}

inline const std::string kSweepHeader =
    "theta,damping,concurrence,bell_S,bell_branch,steering_T16,unsteering_tU,unsteering_TU,"
    "entangled,bell_nonlocal,steerable,unsteerable,undetermined";

inline std::string report_csv_row(const CorrelationReport& r) {
    std::ostringstream os;
    os << format_double(r.point.theta) << ',' << format_double(r.point.damping) << ','
       << format_double(r.concurrence) << ',' << format_double(r.bell_s) << ','
       << branch_name(r.bell_branch) << ',' << format_double(r.t16) << ','
       << format_double(r.t_u) << ',' << format_double(r.T_u) << ','
       << (r.flags.entangled ? 1 : 0) << ',' << (r.flags.bell_nonlocal ? 1 : 0) << ','
       << (r.flags.steerable ? 1 : 0) << ',' << (r.flags.unsteerable ? 1 : 0) << ','
       << (r.flags.undetermined ? 1 : 0);
    return os.str();
}

inline std::string reports_csv(const std::vector<CorrelationReport>& reports) {
    std::string out = kSweepHeader + "\n";
    for (const CorrelationReport& r : reports) out += report_csv_row(r) + "\n";
    return out;
}

inline ordered_json report_json(const CorrelationReport& r) {
    ordered_json j;
    j["theta"] = round12(r.point.theta);
    j["damping"] = round12(r.point.damping);
    j["concurrence"] = round12(r.concurrence);
    j["bell_S"] = round12(r.bell_s);
    j["bell_branch"] = branch_name(r.bell_branch);
    j["steering_T16"] = round12(r.t16);
    j["unsteering_tU"] = round12(r.t_u);
    j["unsteering_TU"] = round12(r.T_u);
    j["flags"] = {{"entangled", r.flags.entangled},
                  {"bell_nonlocal", r.flags.bell_nonlocal},
                  {"steerable", r.flags.steerable},
                  {"unsteerable", r.flags.unsteerable},
                  {"undetermined", r.flags.undetermined}};
    return j;
}

inline std::string boundary_csv(const BoundaryCurve& curve) {
    std::string out = "kind,theta,d_star,branch\n";
    for (const BoundarySample& s : curve.samples) {
        out += "sample," + format_double(s.theta) + ',' + format_double(s.d_star) + ',';
        out += s.has_branch ? branch_name(s.branch) : "";
        out += "\n";
    }
    for (const SwitchPoint& sw : curve.switch_points)
        out += "switch," + format_double(sw.theta) + ',' + format_double(sw.damping) + ",\n";
    return out;
}

inline ordered_json boundary_json(const BoundaryCurve& curve) {
    ordered_json j;
    j["measure"] = measure_name(curve.measure);
    j["samples"] = ordered_json::array();
    for (const BoundarySample& s : curve.samples) {
        ordered_json e;
        e["theta"] = round12(s.theta);
        e["d_star"] = round12(s.d_star);
        if (s.has_branch) e["branch"] = branch_name(s.branch);
        j["samples"].push_back(e);
    }
    j["switch_points"] = ordered_json::array();
    for (const SwitchPoint& sw : curve.switch_points)
        j["switch_points"].push_back({{"theta", round12(sw.theta)}, {"damping", round12(sw.damping)}});
    return j;
}

inline std::string designs_csv(const AxisSet& axes, double bound) {
    std::string out = "set,index,nx,ny,nz,lhs_bound\n";
    for (std::size_t i = 0; i < axes.axes.size(); ++i) {
        const Vec3& n = axes.axes[i];
        out += axes.label + ',' + std::to_string(i) + ',' + format_double(n.x) + ',' +
               format_double(n.y) + ',' + format_double(n.z) + ',' + format_double(bound) + "\n";
    }
    return out;
}

inline ordered_json designs_json(const AxisSet& axes, double bound) {
    ordered_json j;
    j["set"] = axes.label;
    j["lhs_bound"] = round12(bound);
    j["axes"] = ordered_json::array();
    for (const Vec3& n : axes.axes)
        j["axes"].push_back({round12(n.x), round12(n.y), round12(n.z)});
    return j;
}

inline ordered_json appendix_d_json(const StatePoint& p, const AppendixDReport& report) {
    ordered_json j;
    j["theta"] = round12(p.theta);
    j["damping"] = round12(p.damping);
    j["entries"] = ordered_json::array();
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const AppendixDEntry& e = report.entries[i];
        const AppendixDComparison& c = report.comparisons[i];
        ordered_json row;
        row["index"] = e.index;
        row["bob_raw"] = {round12(e.bob_raw.x), round12(e.bob_raw.y), round12(e.bob_raw.z)};
        row["bob_unit"] = {round12(e.bob_unit.x), round12(e.bob_unit.y), round12(e.bob_unit.z)};
        row["alice"] = {round12(e.alice.x), round12(e.alice.y), round12(e.alice.z)};
        row["bob_norm"] = round12(c.bob_norm);
        row["bob_axis_deviation"] = round12(c.bob_axis_deviation);
        if (c.alice_defined) row["alice_deviation"] = round12(c.alice_deviation);
        row["mismatch"] = c.mismatch;
        j["entries"].push_back(row);
    }
    return j;
}

inline ordered_json estimates_json(const StatePoint& p, double counts, std::uint64_t seed,
                                   int replicas,
                                   const std::map<std::string, EstimateWithError>& estimates) {
    ordered_json j;
    j["theta"] = round12(p.theta);
    j["damping"] = round12(p.damping);
    j["counts"] = round12(counts);
    j["seed"] = seed;
    j["replicas"] = replicas;
    ordered_json est;
    for (const auto& [name, e] : estimates) {
        est[name] = {{"value", round12(e.value)},
                     {"std_error", round12(e.std_error)},
                     {"replicas", e.replicas}};
    }
    j["estimates"] = est;
    return j;
}

inline std::string estimates_csv(const std::map<std::string, EstimateWithError>& estimates) {
    std::string out = "measure,value,std_error,replicas\n";
    for (const auto& [name, e] : estimates)
        out += name + ',' + format_double(e.value) + ',' + format_double(e.std_error) + ',' +
               std::to_string(e.replicas) + "\n";
    return out;
}

}  // namespace qcorr::io
