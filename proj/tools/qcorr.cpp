// Command-line front end: single-point reports, grid sweeps, sudden-death
// boundary curves, measurement-design tables, and simulated experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qcorr/io.hpp"

namespace {

using namespace qcorr;

// Output goes to stdout by default; --out writes a temp file in the target
// directory and renames it into place, so a failed run never leaves a
// partial file behind.
void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(content.c_str(), stdout);
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(out_path);
    const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::ios_base::failure("cannot open " + tmp.string());
        os << content;
        if (!os.flush()) throw std::ios_base::failure("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::ios_base::failure("rename failed: " + target.string());
    }
}

std::string dump_json(const io::ordered_json& j) { return j.dump(2) + "\n"; }

UnsteeringVariant parse_variant(const std::string& name) {
    if (name == "derived") return UnsteeringVariant::derived;
    if (name == "as-printed" || name == "as_printed") return UnsteeringVariant::as_printed;
    throw DomainError("unknown variant: " + name);
}

Measure parse_measure(const std::string& name) {
    if (name == "entanglement") return Measure::entanglement;
    if (name == "bell") return Measure::bell;
    if (name == "steering") return Measure::steering;
    if (name == "unsteering") return Measure::unsteering;
    throw DomainError("unknown measure: " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit correlation quantifiers under amplitude damping"};
    app.require_subcommand(1);

    std::string out_path;
    std::string format;
    app.add_option("--out", out_path, "output file (default: stdout)")->capture_default_str();

    // measures
    auto* measures = app.add_subcommand("measures", "all quantifiers at one (theta, D) point");
    std::string m_theta{"0.25pi"}, m_variant{"derived"};
    double m_damping = 0.0;
    std::string m_format{"json"};
    measures->add_option("--theta", m_theta, "angle in radians; accepts 'pi' suffix")->required();
    measures->add_option("--damping", m_damping, "channel strength D in [0,1]")->required();
    measures->add_option("--variant", m_variant, "unsteering variant: derived | as-printed");
    measures->add_option("--format", m_format, "json | csv");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "grid of reports over (theta, D)");
    std::string s_tmin{"0"}, s_tmax{"0.5pi"};
    int s_tsteps = 50, s_dsteps = 50;
    double s_dmin = 0.0, s_dmax = 1.0;
    std::string s_format{"csv"};
    sweep->add_option("--theta-min", s_tmin);
    sweep->add_option("--theta-max", s_tmax);
    sweep->add_option("--theta-steps", s_tsteps);
    sweep->add_option("--d-min", s_dmin);
    sweep->add_option("--d-max", s_dmax);
    sweep->add_option("--d-steps", s_dsteps);
    sweep->add_option("--format", s_format, "csv | json");

    // boundary
    auto* boundary = app.add_subcommand("boundary", "sudden-death boundary curve of one measure");
    std::string b_measure, b_tmin{"0.05pi"}, b_tmax{"0.45pi"}, b_variant{"derived"};
    int b_tsteps = 100;
    std::string b_format{"csv"};
    boundary->add_option("--measure", b_measure, "entanglement | bell | steering | unsteering")->required();
    boundary->add_option("--theta-min", b_tmin);
    boundary->add_option("--theta-max", b_tmax);
    boundary->add_option("--theta-steps", b_tsteps);
    boundary->add_option("--variant", b_variant, "unsteering variant");
    boundary->add_option("--format", b_format, "csv | json");

    // designs
    auto* designs = app.add_subcommand("designs", "measurement axis sets and their LHS bounds");
    std::string d_set{"combined16"}, d_theta{"0.25pi"}, d_format{"csv"};
    double d_damping = 0.5;
    designs->add_option("--set", d_set,
                        "octahedron | cube | icosahedron | dodecahedron | combined16 | appendix-d");
    designs->add_option("--theta", d_theta, "state angle (appendix-d only)");
    designs->add_option("--damping", d_damping, "state damping (appendix-d only)");
    designs->add_option("--format", d_format, "csv | json");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "finite-statistics estimates with error bars");
    std::string e_theta{"0.25pi"};
    double e_damping = 0.0, e_counts = 1e5;
    std::uint64_t e_seed = 0;
    int e_replicas = 100;
    std::string e_format{"json"};
    experiment->add_option("--theta", e_theta)->required();
    experiment->add_option("--damping", e_damping)->required();
    experiment->add_option("--counts", e_counts, "mean counts per setting");
    experiment->add_option("--seed", e_seed, "64-bit RNG seed");
    experiment->add_option("--replicas", e_replicas, "bootstrap replicas");
    experiment->add_option("--format", e_format, "json | csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        std::string content;
        if (measures->parsed()) {
            const StatePoint p(io::parse_angle(m_theta), m_damping);
            const CorrelationReport r = evaluate_point(p, parse_variant(m_variant));
            content = m_format == "csv" ? io::kSweepHeader + "\n" + io::report_csv_row(r) + "\n"
                                        : dump_json(io::report_json(r));
        } else if (sweep->parsed()) {
            const auto reports = sweep_grid(io::parse_angle(s_tmin), io::parse_angle(s_tmax), s_tsteps,
                                            s_dmin, s_dmax, s_dsteps);
            if (s_format == "csv") {
                content = io::reports_csv(reports);
            } else {
                io::ordered_json j = io::ordered_json::array();
                for (const auto& r : reports) j.push_back(io::report_json(r));
                content = dump_json(j);
            }
        } else if (boundary->parsed()) {
            const BoundaryCurve curve =
                trace_boundary_curve(parse_measure(b_measure), io::parse_angle(b_tmin),
                                     io::parse_angle(b_tmax), b_tsteps, parse_variant(b_variant));
            content = b_format == "csv" ? io::boundary_csv(curve) : dump_json(io::boundary_json(curve));
        } else if (designs->parsed()) {
            if (d_set == "appendix-d") {
                const StatePoint p(io::parse_angle(d_theta), d_damping);
                content = dump_json(io::appendix_d_json(p, appendix_d_settings(p)));
            } else {
                AxisSet axes;
                if (d_set == "octahedron") axes = platonic_axes(PlatonicSolid::octahedron);
                else if (d_set == "cube") axes = platonic_axes(PlatonicSolid::cube);
                else if (d_set == "icosahedron") axes = platonic_axes(PlatonicSolid::icosahedron);
                else if (d_set == "dodecahedron") axes = platonic_axes(PlatonicSolid::dodecahedron);
                else if (d_set == "combined16") axes = combined_axes_16();
                else throw DomainError("unknown design set: " + d_set);
                const double bound = lhs_bound(axes);
                content = d_format == "csv" ? io::designs_csv(axes, bound)
                                            : dump_json(io::designs_json(axes, bound));
            }
        } else if (experiment->parsed()) {
            const StatePoint p(io::parse_angle(e_theta), e_damping);
            const auto estimates =
                estimate_measures(family_state(p), e_counts, e_seed, e_replicas);
            content = e_format == "csv"
                          ? io::estimates_csv(estimates)
                          : dump_json(io::estimates_json(p, e_counts, e_seed, e_replicas, estimates));
        }
        emit(content, out_path);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
