#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rpet/curve.hpp"
#include "rpet/column.hpp"
#include "rpet/fem/analysis.hpp"
#include "rpet/report.hpp"
#include "rpet/synthetic.hpp"

namespace rpet {

enum class Command { Speed, Analyze, Aggregate, Synth, Column, Fem, Compare, Report };

std::string to_string(Command c);

/// Everything a run needs, defaults resolved.  Paths are checked at dispatch.
struct RunConfig {
    Command command = Command::Speed;
    std::filesystem::path output_dir = ".";
    std::optional<std::string> help_text;  // set when --help was given

    // speed
    double height_mm = kNominalSpecimen.height;

    // analyze / report curves
    std::vector<std::filesystem::path> records;
    std::vector<std::filesystem::path> sidecars;  // empty: <record>.json
    ExtractionOptions extraction;

    // aggregate / report
    std::vector<std::filesystem::path> properties;

    // synth
    double synth_modulus = 0.0;
    double synth_yield_stress = 0.0;
    double synth_fracture_stress = 0.0;
    double synth_yield_strain = 0.0;
    double synth_fracture_strain = 0.0;
    double synth_noise = 0.0;
    std::uint64_t seed = 1;
    std::size_t synth_samples = 1500;
    std::size_t synth_count = 1;
    std::string config = "xy:concentric";
    std::string label = "synthetic";

    // column
    std::optional<std::filesystem::path> profile;
    double scale = 0.25;
    double force_n = kServiceLoad;
    std::optional<double> yield_stress;
    std::optional<double> modulus;
    std::size_t stress_samples = kSafetySamples;
    std::size_t quadrature_panels = 1024;
    std::optional<std::filesystem::path> mesh_out;
    int mesh_axial = 40;
    int mesh_side = 4;

    // fem
    std::filesystem::path mesh;
    std::filesystem::path material;
    std::string load_face_set = "top";
    std::string fixed_node_set = "base";
    std::array<double, 3> direction{0.0, 0.0, -1.0};
    bool roller = false;
    std::string pin_node_set = "base_origin";
    std::string guide_node_set = "base_x";
    fem::SolverOptions solver;

    // compare / report
    std::optional<std::filesystem::path> comparison;
    std::vector<std::filesystem::path> prototypes;
    bool emit_csv = false;
    bool emit_svg = false;
};

/// Arguments without the program name.  UsageError on unknown flags or
/// missing required options.
RunConfig parse_args(const std::vector<std::string>& args);

/// Runs the command; returns the process exit status (0 ok, 2 usage,
/// 3 validation, 4 numerical, 5 I/O).  Diagnostics go to `err`.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + dispatch with the same error mapping.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rpet
