#include "rpet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rpet/curve_io.hpp"
#include "rpet/error.hpp"

namespace rpet {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "rpet 0.1.0";

std::string num(double v) {
    std::ostringstream s;
    s.precision(15);
    s << v;
    return s.str();
}

void require_file(const fs::path& p) {
    if (!fs::is_regular_file(p)) throw IoError("input file '" + p.string() + "' does not exist");
}

fs::path prepare_output(const RunConfig& c) {
    std::error_code ec;
    fs::create_directories(c.output_dir, ec);
    if (ec || !fs::is_directory(c.output_dir))
        throw IoError("cannot create output directory '" + c.output_dir.string() + "'");
    return c.output_dir;
}

Provenance base_provenance(const RunConfig& c) {
    return {{"tool", kVersion}, {"command", to_string(c.command)}};
}

std::string join(const std::vector<fs::path>& paths) {
    std::string s;
    for (const auto& p : paths) s += (s.empty() ? "" : ";") + p.generic_string();
    return s;
}

std::vector<fs::path> sorted(std::vector<fs::path> v) {
    std::sort(v.begin(), v.end());
    return v;
}

RawTestRecord load_record(const RunConfig& c, std::size_t i) {
    const fs::path& csv = c.records[i];
    const fs::path sidecar = i < c.sidecars.size() ? c.sidecars[i] : default_sidecar(csv);
    require_file(csv);
    require_file(sidecar);
    return read_record(csv, sidecar);
}

AreaProfile load_profile(const RunConfig& c) {
    if (c.profile) {
        require_file(*c.profile);
        return parse_profile_json(read_text_file(*c.profile));
    }
    return build_profile(StoolParams{}, ScaleFactor{c.scale});
}

Provenance extraction_provenance(const ExtractionOptions& o) {
    return {{"smoothing_window", std::to_string(o.smoothing_window)},
            {"min_r2", num(o.min_r2)},
            {"drop_fraction", num(o.drop_fraction)},
            {"yield_tolerance", num(o.yield_tolerance)},
            {"estimate_noise", o.estimate_noise ? "true" : "false"}};
}

// -- commands -----------------------------------------------------------------

int cmd_speed(const RunConfig& c, std::ostream& out) {
    const TestSpeed s = compute_test_speed(c.height_mm);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.3f mm/min (%s)\n", s.mm_per_min,
                  s.compliant ? "ASTM-compliant" : "outside ASTM band 1.0-1.6 mm/min");
    out << buf;
    return 0;
}

int cmd_analyze(const RunConfig& c, std::ostream& out) {
    const fs::path dir = prepare_output(c);
    std::vector<std::size_t> order(c.records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return c.records[a] < c.records[b]; });
    for (std::size_t i : order) {
        const RawTestRecord rec = load_record(c, i);
        const ExtractionResult r = extract_properties(rec, c.extraction);
        Provenance prov = base_provenance(c);
        prov["record"] = c.records[i].generic_string();
        for (const auto& [k, v] : extraction_provenance(c.extraction)) prov[k] = v;
        const fs::path target = dir / (c.records[i].stem().string() + ".properties.json");
        write_text_file(target, format_properties_json(rec, r, prov));
        const auto& p = r.properties;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s: E=%.2f MPa yield=%.2f MPa @ %.4f fracture=%.2f MPa @ %.4f -> %s\n",
                      rec.label.c_str(), p.youngs_modulus, p.yield_stress, p.yield_strain, p.fracture_stress,
                      p.fracture_strain, target.generic_string().c_str());
        out << buf;
    }
    return 0;
}

std::vector<PropertiesFile> load_properties(const RunConfig& c) {
    std::vector<PropertiesFile> files;
    for (const auto& p : sorted(c.properties)) {
        require_file(p);
        files.push_back(parse_properties_json(read_text_file(p)));
    }
    return files;
}

int cmd_aggregate(const RunConfig& c, std::ostream& out) {
    const fs::path dir = prepare_output(c);
    const auto rows = aggregate_by_config(load_properties(c));
    const std::string csv = format_aggregate_csv(rows);
    write_text_file(dir / "aggregate.csv", csv);
    out << csv;
    return 0;
}

int cmd_synth(const RunConfig& c, std::ostream& out) {
    const fs::path dir = prepare_output(c);
    const PropertyTargets t{c.synth_modulus, c.synth_yield_stress, c.synth_fracture_stress, c.synth_yield_strain,
                            c.synth_fracture_strain};
    const PrintConfig cfg = parse_config(c.config);
    for (std::size_t k = 0; k < c.synth_count; ++k) {
        const std::string label = c.synth_count == 1 ? c.label : c.label + "_" + std::to_string(k + 1);
        const SyntheticModel m = model_from_targets(t, c.synth_noise, c.seed + k);
        const RawTestRecord rec = generate_synthetic_record(m, kNominalSpecimen, c.synth_samples, cfg, label);
        write_record(rec, dir / (label + ".csv"), dir / (label + ".json"));
        out << (dir / (label + ".csv")).generic_string() << "\n";
    }
    return 0;
}

int cmd_column(const RunConfig& c, std::ostream& out) {
    const fs::path dir = prepare_output(c);
    const AreaProfile profile = load_profile(c);
    const auto samples = stress_profile(profile, c.force_n, c.stress_samples);
    write_text_file(dir / "column_stress.csv", format_stress_csv(samples));

    json j;
    j["provenance"] = base_provenance(c);
    j["provenance"]["profile"] = c.profile ? c.profile->generic_string() : "stool defaults";
    j["provenance"]["stress_samples"] = std::to_string(c.stress_samples);
    j["provenance"]["quadrature_panels"] = std::to_string(c.quadrature_panels);
    j["profile"] = json::parse(format_profile_json(profile));
    j["force_n"] = c.force_n;
    j["stress_model"] = "pointwise sigma(l) = F / A(l)";
    const auto mx = std::max_element(samples.begin(), samples.end(),
                                     [](const auto& a, const auto& b) { return a.stress < b.stress; });
    j["max_stress_mpa"] = mx->stress;
    j["max_stress_location_mm"] = mx->l;
    char buf[160];
    std::snprintf(buf, sizeof buf, "max stress %.4f MPa at l = %.3f mm\n", mx->stress, mx->l);
    out << buf;
    if (c.yield_stress) {
        const SafetyReport s = safety_check(profile, c.force_n, *c.yield_stress, c.stress_samples);
        j["safety"] = {{"max_stress_mpa", s.max_stress}, {"location_mm", s.location},
                       {"yield_stress_mpa", s.yield_stress},
                       {"margin", std::isfinite(s.margin) ? json(s.margin) : json(nullptr)}, {"safe", s.safe}};
        std::snprintf(buf, sizeof buf, "yield %.2f MPa, margin %.3f: %s\n", s.yield_stress, s.margin,
                      s.safe ? "safe" : "NOT safe");
        out << buf;
    }
    if (c.modulus) {
        const double d = axial_displacement(profile, c.force_n, *c.modulus, c.quadrature_panels);
        j["youngs_modulus_mpa"] = *c.modulus;
        j["axial_displacement_mm"] = d;
        std::snprintf(buf, sizeof buf, "axial displacement %.6f mm (E = %.2f MPa)\n", d, *c.modulus);
        out << buf;
    }
    if (c.mesh_out) {
        const fem::Mesh m = fem::tapered_square_column(profile, c.mesh_axial, c.mesh_side);
        fem::save_mesh(m, *c.mesh_out);
        out << "mesh " << c.mesh_out->generic_string() << ": " << m.elements.size() << " elements, " << m.nodes.size()
            << " nodes\n";
    }
    write_text_file(dir / "column.json", j.dump(2) + "\n");
    return 0;
}

int cmd_fem(const RunConfig& c, std::ostream& out) {
    require_file(c.mesh);
    require_file(c.material);
    const fem::Mesh mesh = fem::load_mesh(c.mesh);
    const MaterialCard mat = read_material_card(c.material);
    const Eigen::Vector3d dir(c.direction[0], c.direction[1], c.direction[2]);
    const fem::LoadCase lc = c.roller ? fem::LoadCase::roller(c.force_n, dir, c.load_face_set, c.fixed_node_set,
                                                              c.pin_node_set, c.guide_node_set)
                                      : fem::LoadCase::clamped(c.force_n, dir, c.load_face_set, c.fixed_node_set);
    const fs::path outdir = prepare_output(c);
    const fem::FemSolution s = fem::run_static_analysis(mesh, mat, lc, c.solver);
    write_text_file(outdir / "fem_nodal.csv", fem::format_nodal_csv(mesh, s));
    write_text_file(outdir / "fem_summary.json", fem::format_summary_json(mesh, s, mat, lc));
    const auto st = fem::mesh_stats(mesh);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%zu elements, %zu nodes, quality %.3f\nmax displacement %.6f mm, max von Mises %.4f MPa "
                  "(nodal %.4f MPa), equilibrium %.2e\n",
                  st.n_elements, st.n_nodes, st.avg_quality, s.max_displacement_magnitude, s.max_von_mises,
                  s.max_nodal_von_mises, s.equilibrium_error());
    out << buf;
    return 0;
}

ComparisonTable load_comparison(const fs::path& p) {
    require_file(p);
    return build_comparison_table(parse_comparison_csv(read_text_file(p)));
}

int cmd_compare(const RunConfig& c, std::ostream& out) {
    const ComparisonTable t = load_comparison(*c.comparison);
    const fs::path dir = prepare_output(c);
    Report r;
    r.provenance = base_provenance(c);
    r.provenance["comparison"] = c.comparison->generic_string();
    r.comparison = t;
    write_text_file(dir / "comparison.csv", format_comparison_csv(t));
    write_text_file(dir / "report.json", format_report_json(r));
    for (const auto& row : t) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-16s exp %.3f num %.3f abs %.3f rel %.2f%%%s%s%s\n",
                      to_string(row.input.config).c_str(), row.metrics.experimental, row.metrics.numerical,
                      row.metrics.absolute_error, row.metrics.relative_error_pct, row.duplicate ? " [duplicate]" : "",
                      row.absolute_discrepancy ? " [abs differs from published]" : "",
                      row.relative_discrepancy ? " [rel differs from published]" : "");
        out << buf;
    }
    return 0;
}

int cmd_report(const RunConfig& c, std::ostream& out) {
    Report r;
    r.provenance = base_provenance(c);
    for (const auto& [k, v] : extraction_provenance(c.extraction)) r.provenance[k] = v;
    if (!c.properties.empty()) {
        r.properties = aggregate_by_config(load_properties(c));
        r.provenance["properties"] = join(sorted(c.properties));
    }
    if (c.comparison) {
        r.comparison = load_comparison(*c.comparison);
        r.provenance["comparison"] = c.comparison->generic_string();
    }
    if (c.yield_stress) {
        r.safety = safety_check(load_profile(c), c.force_n, *c.yield_stress, c.stress_samples);
        r.provenance["profile"] = c.profile ? c.profile->generic_string() : "stool defaults, scale " + num(c.scale);
        r.provenance["force_n"] = num(c.force_n);
    }
    if (!c.records.empty()) {
        Plot p{"stress_strain", "Compression curves", "Strain [mm/mm]", "Stress [MPa]", {}};
        for (std::size_t i = 0; i < c.records.size(); ++i) {
            const RawTestRecord rec = load_record(c, i);
            const StressStrainCurve curve = to_stress_strain(rec);
            p.series.push_back({rec.label, {curve.strain.begin(), curve.strain.end()},
                                {curve.stress.begin(), curve.stress.end()}});
        }
        r.plots.push_back(std::move(p));
        r.provenance["records"] = join(c.records);
    }
    if (!c.prototypes.empty()) {
        Plot p{"force_displacement", "Prototype compression", "Displacement [mm]", "Force [N]", {}};
        for (const auto& path : c.prototypes) {
            require_file(path);
            require_file(default_sidecar(path));
            const RawTestRecord rec = read_record(path, default_sidecar(path));
            const PrototypeFeatures f = prototype_features(rec, c.extraction.drop_fraction);
            r.service_limits.push_back({rec.label, service_limit_check(f.max_force, c.force_n)});
            Series s{rec.label, {}, {}};
            for (const auto& smp : rec.samples) {
                s.x.push_back(smp.displacement);
                s.y.push_back(smp.force);
            }
            p.series.push_back(std::move(s));
        }
        r.plots.push_back(std::move(p));
        r.provenance["prototypes"] = join(c.prototypes);
    }
    const fs::path dir = prepare_output(c);
    for (const auto& f : render_report(r, dir, {c.emit_csv, c.emit_svg})) out << f.generic_string() << "\n";
    write_run_sidecar(dir, {{"tool", kVersion}});
    return 0;
}

// -- argument parsing ---------------------------------------------------------

struct Parser {
    CLI::App app{"Compression characterization, column design check and Tet10 analysis toolkit", "rpet"};
    RunConfig c;
    std::string method = "direct";
    std::string direction;
    std::string end_override;

    explicit Parser() {
        if (const char* env = std::getenv("RPET_OUTPUT_DIR"); env && *env) c.output_dir = env;
        app.require_subcommand(1);
        app.set_version_flag("--version", kVersion);

        auto out_opt = [&](CLI::App* s) {
            s->add_option("-o,--out-dir", c.output_dir, "Output directory (default: $RPET_OUTPUT_DIR or .)");
        };
        auto extraction = [&](CLI::App* s) {
            s->add_option("--window", c.extraction.smoothing_window, "Moving-average window (odd)")
                ->capture_default_str();
            s->add_option("--r2", c.extraction.min_r2, "R^2 threshold of the elastic window")->capture_default_str();
            s->add_option("--drop-fraction", c.extraction.drop_fraction, "Fracture drop fraction of yield stress")
                ->capture_default_str();
            s->add_option("--yield-tolerance", c.extraction.yield_tolerance, "Relative flatness tolerance at yield")
                ->capture_default_str();
        };

        auto* speed = app.add_subcommand("speed", "Crosshead speed for a specimen height");
        speed->add_option("--height-mm", c.height_mm, "Specimen height")->capture_default_str();

        auto* analyze = app.add_subcommand("analyze", "Extract properties from record CSVs");
        analyze->add_option("--record", c.records, "Record CSV (repeatable)")->required();
        analyze->add_option("--sidecar", c.sidecars, "Sidecar JSON per record (default: <record>.json)");
        extraction(analyze);
        out_opt(analyze);

        auto* aggregate = app.add_subcommand("aggregate", "Mean and std of properties per configuration");
        aggregate->add_option("properties", c.properties, "*.properties.json files")->required();
        out_opt(aggregate);

        auto* synth = app.add_subcommand("synth", "Write synthetic records with known properties");
        synth->add_option("--modulus-mpa", c.synth_modulus)->required();
        synth->add_option("--yield-stress-mpa", c.synth_yield_stress)->required();
        synth->add_option("--fracture-stress-mpa", c.synth_fracture_stress)->required();
        synth->add_option("--yield-strain", c.synth_yield_strain)->required();
        synth->add_option("--fracture-strain", c.synth_fracture_strain)->required();
        synth->add_option("--noise-mpa", c.synth_noise, "Gaussian stress noise")->capture_default_str();
        synth->add_option("--seed", c.seed)->capture_default_str();
        synth->add_option("--samples", c.synth_samples)->capture_default_str();
        synth->add_option("--count", c.synth_count, "Specimens, seeds seed..seed+count-1")->capture_default_str();
        synth->add_option("--config", c.config, "axis:pattern")->capture_default_str();
        synth->add_option("--label", c.label)->capture_default_str();
        out_opt(synth);

        auto* column = app.add_subcommand("column", "Stress profile, yield check and shortening of the column");
        column->add_option("--profile", c.profile, "Profile JSON (default: stool parameters)");
        column->add_option("--scale", c.scale, "Linear scale of the stool parameters")->capture_default_str();
        column->add_option("--force-n", c.force_n)->capture_default_str();
        column->add_option("--yield-stress-mpa", c.yield_stress, "Run the yield check");
        column->add_option("--modulus-mpa", c.modulus, "Compute the axial shortening");
        column->add_option("--samples", c.stress_samples)->capture_default_str();
        column->add_option("--panels", c.quadrature_panels, "Simpson panels (even)")->capture_default_str();
        column->add_option("--mesh-out", c.mesh_out, "Write a square-section Tet10 mesh of the profile");
        column->add_option("--mesh-axial", c.mesh_axial)->capture_default_str();
        column->add_option("--mesh-side", c.mesh_side)->capture_default_str();
        out_opt(column);

        auto* fem = app.add_subcommand("fem", "Linear static analysis of a Tet10 mesh");
        fem->add_option("--mesh", c.mesh, "Mesh file (ASCII 2.2)")->required();
        fem->add_option("--material", c.material, "Material card JSON")->required();
        fem->add_option("--force-n", c.force_n)->capture_default_str();
        fem->add_option("--direction", direction, "Load direction x,y,z (default 0,0,-1)");
        fem->add_option("--load-set", c.load_face_set, "Loaded face set")->capture_default_str();
        fem->add_option("--fixed-set", c.fixed_node_set, "Supported node set")->capture_default_str();
        fem->add_flag("--roller", c.roller, "Restrain the fixed set axially only, plus pin and guide nodes");
        fem->add_option("--pin-set", c.pin_node_set)->capture_default_str();
        fem->add_option("--guide-set", c.guide_node_set)->capture_default_str();
        fem->add_option("--solver", method, "direct | cg")->check(CLI::IsMember({"direct", "cg"}));
        fem->add_option("--tolerance", c.solver.tolerance, "Relative residual")->capture_default_str();
        out_opt(fem);

        auto* compare = app.add_subcommand("compare", "Experimental vs numerical displacement errors");
        compare->add_option("--input", c.comparison, "CSV config,experimental_mm,numerical_mm")->required();
        out_opt(compare);

        auto* report = app.add_subcommand("report", "Assemble report.json, CSV tables and SVG plots");
        report->add_option("--properties", c.properties, "*.properties.json files");
        report->add_option("--comparison", c.comparison, "Comparison CSV");
        report->add_option("--record", c.records, "Record CSVs to plot");
        report->add_option("--prototype", c.prototypes, "Prototype force/displacement CSVs");
        report->add_option("--profile", c.profile, "Profile JSON for the yield check");
        report->add_option("--scale", c.scale)->capture_default_str();
        report->add_option("--force-n", c.force_n, "Service load")->capture_default_str();
        report->add_option("--yield-stress-mpa", c.yield_stress, "Run the column yield check");
        report->add_flag("--csv", c.emit_csv, "Also write CSV tables");
        report->add_flag("--svg", c.emit_svg, "Also write SVG plots");
        extraction(report);
        out_opt(report);
    }

    Command selected() const {
        static const std::vector<std::pair<const char*, Command>> names{
            {"speed", Command::Speed}, {"analyze", Command::Analyze}, {"aggregate", Command::Aggregate},
            {"synth", Command::Synth}, {"column", Command::Column},   {"fem", Command::Fem},
            {"compare", Command::Compare}, {"report", Command::Report}};
        for (const auto& [n, cmd] : names)
            if (app.got_subcommand(n)) return cmd;
        throw UsageError("no command given");
    }
};

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::Speed: return "speed";
        case Command::Analyze: return "analyze";
        case Command::Aggregate: return "aggregate";
        case Command::Synth: return "synth";
        case Command::Column: return "column";
        case Command::Fem: return "fem";
        case Command::Compare: return "compare";
        case Command::Report: return "report";
    }
    return "?";
}

RunConfig parse_args(const std::vector<std::string>& args) {
    Parser p;
    std::vector<const char*> argv{"rpet"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        p.app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream s;
        p.app.exit(e, s, s);
        p.c.help_text = s.str();
        return p.c;
    } catch (const CLI::CallForAllHelp& e) {
        std::ostringstream s;
        p.app.exit(e, s, s);
        p.c.help_text = s.str();
        return p.c;
    } catch (const CLI::CallForVersion&) {
        p.c.help_text = std::string(kVersion) + "\n";
        return p.c;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    p.c.command = p.selected();
    if (p.method == "cg") p.c.solver.method = fem::SolverMethod::ConjugateGradient;
    if (!p.direction.empty()) {
        std::istringstream s(p.direction);
        char comma1 = 0, comma2 = 0;
        auto& d = p.c.direction;
        if (!(s >> d[0] >> comma1 >> d[1] >> comma2 >> d[2]) || comma1 != ',' || comma2 != ',')
            throw UsageError("--direction expects x,y,z");
        const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        if (!(n > 0.0)) throw UsageError("--direction must be non-zero");
        for (double& v : d) v /= n;
    }
    if (!p.c.sidecars.empty() && p.c.sidecars.size() != p.c.records.size())
        throw UsageError("give one --sidecar per --record or none");
    return p.c;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.help_text) {
        out << *c.help_text;
        return 0;
    }
    try {
        switch (c.command) {
            case Command::Speed: return cmd_speed(c, out);
            case Command::Analyze: return cmd_analyze(c, out);
            case Command::Aggregate: return cmd_aggregate(c, out);
            case Command::Synth: return cmd_synth(c, out);
            case Command::Column: return cmd_column(c, out);
            case Command::Fem: return cmd_fem(c, out);
            case Command::Compare: return cmd_compare(c, out);
            case Command::Report: return cmd_report(c, out);
        }
    } catch (const Error& e) {
        err << "rpet " << to_string(c.command) << ": " << to_string(e.kind()) << " error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        err << "rpet " << to_string(c.command) << ": io error: " << e.what() << "\n";
        return exit_code(ErrorKind::Io);
    }
    return exit_code(ErrorKind::Usage);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    try {
        c = parse_args(args);
    } catch (const Error& e) {
        err << "rpet: " << e.what() << "\nRun 'rpet --help' for usage.\n";
        return exit_code(e.kind());
    }
    return dispatch(c, out, err);
}

}  // namespace rpet
