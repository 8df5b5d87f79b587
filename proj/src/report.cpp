#include "rpet/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include <json.hpp>

#include "rpet/error.hpp"

namespace rpet {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        auto cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front()))) cell.remove_prefix(1);
        while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) cell.remove_suffix(1);
        out.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double cell_number(const std::string& s, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("comparison CSV line " + std::to_string(line) + ": '" + s + "' is not a number");
    }
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string fixed3(double a, double b, double c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", a, b, c);
    return buf;
}

json stat_json(const Stat& s) { return {{"mean", s.mean}, {"std", s.std_dev}}; }

}  // namespace

ErrorMetrics compare_displacement(double experimental, double numerical) {
    if (experimental == 0.0) throw DomainError("experimental displacement is zero; relative error undefined");
    ErrorMetrics m;
    m.experimental = experimental;
    m.numerical = numerical;
    m.absolute_error = std::abs(experimental - numerical);
    m.relative_error_pct = 100.0 * m.absolute_error / std::abs(experimental);
    m.relative_error_numerical_pct =
        numerical != 0.0 ? 100.0 * m.absolute_error / std::abs(numerical) : std::numeric_limits<double>::infinity();
    return m;
}

ServiceLimitResult service_limit_check(double f_max, double required) {
    if (!(f_max > 0.0) || !(required > 0.0)) throw DomainError("service-limit forces must be positive");
    return {f_max, required, f_max > required, required / f_max};
}

ComparisonTable build_comparison_table(const std::vector<ComparisonInput>& rows) {
    ComparisonTable t;
    t.reserve(rows.size());
    for (const auto& in : rows) {
        ComparisonRow r;
        r.input = in;
        r.metrics = compare_displacement(in.experimental, in.numerical);
        if (in.published_absolute)
            r.absolute_discrepancy = std::abs(*in.published_absolute - r.metrics.absolute_error) > kAbsoluteDiscrepancy + 1e-9;
        if (in.published_relative_pct)
            r.relative_discrepancy =
                std::abs(*in.published_relative_pct - r.metrics.relative_error_pct) > kRelativeDiscrepancy + 1e-9;
        t.push_back(std::move(r));
    }
    std::stable_sort(t.begin(), t.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        return config_rank(a.input.config) < config_rank(b.input.config);
    });
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            if (i != j && canonical_config(t[i].input.config) == canonical_config(t[j].input.config)) t[i].duplicate = true;
    return t;
}

std::vector<ComparisonInput> parse_comparison_csv(std::string_view text) {
    std::vector<ComparisonInput> out;
    std::vector<std::string> header;
    int col_abs = -1, col_rel = -1;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        auto cells = split_csv(line);
        if (header.empty()) {
            header = cells;
            if (header.size() < 3 || header[0] != "config" || header[1] != "experimental_mm" || header[2] != "numerical_mm")
                throw ParseError("comparison CSV must start with header 'config,experimental_mm,numerical_mm'");
            for (std::size_t c = 3; c < header.size(); ++c) {
                if (header[c] == "published_abs_mm") col_abs = static_cast<int>(c);
                else if (header[c] == "published_rel_pct") col_rel = static_cast<int>(c);
                else throw ParseError("comparison CSV: unknown column '" + header[c] + "'");
            }
            continue;
        }
        if (cells.size() != header.size())
            throw ParseError("comparison CSV line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " columns");
        ComparisonInput in;
        in.config_label = cells[0];
        in.config = parse_config(cells[0]);
        in.experimental = cell_number(cells[1], line_no);
        in.numerical = cell_number(cells[2], line_no);
        if (col_abs >= 0 && !cells[col_abs].empty()) in.published_absolute = cell_number(cells[col_abs], line_no);
        if (col_rel >= 0 && !cells[col_rel].empty()) in.published_relative_pct = cell_number(cells[col_rel], line_no);
        out.push_back(std::move(in));
    }
    if (header.empty()) throw ParseError("comparison CSV is empty");
    return out;
}

std::string format_comparison_csv(const ComparisonTable& t) {
    std::string out =
        "config,experimental_mm,numerical_mm,absolute_error_mm,relative_error_pct,relative_error_numerical_pct,"
        "duplicate,absolute_discrepancy,relative_discrepancy\n";
    for (const auto& r : t) {
        const auto& m = r.metrics;
        out += to_string(r.input.config) + "," + num(m.experimental) + "," + num(m.numerical) + "," +
               fixed3(m.absolute_error, m.relative_error_pct, m.relative_error_numerical_pct) +
               "," + (r.duplicate ? "1" : "0") + "," + (r.absolute_discrepancy ? "1" : "0") + "," +
               (r.relative_discrepancy ? "1" : "0") + "\n";
    }
    return out;
}

std::string format_report_json(const Report& r) {
    json j;
    j["provenance"] = r.provenance;
    j["properties"] = json::array();
    for (const auto& a : r.properties)
        j["properties"].push_back({{"config", to_string(a.config)},
                                   {"n", a.stats.n},
                                   {"youngs_modulus_mpa", stat_json(a.stats.youngs_modulus)},
                                   {"yield_stress_mpa", stat_json(a.stats.yield_stress)},
                                   {"fracture_stress_mpa", stat_json(a.stats.fracture_stress)},
                                   {"yield_strain", stat_json(a.stats.yield_strain)},
                                   {"fracture_strain", stat_json(a.stats.fracture_strain)}});
    j["comparison"] = json::array();
    for (const auto& c : r.comparison) {
        json row{{"config", to_string(c.input.config)},
                 {"input_label", c.input.config_label},
                 {"experimental_mm", c.metrics.experimental},
                 {"numerical_mm", c.metrics.numerical},
                 {"absolute_error_mm", c.metrics.absolute_error},
                 {"relative_error_pct", c.metrics.relative_error_pct},
                 {"relative_error_numerical_pct", c.metrics.relative_error_numerical_pct},
                 {"duplicate", c.duplicate}};
        if (c.input.published_absolute) {
            row["published_absolute_mm"] = *c.input.published_absolute;
            row["absolute_discrepancy"] = c.absolute_discrepancy;
        }
        if (c.input.published_relative_pct) {
            row["published_relative_pct"] = *c.input.published_relative_pct;
            row["relative_discrepancy"] = c.relative_discrepancy;
        }
        j["comparison"].push_back(std::move(row));
    }
    if (r.safety) {
        const auto& s = *r.safety;
        j["safety"] = {{"max_stress_mpa", s.max_stress},
                       {"location_mm", s.location},
                       {"yield_stress_mpa", s.yield_stress},
                       {"margin", std::isfinite(s.margin) ? json(s.margin) : json(nullptr)},
                       {"safe", s.safe},
                       {"check", "pointwise sigma(l) = F / A(l) against yield"}};
    } else {
        j["safety"] = nullptr;
    }
    j["service_limits"] = json::array();
    for (const auto& s : r.service_limits)
        j["service_limits"].push_back({{"label", s.label},
                                       {"measured_f_max_n", s.result.measured_f_max},
                                       {"required_n", s.result.required},
                                       {"pass", s.result.pass},
                                       {"utilization", s.result.utilization}});
    j["plots"] = json::array();
    for (const auto& p : r.plots) j["plots"].push_back(p.name + ".svg");
    return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> render_report(const Report& r, const std::filesystem::path& dir,
                                                 const RenderOptions& opts) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& text) {
        const auto p = dir / name;
        write_text_file(p, text);
        written.push_back(p);
    };
    emit("report.json", format_report_json(r));
    if (opts.csv) {
        emit("comparison.csv", format_comparison_csv(r.comparison));
        emit("properties.csv", format_aggregate_csv(r.properties));
    }
    if (opts.svg)
        for (const auto& p : r.plots) emit(p.name + ".svg", render_svg(p));
    return written;
}

void write_run_sidecar(const std::filesystem::path& dir, const Provenance& extra) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    json j;
    j["generated_at"] = stamp;
    for (const auto& [k, v] : extra) j[k] = v;
    write_text_file(dir / "run.json", j.dump(2) + "\n");
}

}  // namespace rpet
