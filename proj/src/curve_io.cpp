#include "rpet/curve_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rpet/error.hpp"

namespace rpet {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double to_double(std::string_view s, std::size_t line) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(line) + ": '" + std::string(s) + "' is not a number");
    return v;
}

// Round-trip exact and locale independent.
std::string num(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

std::vector<ForceSample> parse_record_csv(std::string_view text) {
    std::vector<ForceSample> out;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "displacement_mm,force_N")
                throw ParseError("record CSV must start with header 'displacement_mm,force_N'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected two columns");
        out.push_back({to_double(line.substr(0, comma), line_no), to_double(line.substr(comma + 1), line_no)});
    }
    if (!header_seen) throw ParseError("record CSV is empty");
    return out;
}

std::string format_record_csv(const RawTestRecord& record) {
    std::string out = "displacement_mm,force_N\n";
    for (const auto& s : record.samples) out += num(s.displacement) + "," + num(s.force) + "\n";
    return out;
}

void apply_sidecar(std::string_view json_text, RawTestRecord& record) {
    try {
        const auto j = nlohmann::json::parse(json_text);
        record.geometry.diameter = j.at("diameter_mm").get<double>();
        record.geometry.height = j.at("height_mm").get<double>();
        record.config = {parse_axis(j.at("axis").get<std::string>()), parse_pattern(j.at("pattern").get<std::string>())};
        record.label = j.value("label", std::string{});
        record.end = parse_end_condition(j.value("end_condition", std::string{"unknown"}));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("record sidecar: ") + e.what());
    }
}

std::string format_sidecar(const RawTestRecord& record) {
    nlohmann::ordered_json j;
    j["diameter_mm"] = record.geometry.diameter;
    j["height_mm"] = record.geometry.height;
    j["axis"] = to_string(record.config.axis);
    j["pattern"] = to_string(record.config.pattern);
    j["label"] = record.label;
    j["end_condition"] = to_string(record.end);
    return j.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::filesystem::path default_sidecar(const std::filesystem::path& csv) {
    auto p = csv;
    return p.replace_extension(".json");
}

RawTestRecord read_record(const std::filesystem::path& csv, const std::filesystem::path& sidecar) {
    RawTestRecord r;
    r.samples = parse_record_csv(read_text_file(csv));
    apply_sidecar(read_text_file(sidecar), r);
    if (r.label.empty()) r.label = csv.stem().string();
    return r;
}

void write_record(const RawTestRecord& record, const std::filesystem::path& csv,
                  const std::filesystem::path& sidecar) {
    write_text_file(csv, format_record_csv(record));
    write_text_file(sidecar, format_sidecar(record));
}

std::string format_properties_json(const RawTestRecord& record, const ExtractionResult& r,
                                   const Provenance& provenance) {
    nlohmann::ordered_json j;
    j["label"] = record.label;
    j["axis"] = to_string(record.config.axis);
    j["pattern"] = to_string(record.config.pattern);
    j["canonical_config"] = to_string(canonical_config(record.config));
    const auto& p = r.properties;
    j["properties"] = {{"youngs_modulus_mpa", p.youngs_modulus},
                       {"yield_stress_mpa", p.yield_stress},
                       {"fracture_stress_mpa", p.fracture_stress},
                       {"yield_strain", p.yield_strain},
                       {"fracture_strain", p.fracture_strain}};
    j["audit"] = {{"endpoint_ratio_modulus_mpa", r.endpoint_ratio_modulus},
                  {"linear_region", {r.region.range.start, r.region.range.end}},
                  {"linear_region_r2", r.region.fit.r2},
                  {"linear_region_toe_compensated", r.region.toe_compensated},
                  {"toe_offset", r.toe_offset},
                  {"noise_sigma_mpa", r.noise_sigma},
                  {"yield_index", r.yield.index},
                  {"fracture_index", r.fracture.index},
                  {"fracture_rule", to_string(r.fracture.rule)},
                  {"strain_axis", "measured (toe offset not subtracted)"}};
    j["provenance"] = provenance;
    return j.dump(2) + "\n";
}

PropertiesFile parse_properties_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        PropertiesFile f;
        f.label = j.value("label", std::string{});
        f.config = {parse_axis(j.at("axis").get<std::string>()), parse_pattern(j.at("pattern").get<std::string>())};
        const auto& p = j.at("properties");
        f.properties.youngs_modulus = p.at("youngs_modulus_mpa").get<double>();
        f.properties.yield_stress = p.at("yield_stress_mpa").get<double>();
        f.properties.fracture_stress = p.at("fracture_stress_mpa").get<double>();
        f.properties.yield_strain = p.at("yield_strain").get<double>();
        f.properties.fracture_strain = p.at("fracture_strain").get<double>();
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("properties file: ") + e.what());
    }
}

std::vector<ConfigAggregate> aggregate_by_config(const std::vector<PropertiesFile>& files) {
    std::vector<ConfigAggregate> out;
    for (const PrintConfig c : enumerate_configs()) {
        std::vector<CompressionProperties> group;
        for (const auto& f : files)
            if (canonical_config(f.config) == c) group.push_back(f.properties);
        if (!group.empty()) out.push_back({c, aggregate(group)});
    }
    return out;
}

std::string format_aggregate_csv(const std::vector<ConfigAggregate>& rows) {
    std::string out =
        "# z:cross45 specimens are merged into z:cross90\n"
        "config,n,E_mean_mpa,E_std_mpa,yield_stress_mean_mpa,yield_stress_std_mpa,"
        "fracture_stress_mean_mpa,fracture_stress_std_mpa,yield_strain_mean,yield_strain_std,"
        "fracture_strain_mean,fracture_strain_std\n";
    for (const auto& r : rows) {
        const auto& s = r.stats;
        out += to_string(r.config) + "," + std::to_string(s.n);
        for (const Stat* st : {&s.youngs_modulus, &s.yield_stress, &s.fracture_stress, &s.yield_strain,
                               &s.fracture_strain})
            out += "," + num(st->mean) + "," + num(st->std_dev);
        out += "\n";
    }
    return out;
}

}  // namespace rpet
