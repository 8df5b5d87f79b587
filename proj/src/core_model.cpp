#include "rpet/core_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "rpet/error.hpp"

namespace rpet {

namespace {

constexpr std::array kAxes{PrintAxis::XY, PrintAxis::Z};
constexpr std::array kPatterns{InfillPattern::Concentric, InfillPattern::ZigZag,
                               InfillPattern::Cross45, InfillPattern::Cross90};

std::string normalize(std::string_view s) {
    std::string out;
    for (char ch : s) {
        if (ch == '/' || ch == '-' || ch == '_' || ch == ' ' || ch == '\t') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    return out;
}

}  // namespace

PrintConfig canonical_config(PrintAxis axis, InfillPattern pattern) noexcept {
    if (axis == PrintAxis::Z && pattern == InfillPattern::Cross45) return {axis, InfillPattern::Cross90};
    return {axis, pattern};
}

std::vector<PrintConfig> enumerate_configs() {
    std::vector<PrintConfig> out;
    for (auto a : kAxes) {
        for (auto p : kPatterns) {
            const PrintConfig c = canonical_config(a, p);
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        }
    }
    return out;
}

std::size_t config_rank(PrintConfig c) noexcept {
    static const std::vector<PrintConfig> order = enumerate_configs();
    const auto it = std::find(order.begin(), order.end(), canonical_config(c));
    return static_cast<std::size_t>(it - order.begin());
}

std::string to_string(PrintAxis a) { return a == PrintAxis::XY ? "xy" : "z"; }

std::string to_string(InfillPattern p) {
    switch (p) {
        case InfillPattern::Concentric: return "concentric";
        case InfillPattern::ZigZag: return "zigzag";
        case InfillPattern::Cross45: return "cross45";
        case InfillPattern::Cross90: return "cross90";
    }
    return "?";
}

std::string to_string(PrintConfig c) { return to_string(c.axis) + ":" + to_string(c.pattern); }

PrintAxis parse_axis(std::string_view s) {
    const std::string n = normalize(s);
    if (n == "xy" || n == "yx" || n == "x" || n == "y") return PrintAxis::XY;
    if (n == "z") return PrintAxis::Z;
    throw ValidationError("unknown print axis '" + std::string(s) + "'");
}

InfillPattern parse_pattern(std::string_view s) {
    const std::string n = normalize(s);
    if (n == "concentric") return InfillPattern::Concentric;
    if (n == "zigzag") return InfillPattern::ZigZag;
    // separators are stripped, so "-45/45" arrives as "4545" and "0/90" as "090"
    if (n == "cross45" || n == "4545") return InfillPattern::Cross45;
    if (n == "cross90" || n == "090") return InfillPattern::Cross90;
    throw ValidationError("unknown infill pattern '" + std::string(s) + "'");
}

PrintConfig parse_config(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos)
        throw ValidationError("configuration '" + std::string(s) + "' is not of the form axis:pattern");
    return {parse_axis(s.substr(0, colon)), parse_pattern(s.substr(colon + 1))};
}

double SpecimenGeometry::area() const noexcept {
    return std::numbers::pi * diameter * diameter / 4.0;
}

void SpecimenGeometry::validate() const {
    if (!(diameter > 0.0) || !std::isfinite(diameter))
        throw DomainError("specimen diameter must be positive");
    if (!(height > 0.0) || !std::isfinite(height))
        throw DomainError("specimen height must be positive");
}

void MaterialCard::validate() const {
    if (!(youngs_modulus > 0.0) || !std::isfinite(youngs_modulus))
        throw ValidationError("material '" + name + "': Young's modulus must be positive");
    if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5))
        throw ValidationError("material '" + name + "': Poisson ratio must lie in [0, 0.5)");
    if (yield_stress && !(*yield_stress > 0.0))
        throw ValidationError("material '" + name + "': yield stress must be positive");
}

MaterialCard parse_material_card(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("material card: ") + e.what());
    }
    MaterialCard card;
    try {
        card.name = j.value("name", std::string{});
        card.youngs_modulus = j.at("youngs_modulus_mpa").get<double>();
        card.poisson_ratio = j.at("poisson_ratio").get<double>();
        if (j.contains("yield_stress_mpa")) card.yield_stress = j["yield_stress_mpa"].get<double>();
        if (j.contains("density_g_cm3")) card.density = j["density_g_cm3"].get<double>();
        if (j.contains("metadata")) {
            for (const auto& [k, v] : j["metadata"].items())
                card.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("material card: ") + e.what());
    }
    card.validate();
    return card;
}

MaterialCard read_material_card(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open material card '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_material_card(ss.str());
}

std::string to_json(const MaterialCard& card) {
    nlohmann::ordered_json j;
    j["name"] = card.name;
    j["youngs_modulus_mpa"] = card.youngs_modulus;
    j["poisson_ratio"] = card.poisson_ratio;
    if (card.yield_stress) j["yield_stress_mpa"] = *card.yield_stress;
    if (card.density) j["density_g_cm3"] = *card.density;
    if (!card.metadata.empty()) j["metadata"] = card.metadata;
    return j.dump(2);
}

void ScaleFactor::validate() const {
    if (!(linear_ratio > 0.0 && linear_ratio <= 1.0))
        throw DomainError("scale ratio must lie in (0, 1]");
}

}  // namespace rpet
