#pragma once

// Shared taxonomy and units.  Lengths are mm, forces N, stresses MPa
// (N/mm^2), so no conversion constants appear anywhere in the toolkit.

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rpet {

enum class PrintAxis { XY, Z };

enum class InfillPattern {
    Concentric,
    ZigZag,
    Cross45,  // -45/45 deg raster
    Cross90,  // 0/90 deg raster
};

struct PrintConfig {
    PrintAxis axis = PrintAxis::XY;
    InfillPattern pattern = InfillPattern::Concentric;

    friend auto operator<=>(const PrintConfig&, const PrintConfig&) = default;
};

/// Z-axis -45/45 and 0/90 specimens are rotationally equivalent; the merged
/// class is represented by (Z, Cross90).  Every other input is returned as is.
PrintConfig canonical_config(PrintAxis axis, InfillPattern pattern) noexcept;
inline PrintConfig canonical_config(PrintConfig c) noexcept { return canonical_config(c.axis, c.pattern); }

/// The 7 canonical classes, axis-major, patterns in declaration order.
std::vector<PrintConfig> enumerate_configs();

/// Position of the canonical class of `c` in enumerate_configs().
std::size_t config_rank(PrintConfig c) noexcept;

std::string to_string(PrintAxis a);
std::string to_string(InfillPattern p);
/// "xy:concentric", "z:cross90", ...
std::string to_string(PrintConfig c);

PrintAxis parse_axis(std::string_view s);
InfillPattern parse_pattern(std::string_view s);
/// Accepts "axis:pattern"; case-insensitive, "x/y" and "zig-zag" spellings allowed.
PrintConfig parse_config(std::string_view s);

struct SpecimenGeometry {
    double diameter = 12.7;  // mm
    double height = 50.8;    // mm

    double area() const noexcept;
    /// Throws DomainError unless both dimensions are positive and finite.
    void validate() const;
};

inline constexpr SpecimenGeometry kNominalSpecimen{12.7, 50.8};

struct MaterialCard {
    std::string name;
    double youngs_modulus = 0.0;  // MPa
    double poisson_ratio = 0.0;
    std::optional<double> yield_stress;  // MPa
    std::optional<double> density;       // g/cm^3
    // Print parameters, datasheet values, ...  Never interpreted.
    std::map<std::string, std::string> metadata;

    /// E > 0 and 0 <= nu < 0.5, otherwise ValidationError.
    void validate() const;
};

MaterialCard parse_material_card(std::string_view json_text);
MaterialCard read_material_card(const std::filesystem::path& path);
std::string to_json(const MaterialCard& card);

struct ScaleFactor {
    double linear_ratio = 1.0;

    /// 0 < ratio <= 1, otherwise DomainError.
    void validate() const;
    double length(double l) const noexcept { return l * linear_ratio; }
    double area(double a) const noexcept { return a * linear_ratio * linear_ratio; }
};

}  // namespace rpet
