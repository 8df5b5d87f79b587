#pragma once

// One-dimensional model of the waisted stool column: an axial area profile
// A(l), the pointwise stress F / A(l), a yield check and the elastic
// shortening integral used as the reference for the solid model.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpet/core_model.hpp"

namespace rpet {

struct StoolParams {
    double base_area = 20452.7;   // mm^2
    double mid_area = 2375.0;     // mm^2
    double top_area = 48386.0;    // mm^2, circular seat section
    double height = 640.0;        // mm
    // Stored for reference only; the profile is driven by the areas.
    double top_guide_radius = 165.0;        // mm
    double base_guide_radius = 253.0;       // mm
    double straight_guide_length = 240.0;   // mm

    /// All positive and mid_area below both end areas.  Throws ValidationError.
    void validate() const;
};

struct AreaAnchor {
    double l = 0.0;     // mm
    double area = 0.0;  // mm^2
};

/// Monotone piecewise-cubic (Fritsch-Carlson) area through the anchors, or an
/// explicit function when `custom` is set.
struct AreaProfile {
    std::vector<AreaAnchor> anchors;
    std::vector<double> slopes;  // dA/dl at each anchor
    double length = 0.0;
    double scale = 1.0;  // linear ratio the anchors were built with
    std::optional<StoolParams> params;
    std::function<double(double)> custom;
};

/// Anchors at 0, L/2, L with areas base, mid, top (all times s^2), L = height * s.
AreaProfile build_profile(const StoolParams& params, ScaleFactor scale = {});

/// Anchors sorted by strictly increasing l starting at 0; areas positive.
/// Throws ValidationError otherwise.
AreaProfile profile_from_anchors(std::vector<AreaAnchor> anchors);

/// Profile over [0, length] given by an arbitrary positive function.
AreaProfile profile_from_function(double length, std::function<double(double)> area);

/// DomainError outside [0, L].
double area_at(const AreaProfile& profile, double l);

struct StressSample {
    double l = 0.0;       // mm
    double stress = 0.0;  // MPa, compressive magnitude
};

/// n_samples uniformly spaced stations including both ends, sigma = F / A(l).
std::vector<StressSample> stress_profile(const AreaProfile& profile, double force, std::size_t n_samples);

struct SafetyReport {
    double max_stress = 0.0;    // MPa
    double location = 0.0;      // mm
    double yield_stress = 0.0;  // MPa
    double margin = 0.0;        // yield / max, +inf at zero load
    bool safe = false;
};

inline constexpr std::size_t kSafetySamples = 1001;

SafetyReport safety_check(const AreaProfile& profile, double force, double yield_stress,
                          std::size_t n_samples = kSafetySamples);

/// Composite Simpson integral of F / (E A(l)) over [0, L].
double axial_displacement(const AreaProfile& profile, double force, double youngs_modulus,
                          std::size_t n_panels = 1024);

/// Profile file: {"anchors": [{"l_mm", "area_mm2"}...], "scale", "params"?}.
AreaProfile parse_profile_json(std::string_view text);
std::string format_profile_json(const AreaProfile& profile);
std::string format_stress_csv(const std::vector<StressSample>& samples);

}  // namespace rpet
