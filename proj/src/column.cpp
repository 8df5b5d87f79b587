#include "rpet/column.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "rpet/error.hpp"

namespace rpet {

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

// Fritsch-Carlson slopes: harmonic mean of adjacent secants inside, zero at
// local extrema, shape-preserving three-point estimate at the ends.
std::vector<double> pchip_slopes(const std::vector<AreaAnchor>& a) {
    const std::size_t n = a.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = a[i + 1].l - a[i].l;
        delta[i] = (a[i + 1].area - a[i].area) / h[i];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) continue;
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

}  // namespace

void StoolParams::validate() const {
    for (double v : {base_area, mid_area, top_area, height, top_guide_radius, base_guide_radius,
                     straight_guide_length})
        if (!positive(v)) throw ValidationError("stool parameters must be positive");
    if (!(mid_area < base_area && mid_area < top_area))
        throw ValidationError("mid cross-section must be smaller than both end sections");
}

AreaProfile profile_from_anchors(std::vector<AreaAnchor> anchors) {
    if (anchors.size() < 2) throw ValidationError("area profile needs at least two anchors");
    if (anchors.front().l != 0.0) throw ValidationError("first anchor must be at l = 0");
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (!positive(anchors[i].area)) throw ValidationError("anchor areas must be positive");
        if (i > 0 && !(anchors[i].l > anchors[i - 1].l))
            throw ValidationError("anchor positions must increase strictly");
    }
    AreaProfile p;
    p.length = anchors.back().l;
    p.slopes = pchip_slopes(anchors);
    p.anchors = std::move(anchors);
    return p;
}

AreaProfile build_profile(const StoolParams& params, ScaleFactor scale) {
    scale.validate();
    params.validate();
    const double L = scale.length(params.height);
    AreaProfile p = profile_from_anchors({{0.0, scale.area(params.base_area)},
                                          {0.5 * L, scale.area(params.mid_area)},
                                          {L, scale.area(params.top_area)}});
    p.scale = scale.linear_ratio;
    p.params = params;
    return p;
}

AreaProfile profile_from_function(double length, std::function<double(double)> area) {
    if (!positive(length)) throw DomainError("profile length must be positive");
    AreaProfile p;
    p.length = length;
    p.anchors = {{0.0, area(0.0)}, {length, area(length)}};
    p.slopes = pchip_slopes(p.anchors);
    p.custom = std::move(area);
    return p;
}

double area_at(const AreaProfile& p, double l) {
    if (!(l >= 0.0 && l <= p.length))
        throw DomainError("position " + std::to_string(l) + " mm outside [0, " + std::to_string(p.length) + "]");
    if (p.custom) return p.custom(l);
    const auto& a = p.anchors;
    const auto it = std::upper_bound(a.begin(), a.end(), l, [](double x, const AreaAnchor& k) { return x < k.l; });
    std::size_t i = it == a.begin() ? 0 : static_cast<std::size_t>(it - a.begin()) - 1;
    if (i + 1 >= a.size()) return a.back().area;
    const double h = a[i + 1].l - a[i].l;
    const double t = (l - a[i].l) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * a[i].area + h10 * h * p.slopes[i] + h01 * a[i + 1].area + h11 * h * p.slopes[i + 1];
}

std::vector<StressSample> stress_profile(const AreaProfile& profile, double force, std::size_t n) {
    if (!(force >= 0.0)) throw DomainError("force must be non-negative");
    if (n < 2) throw DomainError("at least two stress samples are required");
    std::vector<StressSample> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double l = i + 1 == n ? profile.length : profile.length * static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = {l, force / area_at(profile, l)};
    }
    return out;
}

SafetyReport safety_check(const AreaProfile& profile, double force, double yield_stress, std::size_t n) {
    if (!positive(yield_stress)) throw DomainError("yield stress must be positive");
    const auto s = stress_profile(profile, force, std::max(n, kSafetySamples));
    const auto best = std::max_element(s.begin(), s.end(),
                                       [](const StressSample& a, const StressSample& b) { return a.stress < b.stress; });
    SafetyReport r;
    r.max_stress = best->stress;
    r.location = best->l;
    r.yield_stress = yield_stress;
    r.margin = r.max_stress > 0.0 ? yield_stress / r.max_stress : std::numeric_limits<double>::infinity();
    r.safe = r.max_stress < yield_stress;
    return r;
}

double axial_displacement(const AreaProfile& profile, double force, double E, std::size_t n_panels) {
    if (n_panels < 2 || n_panels % 2 != 0) throw DomainError("panel count must be even and at least 2");
    if (!positive(E)) throw DomainError("Young's modulus must be positive");
    const double h = profile.length / static_cast<double>(n_panels);
    double sum = 1.0 / area_at(profile, 0.0) + 1.0 / area_at(profile, profile.length);
    for (std::size_t i = 1; i < n_panels; ++i)
        sum += (i % 2 ? 4.0 : 2.0) / area_at(profile, h * static_cast<double>(i));
    return force / E * sum * h / 3.0;
}

AreaProfile parse_profile_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        std::vector<AreaAnchor> anchors;
        for (const auto& a : j.at("anchors")) anchors.push_back({a.at("l_mm").get<double>(), a.at("area_mm2").get<double>()});
        AreaProfile p = profile_from_anchors(std::move(anchors));
        p.scale = j.value("scale", 1.0);
        if (j.contains("params")) {
            const auto& q = j["params"];
            StoolParams s;
            s.base_area = q.value("base_area_mm2", s.base_area);
            s.mid_area = q.value("mid_area_mm2", s.mid_area);
            s.top_area = q.value("top_area_mm2", s.top_area);
            s.height = q.value("height_mm", s.height);
            s.top_guide_radius = q.value("top_guide_radius_mm", s.top_guide_radius);
            s.base_guide_radius = q.value("base_guide_radius_mm", s.base_guide_radius);
            s.straight_guide_length = q.value("straight_guide_length_mm", s.straight_guide_length);
            p.params = s;
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("profile file: ") + e.what());
    }
}

std::string format_profile_json(const AreaProfile& p) {
    nlohmann::ordered_json j;
    j["anchors"] = nlohmann::ordered_json::array();
    for (const auto& a : p.anchors) j["anchors"].push_back({{"l_mm", a.l}, {"area_mm2", a.area}});
    j["scale"] = p.scale;
    if (p.params) {
        const auto& s = *p.params;
        j["params"] = {{"base_area_mm2", s.base_area},
                       {"mid_area_mm2", s.mid_area},
                       {"top_area_mm2", s.top_area},
                       {"height_mm", s.height},
                       {"top_guide_radius_mm", s.top_guide_radius},
                       {"base_guide_radius_mm", s.base_guide_radius},
                       {"straight_guide_length_mm", s.straight_guide_length}};
    }
    return j.dump(2) + "\n";
}

std::string format_stress_csv(const std::vector<StressSample>& samples) {
    std::string out = "l_mm,stress_mpa\n";
    char buf[64];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.6f,%.9g\n", s.l, s.stress);
        out += buf;
    }
    return out;
}

}  // namespace rpet
