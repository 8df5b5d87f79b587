#include "rpet/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rpet/error.hpp"

namespace rpet {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void check_range(const StressStrainCurve& curve, IndexRange r) {
    if (r.start > r.end || r.end >= curve.size())
        throw DomainError("index range [" + std::to_string(r.start) + ", " + std::to_string(r.end) +
                          "] is outside a curve of " + std::to_string(curve.size()) + " points");
}

// Running sums over a centred copy of the data so window statistics stay
// accurate for long records.
class WindowSums {
public:
    WindowSums(const Eigen::VectorXd& x, const Eigen::VectorXd& y, std::size_t n)
        : x0_(x.head(static_cast<Eigen::Index>(n)).mean()),
          y0_(y.head(static_cast<Eigen::Index>(n)).mean()),
          sx_(n + 1, 0.0), sy_(n + 1, 0.0), sxx_(n + 1, 0.0), syy_(n + 1, 0.0), sxy_(n + 1, 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double a = x[static_cast<Eigen::Index>(i)] - x0_;
            const double b = y[static_cast<Eigen::Index>(i)] - y0_;
            sx_[i + 1] = sx_[i] + a;
            sy_[i + 1] = sy_[i] + b;
            sxx_[i + 1] = sxx_[i] + a * a;
            syy_[i + 1] = syy_[i] + b * b;
            sxy_[i + 1] = sxy_[i] + a * b;
        }
    }

    struct Moments {
        double sxx, syy, sxy;
    };

    // Centred second moments of the window [i, j).
    Moments moments(std::size_t i, std::size_t j) const {
        const double m = static_cast<double>(j - i);
        const double sx = sx_[j] - sx_[i];
        const double sy = sy_[j] - sy_[i];
        return {sxx_[j] - sxx_[i] - sx * sx / m, syy_[j] - syy_[i] - sy * sy / m,
                sxy_[j] - sxy_[i] - sx * sy / m};
    }

private:
    double x0_, y0_;
    std::vector<double> sx_, sy_, sxx_, syy_, sxy_;
};

}  // namespace

std::string to_string(EndCondition e) {
    switch (e) {
        case EndCondition::Unknown: return "unknown";
        case EndCondition::MachineStop: return "machine_stop";
        case EndCondition::Continued: return "continued";
    }
    return "unknown";
}

EndCondition parse_end_condition(std::string_view s) {
    if (s == "unknown" || s.empty()) return EndCondition::Unknown;
    if (s == "machine_stop") return EndCondition::MachineStop;
    if (s == "continued") return EndCondition::Continued;
    throw ValidationError("unknown end condition '" + std::string(s) + "'");
}

void RawTestRecord::validate() const {
    if (samples.size() < kMinSamples)
        throw ValidationError("record '" + label + "' has " + std::to_string(samples.size()) +
                              " samples, at least " + std::to_string(kMinSamples) + " required");
    if (!(samples.front().displacement >= 0.0))
        throw ValidationError("record '" + label + "' starts at a negative displacement");
    double running_max = samples.front().displacement;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!std::isfinite(s.force) || !std::isfinite(s.displacement))
            throw ValidationError("record '" + label + "' has a non-finite value at sample " + std::to_string(i));
        if (s.displacement < running_max - kDisplacementJitter)
            throw ValidationError("record '" + label + "' displacement reverses by more than 1 um at sample " +
                                  std::to_string(i));
        running_max = std::max(running_max, s.displacement);
    }
}

TestSpeed compute_test_speed(double specimen_height) {
    if (!(specimen_height > 0.0) || !std::isfinite(specimen_height))
        throw DomainError("specimen height must be positive");
    const double v = 0.02 * specimen_height;
    return {v, v >= kSpeedBandLow && v <= kSpeedBandHigh};
}

StressStrainCurve to_stress_strain(const RawTestRecord& record) {
    record.geometry.validate();
    record.validate();
    const double area = record.geometry.area();
    const auto n = static_cast<Eigen::Index>(record.samples.size());
    StressStrainCurve c;
    c.strain.resize(n);
    c.stress.resize(n);
    c.end = record.end;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& s = record.samples[static_cast<std::size_t>(i)];
        c.stress[i] = s.force / area;
        c.strain[i] = s.displacement / record.geometry.height;
    }
    return c;
}

StressStrainCurve smooth(const StressStrainCurve& curve, int window) {
    const auto n = static_cast<int>(curve.size());
    if (window < 1 || window % 2 == 0) throw DomainError("smoothing window must be a positive odd integer");
    if (window > n) throw DomainError("smoothing window exceeds the number of points");
    const int half = window / 2;
    StressStrainCurve out = curve;
    for (int i = 0; i < n; ++i) {
        const int k = std::min({half, i, n - 1 - i});
        out.stress[i] = curve.stress.segment(i - k, 2 * k + 1).mean();
    }
    return out;
}

double estimate_noise_sigma(const Eigen::VectorXd& values) {
    const Eigen::Index n = values.size();
    if (n < 3) return 0.0;
    std::vector<double> d2(static_cast<std::size_t>(n - 2));
    for (Eigen::Index i = 1; i + 1 < n; ++i)
        d2[static_cast<std::size_t>(i - 1)] = values[i + 1] - 2.0 * values[i] + values[i - 1];
    auto median = [](std::vector<double> v) {
        const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
        std::nth_element(v.begin(), mid, v.end());
        return *mid;
    };
    const double med = median(d2);
    for (double& v : d2) v = std::abs(v - med);
    // A second difference of white noise has variance 6 sigma^2.
    return 1.482602218505602 * median(d2) / std::sqrt(6.0);
}

LinearFit fit_line(const StressStrainCurve& curve, IndexRange range) {
    check_range(curve, range);
    const auto i0 = static_cast<Eigen::Index>(range.start);
    const auto m = static_cast<Eigen::Index>(range.count());
    const Eigen::VectorXd x = curve.strain.segment(i0, m);
    const Eigen::VectorXd y = curve.stress.segment(i0, m);
    const double xm = x.mean();
    const double ym = y.mean();
    const Eigen::VectorXd dx = x.array() - xm;
    const Eigen::VectorXd dy = y.array() - ym;
    const double sxx = dx.squaredNorm();
    if (!(sxx > 0.0)) throw DomainError("strain span of the range is zero");
    LinearFit f;
    f.slope = dx.dot(dy) / sxx;
    f.intercept = ym - f.slope * xm;
    const double syy = dy.squaredNorm();
    const double ssres = (dy - f.slope * dx).squaredNorm();
    f.r2 = syy > 0.0 ? 1.0 - ssres / syy : 1.0;
    return f;
}

LinearRegion detect_linear_region(const StressStrainCurve& curve, const LinearRegionOptions& opts) {
    const std::size_t n_all = curve.size();
    if (n_all < opts.min_points)
        throw DetectionError("curve has fewer than " + std::to_string(opts.min_points) + " points");

    std::size_t last = opts.search_end;
    if (last == LinearRegionOptions{}.search_end) {
        Eigen::Index imax = 0;
        curve.stress.maxCoeff(&imax);
        last = static_cast<std::size_t>(imax);
    }
    last = std::min(last, n_all - 1);
    const std::size_t n = last + 1;
    if (n < opts.min_points)
        throw DetectionError("ascending branch has only " + std::to_string(n) + " points");

    const double min_span = opts.min_span_fraction * curve.strain[static_cast<Eigen::Index>(last)];
    const WindowSums sums(curve.strain, curve.stress, n);
    const double lack_of_fit = 1.0 - opts.min_r2;
    const double noise_var = std::max(0.0, opts.noise_variance);
    double best_r2 = -std::numeric_limits<double>::infinity();

    for (std::size_t len = n; len >= opts.min_points; --len) {
        for (std::size_t i = 0; i + len <= n; ++i) {
            const std::size_t j = i + len;
            const double span = curve.strain[static_cast<Eigen::Index>(j - 1)] - curve.strain[static_cast<Eigen::Index>(i)];
            if (span < min_span || !(span > 0.0)) continue;
            const auto mo = sums.moments(i, j);
            if (!(mo.sxx > 0.0) || !(mo.syy > 0.0)) continue;
            const double ssres = std::max(0.0, mo.syy - mo.sxy * mo.sxy / mo.sxx);
            const double r2 = 1.0 - ssres / mo.syy;
            best_r2 = std::max(best_r2, r2);
            bool ok;
            if (noise_var > 0.0) {
                const double excess = ssres - static_cast<double>(len - 2) * noise_var;
                ok = excess <= lack_of_fit * mo.syy && r2 >= opts.noisy_r2_floor;
            } else {
                ok = r2 >= opts.min_r2;
            }
            if (ok) {
                LinearRegion region;
                region.range = {i, j - 1};
                region.fit = fit_line(curve, region.range);
                region.toe_compensated = curve.toe_offset != 0.0;
                return region;
            }
        }
    }
    throw DetectionError("no linear region with R^2 >= " + fmt(opts.min_r2) + " (best " + fmt(best_r2) + ")",
                         best_r2);
}

LinearRegion refine_linear_region(const StressStrainCurve& curve, LinearRegion region, double noise_sigma,
                                  std::size_t min_points) {
    check_range(curve, region.range);
    const double span = curve.stress.maxCoeff() - curve.stress.minCoeff();
    const double tol = std::max(3.0 * std::max(0.0, noise_sigma), 1e-8 * span);
    auto& [a, b] = region.range;
    // Running sums about a fixed origin; one end sample leaves per step.
    const double x0 = curve.strain[static_cast<Eigen::Index>(a)], y0 = curve.stress[static_cast<Eigen::Index>(a)];
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    auto add = [&](std::size_t k, double w) {
        const double x = curve.strain[static_cast<Eigen::Index>(k)] - x0;
        const double y = curve.stress[static_cast<Eigen::Index>(k)] - y0;
        n += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    };
    for (std::size_t k = a; k <= b; ++k) add(k, 1.0);
    while (region.range.count() > std::max<std::size_t>(min_points, 3)) {
        const double det = n * sxx - sx * sx;
        if (!(det > 0.0)) break;
        const double slope = (n * sxy - sx * sy) / det;
        const double icpt = (sy - slope * sx) / n;
        auto residual = [&](std::size_t k) {
            const auto i = static_cast<Eigen::Index>(k);
            return std::abs(curve.stress[i] - y0 - (slope * (curve.strain[i] - x0) + icpt));
        };
        const double ra = residual(a), rb = residual(b);
        if (std::max(ra, rb) <= tol) break;
        if (ra >= rb) add(a++, -1.0);
        else add(b--, -1.0);
    }
    region.fit = fit_line(curve, region.range);
    return region;
}

StressStrainCurve toe_compensate(const StressStrainCurve& curve, const LinearRegionOptions& opts) {
    return toe_compensate(curve, detect_linear_region(curve, opts).fit);
}

StressStrainCurve toe_compensate(const StressStrainCurve& curve, const LinearFit& fit) {
    if (!(fit.slope > 0.0)) throw DetectionError("elastic slope is not positive", fit.r2);
    const double offset = -fit.intercept / fit.slope;
    StressStrainCurve out = curve;
    out.strain = (curve.strain.array() - offset).max(0.0);
    out.toe_offset = curve.toe_offset + offset;
    return out;
}

double youngs_modulus(const StressStrainCurve& curve, IndexRange range) {
    return fit_line(curve, range).slope;
}

double endpoint_ratio_modulus(const StressStrainCurve& curve, IndexRange range) {
    check_range(curve, range);
    const auto a = static_cast<Eigen::Index>(range.start);
    const auto b = static_cast<Eigen::Index>(range.end);
    const double de = curve.strain[b] - curve.strain[a];
    if (!(de > 0.0)) throw DomainError("strain span of the range is zero");
    return (curve.stress[b] - curve.stress[a]) / de;
}

YieldPoint detect_yield(const StressStrainCurve& curve, const YieldOptions& opts) {
    const std::size_t n = curve.size();
    if (n < kMinSamples) throw DetectionError("curve has fewer than 10 points");
    const auto& s = curve.stress;
    const double band = opts.noise_band * std::max(0.0, opts.noise_sigma);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double si = s[static_cast<Eigen::Index>(i)];
        const double d = std::max(opts.tolerance * std::abs(si), band);
        std::size_t j = i + 1;
        while (j < n && std::abs(s[static_cast<Eigen::Index>(j)] - si) <= d) ++j;
        if (j == n || s[static_cast<Eigen::Index>(j)] > si) continue;

        // Stress fell out of the band below s[i]: s[i..j] brackets a maximum.
        const auto len = static_cast<Eigen::Index>(j - i + 1);
        const double peak = s.segment(static_cast<Eigen::Index>(i), len).maxCoeff();
        const double flat = std::max(opts.tolerance * std::abs(peak), std::max(0.0, opts.noise_sigma));
        std::size_t k = i;
        while (s[static_cast<Eigen::Index>(k)] < peak - flat) ++k;
        return {k, curve.strain[static_cast<Eigen::Index>(k)], s[static_cast<Eigen::Index>(k)]};
    }
    throw DetectionError("stress never decreases after a maximum; yield at the end of data is not trusted");
}

std::string to_string(FractureRule r) {
    switch (r) {
        case FractureRule::Terminal: return "terminal";
        case FractureRule::Threshold: return "threshold";
        case FractureRule::Fallback: return "fallback";
    }
    return "?";
}

FracturePoint detect_fracture(const StressStrainCurve& curve, const YieldPoint& yield, double drop_fraction) {
    if (!yield.detected() || yield.index >= curve.size())
        throw OrderingError("fracture detection requires a detected yield point");
    if (!(drop_fraction > 0.0 && drop_fraction < 1.0)) throw DomainError("drop fraction must lie in (0, 1)");

    const auto last = static_cast<Eigen::Index>(curve.size() - 1);
    auto point = [&](Eigen::Index i, FractureRule rule) {
        return FracturePoint{static_cast<std::size_t>(i), curve.strain[i], curve.stress[i], rule};
    };
    if (curve.end == EndCondition::MachineStop) return point(last, FractureRule::Terminal);

    const double threshold = (1.0 - drop_fraction) * yield.stress;
    const double secant = yield.strain > 0.0 ? yield.stress / yield.strain
                                             : std::numeric_limits<double>::infinity();
    const double steep = -kSteepFraction * secant;
    for (auto i = static_cast<Eigen::Index>(yield.index) + 1; i <= last; ++i) {
        if (!(curve.stress[i] < threshold)) continue;
        const double ds = curve.stress[i] - curve.stress[i - 1];
        const double de = curve.strain[i] - curve.strain[i - 1];
        const bool is_steep = de > 0.0 ? ds / de <= steep : ds < 0.0;
        if (is_steep) return point(i, FractureRule::Threshold);
    }
    return point(last, FractureRule::Fallback);
}

void CompressionProperties::validate() const {
    if (!(youngs_modulus > 0.0 && yield_stress > 0.0 && fracture_stress > 0.0 && yield_strain > 0.0 &&
          fracture_strain > 0.0))
        throw ValidationError("extracted properties must all be positive");
    if (fracture_strain < yield_strain) throw ValidationError("fracture strain precedes yield strain");
}

ExtractionResult extract_properties(const RawTestRecord& record, const ExtractionOptions& opts) {
    auto stage = [](const char* name, auto&& fn) -> decltype(fn()) {
        try {
            return fn();
        } catch (Error& e) {
            e.set_stage(name);
            throw;
        }
    };

    ExtractionResult out;
    const StressStrainCurve raw = stage("to_stress_strain", [&] { return to_stress_strain(record); });
    out.noise_sigma = opts.estimate_noise ? estimate_noise_sigma(raw.stress) : 0.0;
    const StressStrainCurve smoothed = stage("smooth", [&] { return smooth(raw, opts.smoothing_window); });
    const double smoothed_sigma = out.noise_sigma / std::sqrt(static_cast<double>(opts.smoothing_window));

    out.yield = stage("detect_yield", [&] {
        YieldOptions yo;
        yo.tolerance = opts.yield_tolerance;
        yo.noise_sigma = smoothed_sigma;
        YieldPoint y = detect_yield(smoothed, yo);
        // Moving averages shift asymmetric peaks by up to half a window;
        // re-locate the maximum on the unsmoothed samples.
        const auto half = static_cast<std::size_t>(opts.smoothing_window / 2);
        const std::size_t lo = y.index >= half ? y.index - half : 0;
        const std::size_t hi = std::min(raw.size() - 1, y.index + half);
        std::size_t best = y.index;
        for (std::size_t k = lo; k <= hi; ++k)
            if (raw.stress[static_cast<Eigen::Index>(k)] > raw.stress[static_cast<Eigen::Index>(best)]) best = k;
        return YieldPoint{best, raw.strain[static_cast<Eigen::Index>(best)],
                          smoothed.stress[static_cast<Eigen::Index>(best)]};
    });

    LinearRegionOptions lo;
    lo.min_r2 = opts.min_r2;
    lo.noise_variance = smoothed_sigma * smoothed_sigma;
    lo.search_end = out.yield.index;
    out.region = stage("detect_linear_region", [&] {
        return refine_linear_region(smoothed, detect_linear_region(smoothed, lo), smoothed_sigma, lo.min_points);
    });
    const StressStrainCurve compensated =
        stage("toe_compensate", [&] { return toe_compensate(smoothed, out.region.fit); });
    out.toe_offset = compensated.toe_offset;
    out.region.fit = fit_line(compensated, out.region.range);
    out.region.toe_compensated = true;

    const double modulus = stage("youngs_modulus", [&] { return youngs_modulus(compensated, out.region.range); });
    out.endpoint_ratio_modulus =
        stage("youngs_modulus", [&] { return endpoint_ratio_modulus(compensated, out.region.range); });

    out.fracture = stage("detect_fracture", [&] { return detect_fracture(smoothed, out.yield, opts.drop_fraction); });

    out.properties = {modulus, out.yield.stress, out.fracture.stress, out.yield.strain, out.fracture.strain};
    stage("properties", [&] { out.properties.validate(); });
    return out;
}

Stat mean_and_std(std::span<const double> values) {
    if (values.empty()) throw DomainError("cannot aggregate an empty list");
    const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
    Stat s;
    s.mean = v.mean();
    if (values.size() > 1)
        s.std_dev = std::sqrt((v.array() - s.mean).square().sum() / static_cast<double>(values.size() - 1));
    return s;
}

AggregateStats aggregate(std::span<const CompressionProperties> props) {
    if (props.empty()) throw DomainError("cannot aggregate an empty list");
    auto column = [&](double CompressionProperties::*field) {
        std::vector<double> v;
        v.reserve(props.size());
        for (const auto& p : props) v.push_back(p.*field);
        return mean_and_std(v);
    };
    AggregateStats a;
    a.youngs_modulus = column(&CompressionProperties::youngs_modulus);
    a.yield_stress = column(&CompressionProperties::yield_stress);
    a.fracture_stress = column(&CompressionProperties::fracture_stress);
    a.yield_strain = column(&CompressionProperties::yield_strain);
    a.fracture_strain = column(&CompressionProperties::fracture_strain);
    a.n = props.size();
    return a;
}

PrototypeFeatures prototype_features(const RawTestRecord& record, double drop_fraction) {
    if (record.samples.size() < kMinSamples)
        throw DomainError("prototype record needs at least " + std::to_string(kMinSamples) + " samples");
    record.validate();

    const auto n = static_cast<Eigen::Index>(record.samples.size());
    StressStrainCurve fd;
    fd.strain.resize(n);
    fd.stress.resize(n);
    fd.end = record.end;
    for (Eigen::Index i = 0; i < n; ++i) {
        fd.strain[i] = record.samples[static_cast<std::size_t>(i)].displacement;
        fd.stress[i] = record.samples[static_cast<std::size_t>(i)].force;
    }
    Eigen::Index imax = 0;
    fd.stress.maxCoeff(&imax);
    const YieldPoint peak{static_cast<std::size_t>(imax), fd.strain[imax], fd.stress[imax]};
    const FracturePoint f = detect_fracture(fd, peak, drop_fraction);

    PrototypeFeatures out{peak.stress, peak.strain, f.stress, f.strain, f.rule};
    if (!(out.fracture_force > 0.0)) throw ValidationError("fracture force must be positive");
    return out;
}

}  // namespace rpet
