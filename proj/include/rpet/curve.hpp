#pragma once

// Reduction of uniaxial compression records: force/displacement samples to
// nominal stress/strain, elastic-region detection, modulus, yield and
// fracture extraction, and per-configuration statistics.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rpet/core_model.hpp"

namespace rpet {

struct ForceSample {
    double displacement = 0.0;  // mm
    double force = 0.0;         // N
};

/// How the record terminates.  A machine stop means the last sample is the
/// failure point; a continued record may carry a post-failure tail.
enum class EndCondition { Unknown, MachineStop, Continued };

std::string to_string(EndCondition e);
EndCondition parse_end_condition(std::string_view s);

/// Displacement reversals up to this size (mm) are tolerated as machine jitter.
inline constexpr double kDisplacementJitter = 1e-3;
inline constexpr std::size_t kMinSamples = 10;

struct RawTestRecord {
    std::vector<ForceSample> samples;
    SpecimenGeometry geometry = kNominalSpecimen;
    PrintConfig config;
    std::string label;
    EndCondition end = EndCondition::Unknown;

    /// >= 10 samples, finite forces, first displacement >= 0, displacements
    /// non-decreasing up to kDisplacementJitter.  Throws ValidationError.
    void validate() const;
};

struct StressStrainCurve {
    Eigen::VectorXd strain;  // mm/mm
    Eigen::VectorXd stress;  // MPa
    double toe_offset = 0.0;
    EndCondition end = EndCondition::Unknown;

    std::size_t size() const noexcept { return static_cast<std::size_t>(strain.size()); }
};

struct IndexRange {
    std::size_t start = 0;
    std::size_t end = 0;  // inclusive

    std::size_t count() const noexcept { return end - start + 1; }
};

// -- test speed ---------------------------------------------------------------

struct TestSpeed {
    double mm_per_min = 0.0;
    bool compliant = false;  // inside 1.3 +/- 0.3 mm/min
};

inline constexpr double kSpeedBandLow = 1.0;
inline constexpr double kSpeedBandHigh = 1.6;

/// Crosshead speed 0.02 * L_s.  DomainError for L_s <= 0.
TestSpeed compute_test_speed(double specimen_height);

// -- reduction ----------------------------------------------------------------

/// sigma = F / (pi d^2 / 4), eps = dL / L_s, one point per sample.
StressStrainCurve to_stress_strain(const RawTestRecord& record);

/// Centered moving average of stress.  Windows shrink symmetrically at the
/// ends.  `window` must be odd and no larger than the curve.
StressStrainCurve smooth(const StressStrainCurve& curve, int window);

/// Robust estimate of the per-sample white-noise level of `values` from the
/// median absolute deviation of second differences.  Zero for piecewise-linear
/// data.
double estimate_noise_sigma(const Eigen::VectorXd& values);

// -- elastic region -----------------------------------------------------------

struct LinearRegionOptions {
    double min_r2 = 0.9999;
    std::size_t min_points = 10;
    double min_span_fraction = 0.1;  // of the yield strain estimate
    /// Per-point noise variance of the curve (MPa^2).  Noise-explained
    /// residual is excused from the lack-of-fit test when positive.
    double noise_variance = 0.0;
    /// Plain R^2 every window must still reach when noise_variance > 0.
    double noisy_r2_floor = 0.99;
    /// Last index searched; defaults to the stress maximum.
    std::size_t search_end = std::numeric_limits<std::size_t>::max();
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct LinearRegion {
    IndexRange range;
    LinearFit fit;
    bool toe_compensated = false;
};

/// Least-squares line of stress on strain over `range`.
LinearFit fit_line(const StressStrainCurve& curve, IndexRange range);

/// Longest contiguous window on the ascending branch whose least-squares
/// line meets the R^2 test, with >= min_points points and a strain span of at
/// least min_span_fraction of the strain at search_end.  Ties go to the
/// smaller start index.  DetectionError (carrying the best R^2 seen) when no
/// window qualifies.
LinearRegion detect_linear_region(const StressStrainCurve& curve, const LinearRegionOptions& opts = {});

/// Drops end samples, the worse end first, while an end of the window sits
/// off the refitted line by more than 3 noise_sigma (1e-8 of the stress span
/// for clean data).  Long windows pass the R^2 test with a short toe or a
/// rounded peak still attached; both bias the slope low.
LinearRegion refine_linear_region(const StressStrainCurve& curve, LinearRegion region, double noise_sigma = 0.0,
                                  std::size_t min_points = 10);

/// Shift strains so the fitted elastic line passes through the origin;
/// strains are clamped at zero and the shift accumulates in toe_offset.
StressStrainCurve toe_compensate(const StressStrainCurve& curve, const LinearRegionOptions& opts = {});
StressStrainCurve toe_compensate(const StressStrainCurve& curve, const LinearFit& elastic_fit);

/// Least-squares slope over `range`.  DomainError for an empty or
/// zero-strain-span range.
double youngs_modulus(const StressStrainCurve& curve, IndexRange range);

/// Two-endpoint secant over `range`; emitted next to the fitted slope for audit.
double endpoint_ratio_modulus(const StressStrainCurve& curve, IndexRange range);

// -- yield and fracture -------------------------------------------------------

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

struct YieldOptions {
    double tolerance = 1e-3;   // relative, "stops increasing"
    double noise_sigma = 0.0;  // per-point noise of the curve given
    double noise_band = 8.0;   // multiples of noise_sigma counted as flat
};

struct YieldPoint {
    std::size_t index = kNoIndex;
    double strain = 0.0;
    double stress = 0.0;

    bool detected() const noexcept { return index != kNoIndex; }
};

/// First local maximum of stress: the first sample after which stress drops
/// by more than the tolerance band before it rises by more than it.  The
/// reported index is the first sample within the band of that maximum, so a
/// plateau reports its start.  DetectionError when the curve never turns down.
YieldPoint detect_yield(const StressStrainCurve& curve, const YieldOptions& opts = {});

enum class FractureRule {
    Terminal,   // record ended by machine stop
    Threshold,  // stress below (1 - drop) * yield with a steep negative slope
    Fallback,   // threshold never met, last sample
};

std::string to_string(FractureRule r);

struct FracturePoint {
    std::size_t index = kNoIndex;
    double strain = 0.0;
    double stress = 0.0;
    FractureRule rule = FractureRule::Fallback;
};

inline constexpr double kDefaultDropFraction = 0.25;
/// A post-yield slope counts as steep below -kSteepFraction * (sigma_y / eps_y).
inline constexpr double kSteepFraction = 0.1;

/// OrderingError when `yield` was not detected; DomainError for a drop
/// fraction outside (0, 1).
FracturePoint detect_fracture(const StressStrainCurve& curve, const YieldPoint& yield,
                              double drop_fraction = kDefaultDropFraction);

// -- properties ---------------------------------------------------------------

struct CompressionProperties {
    double youngs_modulus = 0.0;    // MPa
    double yield_stress = 0.0;      // MPa
    double fracture_stress = 0.0;   // MPa
    double yield_strain = 0.0;      // mm/mm
    double fracture_strain = 0.0;   // mm/mm

    /// All positive and fracture_strain >= yield_strain.
    void validate() const;
};

struct ExtractionOptions {
    int smoothing_window = 5;
    double min_r2 = 0.9999;
    double drop_fraction = kDefaultDropFraction;
    double yield_tolerance = 1e-3;
    bool estimate_noise = true;
};

struct ExtractionResult {
    CompressionProperties properties;
    double endpoint_ratio_modulus = 0.0;
    double toe_offset = 0.0;
    double noise_sigma = 0.0;
    LinearRegion region;
    YieldPoint yield;
    FracturePoint fracture;
};

/// to_stress_strain -> smooth -> yield -> elastic region -> toe offset ->
/// modulus -> fracture.  Strains are reported on the measured axis; the toe
/// offset is reported separately.  Stage errors carry the stage name.
ExtractionResult extract_properties(const RawTestRecord& record, const ExtractionOptions& opts = {});

struct Stat {
    double mean = 0.0;
    double std_dev = 0.0;  // sample (n - 1) standard deviation, 0 for n = 1
};

struct AggregateStats {
    Stat youngs_modulus;
    Stat yield_stress;
    Stat fracture_stress;
    Stat yield_strain;
    Stat fracture_strain;
    std::size_t n = 0;
};

/// DomainError on an empty list.
AggregateStats aggregate(std::span<const CompressionProperties> props);

Stat mean_and_std(std::span<const double> values);

// -- prototypes ---------------------------------------------------------------

struct PrototypeFeatures {
    double max_force = 0.0;                 // F_max, N
    double displacement_at_max = 0.0;       // mm
    double fracture_force = 0.0;            // F_fc, N
    double fracture_displacement = 0.0;     // mm
    FractureRule rule = FractureRule::Fallback;
};

/// Peak force and fracture sample of a force/displacement record, located
/// with the same fracture rule as specimen curves but without normalization.
PrototypeFeatures prototype_features(const RawTestRecord& record, double drop_fraction = kDefaultDropFraction);

}  // namespace rpet
