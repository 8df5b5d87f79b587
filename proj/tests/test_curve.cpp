#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "rpet/curve.hpp"
#include "rpet/curve_io.hpp"
#include "rpet/error.hpp"

using namespace rpet;

namespace {

StressStrainCurve curve_from(std::vector<double> strain, std::vector<double> stress) {
    StressStrainCurve c;
    c.strain = Eigen::Map<Eigen::VectorXd>(strain.data(), static_cast<Eigen::Index>(strain.size()));
    c.stress = Eigen::Map<Eigen::VectorXd>(stress.data(), static_cast<Eigen::Index>(stress.size()));
    return c;
}

StressStrainCurve line(std::size_t n, double slope, double strain_step, double strain_offset = 0.0) {
    std::vector<double> e(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = strain_offset + strain_step * static_cast<double>(i);
        s[i] = slope * strain_step * static_cast<double>(i);
    }
    return curve_from(e, s);
}

// Elastic up to (ey, sy), then linear softening with slope `soft` to ef.
StressStrainCurve peak_curve(double E, double sy, double ey, double soft, double ef, std::size_t n) {
    std::vector<double> e(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = ef * static_cast<double>(i) / static_cast<double>(n - 1);
        s[i] = e[i] <= ey ? sy - E * (ey - e[i]) : sy + soft * (e[i] - ey);
    }
    return curve_from(e, s);
}

RawTestRecord record_from(const std::vector<std::pair<double, double>>& pts) {
    RawTestRecord r;
    for (auto [d, f] : pts) r.samples.push_back({d, f});
    r.label = "r";
    return r;
}

}  // namespace

// -- test speed ---------------------------------------------------------------

TEST(ComputeTestSpeed, NominalHeightIsCompliant) {
    const auto s = compute_test_speed(50.8);
    EXPECT_NEAR(s.mm_per_min, 1.016, 1e-12);
    EXPECT_TRUE(s.compliant);
}

TEST(ComputeTestSpeed, BandEdges) {
    EXPECT_NEAR(compute_test_speed(65.0).mm_per_min, 1.30, 1e-12);
    EXPECT_TRUE(compute_test_speed(65.0).compliant);
    EXPECT_NEAR(compute_test_speed(40.0).mm_per_min, 0.80, 1e-12);
    EXPECT_FALSE(compute_test_speed(40.0).compliant);
    EXPECT_FALSE(compute_test_speed(81.0).compliant);
    EXPECT_THROW(compute_test_speed(0.0), DomainError);
    EXPECT_THROW(compute_test_speed(-5.0), DomainError);
}

// -- reduction ----------------------------------------------------------------

TEST(ToStressStrain, ArithmeticExamples) {
    auto r = record_from({{0.0, 126.677}, {0.508, 0.0}});
    for (int i = 2; i < 10; ++i) r.samples.push_back({0.508 + i * 0.01, 10.0});
    const auto c = to_stress_strain(r);
    const double area = M_PI * 12.7 * 12.7 / 4.0;
    EXPECT_NEAR(c.stress[0], 126.677 / area, 1e-12);
    EXPECT_NEAR(c.stress[0], 1.000, 1e-5);
    EXPECT_EQ(c.strain[0], 0.0);
    EXPECT_NEAR(c.strain[1], 0.010, 1e-15);
    EXPECT_EQ(c.size(), r.samples.size());
}

TEST(ToStressStrain, ForceScalingScalesStressOnly) {
    RawTestRecord r;
    for (int i = 0; i < 20; ++i) r.samples.push_back({0.05 * i, 37.0 * i + 0.3 * i * i});
    RawTestRecord k = r;
    for (auto& s : k.samples) s.force *= 3.0;
    const auto a = to_stress_strain(r), b = to_stress_strain(k);
    for (Eigen::Index i = 0; i < a.stress.size(); ++i) {
        EXPECT_EQ(b.stress[i], (3.0 * r.samples[i].force) / kNominalSpecimen.area());
        EXPECT_EQ(a.strain[i], b.strain[i]);
    }
}

TEST(ToStressStrain, RejectsBadRecords) {
    RawTestRecord r;
    for (int i = 0; i < 12; ++i) r.samples.push_back({0.1 * i, 10.0 * i});
    r.geometry.diameter = 0.0;
    EXPECT_THROW(to_stress_strain(r), DomainError);
    r.geometry = kNominalSpecimen;
    r.samples[5].displacement = 0.3;  // reverses by 0.1 mm
    EXPECT_THROW(to_stress_strain(r), ValidationError);
    r.samples[5].displacement = 0.5 - 0.0005;  // within jitter
    EXPECT_NO_THROW(to_stress_strain(r));
    r.samples.resize(5);
    EXPECT_THROW(to_stress_strain(r), ValidationError);
}

TEST(Smooth, IdentityCases) {
    const auto c = line(30, 1000.0, 1e-3);
    const auto w1 = smooth(c, 1);
    EXPECT_EQ(w1.stress, c.stress);
    auto flat = c;
    flat.stress.setConstant(12.5);
    for (int w : {3, 5, 7}) {
        const auto s = smooth(flat, w);
        for (Eigen::Index i = 0; i < s.stress.size(); ++i) EXPECT_NEAR(s.stress[i], 12.5, 1e-12);
        EXPECT_EQ(s.strain, flat.strain);
    }
}

TEST(Smooth, AlternatingNoiseReducedByTwoThirds) {
    auto c = line(41, 800.0, 1e-3);
    const Eigen::VectorXd clean = c.stress;
    for (Eigen::Index i = 0; i < c.stress.size(); ++i) c.stress[i] += (i % 2 ? -1.0 : 1.0);
    const auto s = smooth(c, 3);
    // Interior points average three residuals (+1, -1, +1) -> 1/3.  The two
    // end samples keep a one-point window under the symmetric shrink rule.
    double worst = 0.0;
    for (Eigen::Index i = 1; i + 1 < s.stress.size(); ++i) worst = std::max(worst, std::abs(s.stress[i] - clean[i]));
    EXPECT_LE(worst, 1.0 / 3.0 + 1e-12);
}

TEST(Smooth, RejectsBadWindows) {
    const auto c = line(12, 1.0, 1.0);
    EXPECT_THROW(smooth(c, 4), DomainError);
    EXPECT_THROW(smooth(c, 13), DomainError);
    EXPECT_THROW(smooth(c, 0), DomainError);
}

TEST(EstimateNoiseSigma, ZeroOnPiecewiseLinearAndCalibratedOnGaussian) {
    const auto c = peak_curve(1700.0, 60.0, 0.04, -500.0, 0.08, 400);
    EXPECT_LT(estimate_noise_sigma(c.stress), 1e-3);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 0.5);
    Eigen::VectorXd v = line(20000, 1000.0, 1e-5).stress;
    for (auto& x : v) x += g(rng);
    EXPECT_NEAR(estimate_noise_sigma(v), 0.5, 0.025);
}

// -- elastic region -----------------------------------------------------------

TEST(DetectLinearRegion, ExactLineUsesEverything) {
    const auto r = detect_linear_region(line(100, 1743.5, 4e-4));
    EXPECT_EQ(r.range.start, 0u);
    EXPECT_EQ(r.range.end, 99u);
    EXPECT_NEAR(r.fit.slope, 1743.5, 1e-9);
    EXPECT_NEAR(r.fit.r2, 1.0, 1e-12);
}

TEST(DetectLinearRegion, BilinearStaysOnFirstBranch) {
    // Rising branch to index 50, softening branch after it.
    std::vector<double> e(100), s(100);
    for (int i = 0; i < 100; ++i) {
        e[i] = 1e-3 * i;
        s[i] = i <= 50 ? 1000.0 * e[i] : 50.0 - 400.0 * (e[i] - 0.05);
    }
    const auto r = detect_linear_region(curve_from(e, s));
    EXPECT_LE(r.range.end, 50u);
    EXPECT_GE(r.range.count(), 10u);
    EXPECT_NEAR(r.fit.slope, 1000.0, 1e-6);
}

TEST(DetectLinearRegion, AscendingKinkOvershootsByOneSampleAtMost) {
    // One sample past a slope change cannot pull R^2 of a 52-point window
    // below 0.9999; two can.
    std::vector<double> e(100), s(100);
    for (int i = 0; i < 100; ++i) {
        e[i] = 1e-3 * i;
        s[i] = i <= 50 ? 1000.0 * e[i] : 50.0 + 100.0 * (e[i] - 0.05);
    }
    const auto r = detect_linear_region(curve_from(e, s));
    EXPECT_LE(r.range.end, 51u);
    EXPECT_NEAR(r.fit.slope, 1000.0, 10.0);
}

TEST(DetectLinearRegion, WhiteNoiseFails) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(10.0, 1.0);
    std::vector<double> e(200), s(200);
    for (int i = 0; i < 200; ++i) {
        e[i] = 1e-4 * i;
        s[i] = g(rng);
    }
    try {
        LinearRegionOptions o;
        o.search_end = 199;
        detect_linear_region(curve_from(e, s), o);
        FAIL() << "expected a detection error";
    } catch (const DetectionError& err) {
        EXPECT_LT(err.best_r2, 0.9999);
        EXPECT_EQ(err.kind(), ErrorKind::Detection);
    }
}

TEST(DetectLinearRegion, IgnoresSofteningBranch) {
    // A long straight softening branch must not win over the rising one.
    const auto c = peak_curve(1500.0, 45.0, 0.03, -300.0, 0.12, 401);
    const auto r = detect_linear_region(c);
    EXPECT_GT(r.fit.slope, 0.0);
    EXPECT_NEAR(r.fit.slope, 1500.0, 1e-6);
}

TEST(ToeCompensate, IdentityOnLineThroughOrigin) {
    const auto c = line(50, 1200.0, 1e-3);
    const auto t = toe_compensate(c);
    EXPECT_NEAR(t.toe_offset, 0.0, 1e-15);
    for (Eigen::Index i = 0; i < c.strain.size(); ++i) EXPECT_NEAR(t.strain[i], c.strain[i], 1e-15);
    EXPECT_EQ(t.stress, c.stress);
}

TEST(ToeCompensate, RemovesKnownShift) {
    const auto c = line(50, 1200.0, 1e-3, 0.002);
    const auto t = toe_compensate(c);
    EXPECT_NEAR(t.toe_offset, 0.002, 1e-12);
    for (Eigen::Index i = 0; i < c.strain.size(); ++i) EXPECT_NEAR(t.strain[i], 1e-3 * i, 1e-12);
}

TEST(ToeCompensate, TooFewPoints) { EXPECT_THROW(toe_compensate(line(5, 1.0, 1.0)), DetectionError); }

TEST(RefineLinearRegion, DropsKinkedToe) {
    // Toe of slope 1000 over 30 samples, then slope 1500 for 400 samples.
    const double h = 1e-4;
    std::vector<double> e(430), s(430);
    for (std::size_t i = 0; i < 430; ++i) {
        e[i] = h * static_cast<double>(i);
        s[i] = i < 30 ? 1000.0 * e[i] : 1000.0 * 30 * h + 1500.0 * (e[i] - 30 * h);
    }
    const auto c = curve_from(e, s);
    const auto coarse = detect_linear_region(c);
    EXPECT_LT(coarse.range.start, 29u);
    EXPECT_LT(coarse.fit.slope, 1500.0 * (1 - 1e-4));
    const auto r = refine_linear_region(c, coarse);
    EXPECT_GE(r.range.start, 29u);
    EXPECT_EQ(r.range.end, 429u);
    EXPECT_NEAR(r.fit.slope, 1500.0, 1e-9);
}

TEST(RefineLinearRegion, LeavesNoisyLineAlone) {
    auto c = line(400, 1600.0, 1e-4);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 0.1);
    for (Eigen::Index i = 0; i < c.stress.size(); ++i) c.stress[i] += g(rng);
    LinearRegion whole;
    whole.range = {0, 399};
    const auto r = refine_linear_region(c, whole, 0.1);
    EXPECT_LE(r.range.start, 2u);
    EXPECT_GE(r.range.end, 397u);
}

TEST(RefineLinearRegion, KeepsMinimumPoints) {
    const auto c = peak_curve(1500.0, 60.0, 0.04, -800.0, 0.06, 61);
    LinearRegion whole;
    whole.range = {0, 60};
    const auto r = refine_linear_region(c, whole, 0.0, 10);
    EXPECT_GE(r.range.count(), 10u);
}

TEST(YoungsModulus, SlopeOfLine) {
    const auto c = line(200, 1743.5, 2e-4);
    EXPECT_NEAR(youngs_modulus(c, {0, 199}), 1743.5, 1743.5 * 1e-3);
    EXPECT_NEAR(youngs_modulus(line(10, 1.0, 1.0), {0, 9}), 1.0, 1e-14);
    EXPECT_NEAR(endpoint_ratio_modulus(c, {0, 199}), youngs_modulus(c, {0, 199}), 1e-8);
}

TEST(YoungsModulus, OffsetAndStrideInvariant) {
    auto c = line(120, 1630.0, 3e-4);
    const double base = youngs_modulus(c, {0, 119});
    c.stress.array() += 7.25;
    EXPECT_NEAR(youngs_modulus(c, {0, 119}), base, 1e-8);
    std::vector<double> e, s;
    for (Eigen::Index i = 0; i < c.strain.size(); i += 7) {
        e.push_back(c.strain[i]);
        s.push_back(c.stress[i]);
    }
    const auto sub = curve_from(e, s);
    EXPECT_NEAR(youngs_modulus(sub, {0, sub.size() - 1}), base, 1e-8);
}

TEST(YoungsModulus, DegenerateSpan) {
    auto c = line(10, 1.0, 1.0);
    c.strain.setConstant(0.5);
    EXPECT_THROW(youngs_modulus(c, {0, 9}), DomainError);
    EXPECT_THROW(endpoint_ratio_modulus(c, {0, 9}), DomainError);
}

// -- yield and fracture -------------------------------------------------------

TEST(DetectYield, PeakOfSyntheticCurve) {
    const std::size_t n = 801;
    const auto c = peak_curve(1743.5, 61.65, 0.038, -511.0, 0.076, n);
    const double h = 0.076 / (n - 1);
    const auto y = detect_yield(c);
    ASSERT_TRUE(y.detected());
    EXPECT_LE(std::abs(y.strain - 0.038), h);
    EXPECT_NEAR(y.stress, 61.65, 61.65 * 1e-3);
}

TEST(DetectYield, StrictlyIncreasingHasNoYield) {
    EXPECT_THROW(detect_yield(line(100, 1000.0, 1e-3)), DetectionError);
}

TEST(DetectYield, PlateauReportsItsStart) {
    std::vector<double> e, s;
    for (int i = 0; i < 20; ++i) s.push_back(2.0 * i);
    for (int i = 0; i < 4; ++i) s.push_back(38.0);  // samples 19..23 equal
    for (int i = 1; i <= 10; ++i) s.push_back(38.0 - 3.0 * i);
    for (std::size_t i = 0; i < s.size(); ++i) e.push_back(1e-3 * i);
    const auto y = detect_yield(curve_from(e, s));
    EXPECT_EQ(y.index, 19u);
    EXPECT_EQ(y.stress, 38.0);
}

TEST(DetectFracture, MachineStopUsesLastSample) {
    auto c = peak_curve(1743.5, 61.65, 0.038, (42.21 - 61.65) / (0.076 - 0.038), 0.076, 761);
    c.end = EndCondition::MachineStop;
    const auto f = detect_fracture(c, detect_yield(c));
    EXPECT_EQ(f.rule, FractureRule::Terminal);
    EXPECT_NEAR(f.strain, 0.076, 1e-15);
    EXPECT_NEAR(f.stress, 42.21, 1e-9);
}

TEST(DetectFracture, FallbackWhenThresholdNeverReached) {
    const auto c = peak_curve(1500.0, 40.0, 0.03, -100.0, 0.09, 300);
    const auto f = detect_fracture(c, detect_yield(c));
    EXPECT_EQ(f.rule, FractureRule::Fallback);
    EXPECT_EQ(f.index, c.size() - 1);
}

TEST(DetectFracture, ThresholdOnSteepSoftening) {
    const std::size_t n = 1001;
    const auto c = peak_curve(1743.5, 61.65, 0.038, -500.0, 0.1, n);
    const auto f = detect_fracture(c, detect_yield(c), 0.25);
    EXPECT_EQ(f.rule, FractureRule::Threshold);
    const double threshold = 0.75 * 61.65;  // 46.2375
    EXPECT_LT(f.stress, threshold);
    EXPECT_GE(c.stress[static_cast<Eigen::Index>(f.index) - 1], threshold);
}

TEST(DetectFracture, OrderingAndDomainErrors) {
    const auto c = peak_curve(1500.0, 40.0, 0.03, -500.0, 0.09, 300);
    EXPECT_THROW(detect_fracture(c, YieldPoint{}), OrderingError);
    const auto y = detect_yield(c);
    EXPECT_THROW(detect_fracture(c, y, 0.0), DomainError);
    EXPECT_THROW(detect_fracture(c, y, 1.0), DomainError);
}

TEST(ExtractProperties, RejectsNonMonotoneRecord) {
    RawTestRecord r;
    for (int i = 0; i < 50; ++i) r.samples.push_back({0.05 * i, 100.0 * i});
    r.samples[20].displacement = 0.2;
    try {
        extract_properties(r);
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_FALSE(e.stage().empty());
    }
}

// -- statistics ---------------------------------------------------------------

TEST(Aggregate, IdenticalQuintets) {
    const CompressionProperties p{1743.5, 61.65, 42.21, 0.038, 0.076};
    const std::vector<CompressionProperties> v(6, p);
    const auto a = aggregate(v);
    EXPECT_EQ(a.n, 6u);
    EXPECT_NEAR(a.youngs_modulus.mean, 1743.5, 1e-9);
    EXPECT_NEAR(a.fracture_strain.mean, 0.076, 1e-15);
    EXPECT_NEAR(a.youngs_modulus.std_dev, 0.0, 1e-9);
    EXPECT_NEAR(a.yield_strain.std_dev, 0.0, 1e-15);
}

TEST(Aggregate, TwoPointClosedForm) {
    const std::vector<double> e{1740.0, 1747.0};
    const auto s = mean_and_std(e);
    EXPECT_DOUBLE_EQ(s.mean, 1743.5);
    EXPECT_NEAR(s.std_dev, std::sqrt(2.0 * 3.5 * 3.5), 1e-12);
    EXPECT_NEAR(s.std_dev, 4.9497, 1e-4);
    const std::vector<double> one{3.0};
    EXPECT_EQ(mean_and_std(one).std_dev, 0.0);
}

TEST(Aggregate, EmptyAndMeanAppendInvariance) {
    EXPECT_THROW(aggregate(std::vector<CompressionProperties>{}), DomainError);
    std::vector<CompressionProperties> v{{1700, 60, 40, 0.037, 0.07}, {1800, 62, 44, 0.039, 0.09},
                                         {1750, 61, 41, 0.038, 0.08}};
    const auto a = aggregate(v);
    v.push_back({a.youngs_modulus.mean, a.yield_stress.mean, a.fracture_stress.mean, a.yield_strain.mean,
                 a.fracture_strain.mean});
    const auto b = aggregate(v);
    EXPECT_NEAR(b.youngs_modulus.mean, a.youngs_modulus.mean, 1e-9);
    EXPECT_NEAR(b.fracture_strain.mean, a.fracture_strain.mean, 1e-15);
}

// -- prototypes ---------------------------------------------------------------

TEST(PrototypeFeatures, ConstructedRecordRecoversCorners) {
    RawTestRecord r;
    for (int i = 0; i <= 40; ++i) r.samples.push_back({2.896 * i / 40.0, 6532.0 * i / 40.0});
    for (int i = 1; i <= 20; ++i)
        r.samples.push_back({2.896 + (4.481 - 2.896) * i / 20.0, 6532.0 + (3166.0 - 6532.0) * i / 20.0});
    r.end = EndCondition::MachineStop;
    const auto f = prototype_features(r);
    EXPECT_EQ(f.max_force, 6532.0);
    EXPECT_EQ(f.displacement_at_max, 2.896);
    EXPECT_NEAR(f.fracture_force, 3166.0, 1e-9);
    EXPECT_NEAR(f.fracture_displacement, 4.481, 1e-12);
    EXPECT_GE(f.max_force, f.fracture_force);
    EXPECT_GE(f.fracture_displacement, f.displacement_at_max);

    auto doubled = r;
    for (auto& s : doubled.samples) s.force *= 2.0;
    const auto g = prototype_features(doubled);
    EXPECT_EQ(g.max_force, 2.0 * f.max_force);
    EXPECT_NEAR(g.fracture_force, 2.0 * f.fracture_force, 1e-9);
    EXPECT_EQ(g.displacement_at_max, f.displacement_at_max);
    EXPECT_EQ(g.fracture_displacement, f.fracture_displacement);
}

TEST(PrototypeFeatures, MonotoneRampFallsBackToLastSample) {
    RawTestRecord r;
    for (int i = 0; i < 30; ++i) r.samples.push_back({0.1 * i, 200.0 * i + 1.0});
    const auto f = prototype_features(r);
    EXPECT_EQ(f.max_force, r.samples.back().force);
    EXPECT_EQ(f.fracture_force, f.max_force);
    EXPECT_EQ(f.rule, FractureRule::Fallback);
}

TEST(PrototypeFeatures, TooFewSamples) {
    RawTestRecord r;
    for (int i = 0; i < 9; ++i) r.samples.push_back({0.1 * i, 10.0 * i});
    EXPECT_THROW(prototype_features(r), DomainError);
}

// -- file formats -------------------------------------------------------------

TEST(CurveIo, RecordRoundTrip) {
    RawTestRecord r;
    for (int i = 0; i < 15; ++i) r.samples.push_back({0.0123 * i, 1.0 / 3.0 * i * i});
    r.geometry = {12.53, 50.37};
    r.config = {PrintAxis::Z, InfillPattern::Cross45};
    r.label = "z45_1";
    r.end = EndCondition::MachineStop;
    const auto dir = std::filesystem::temp_directory_path() / "rpet_test_curve_io";
    std::filesystem::create_directories(dir);
    write_record(r, dir / "a.csv", dir / "a.json");
    const auto back = read_record(dir / "a.csv", default_sidecar(dir / "a.csv"));
    ASSERT_EQ(back.samples.size(), r.samples.size());
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        EXPECT_EQ(back.samples[i].displacement, r.samples[i].displacement);
        EXPECT_EQ(back.samples[i].force, r.samples[i].force);
    }
    EXPECT_EQ(back.geometry.diameter, 12.53);
    EXPECT_EQ(back.config, r.config);
    EXPECT_EQ(back.label, "z45_1");
    EXPECT_EQ(back.end, EndCondition::MachineStop);
    std::filesystem::remove_all(dir);
}

TEST(CurveIo, CsvErrors) {
    EXPECT_THROW(parse_record_csv("force,displacement\n1,2\n"), ParseError);
    EXPECT_THROW(parse_record_csv("displacement_mm,force_N\n1,abc\n"), ParseError);
    EXPECT_THROW(parse_record_csv("displacement_mm,force_N\n1,2,3\n"), ParseError);
    EXPECT_THROW(parse_record_csv(""), ParseError);
    EXPECT_EQ(parse_record_csv("displacement_mm,force_N\r\n0,0\r\n0.5,10\r\n").size(), 2u);
    RawTestRecord r;
    EXPECT_THROW(apply_sidecar(R"({"diameter_mm": 12.7})", r), ParseError);
    EXPECT_THROW(apply_sidecar(R"({"diameter_mm":12.7,"height_mm":50.8,"axis":"q","pattern":"zigzag"})", r),
                 ValidationError);
    EXPECT_THROW(read_record("/nonexistent.csv", "/nonexistent.json"), IoError);
}

TEST(CurveIo, AggregateMergesZCrossPatterns) {
    std::vector<PropertiesFile> files{
        {"a", {PrintAxis::Z, InfillPattern::Cross45}, {2000, 37, 51, 0.033, 0.07}},
        {"b", {PrintAxis::Z, InfillPattern::Cross90}, {2100, 38, 52, 0.034, 0.05}},
        {"c", {PrintAxis::XY, InfillPattern::Concentric}, {1743.5, 61.65, 42.21, 0.038, 0.076}},
    };
    const auto rows = aggregate_by_config(files);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].config, (PrintConfig{PrintAxis::XY, InfillPattern::Concentric}));
    EXPECT_EQ(rows[1].config, (PrintConfig{PrintAxis::Z, InfillPattern::Cross90}));
    EXPECT_EQ(rows[1].stats.n, 2u);
    EXPECT_DOUBLE_EQ(rows[1].stats.youngs_modulus.mean, 2050.0);
    const auto csv = format_aggregate_csv(rows);
    EXPECT_NE(csv.find("z:cross45 specimens are merged into z:cross90"), std::string::npos);
    EXPECT_NE(csv.find("\nz:cross90,2,2050,"), std::string::npos);
}

TEST(CurveIo, PropertiesJsonRoundTrip) {
    RawTestRecord r;
    r.label = "s1";
    r.config = {PrintAxis::XY, InfillPattern::ZigZag};
    ExtractionResult res;
    res.properties = {1543.1, 33.96, 39.91, 0.035, 0.095};
    const auto text = format_properties_json(r, res, {{"smoothing_window", "5"}});
    const auto back = parse_properties_json(text);
    EXPECT_EQ(back.label, "s1");
    EXPECT_EQ(back.config, r.config);
    EXPECT_EQ(back.properties.youngs_modulus, 1543.1);
    EXPECT_EQ(back.properties.fracture_strain, 0.095);
    EXPECT_EQ(format_properties_json(r, res, {{"smoothing_window", "5"}}), text);
}
