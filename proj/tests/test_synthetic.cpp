#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rpet/error.hpp"
#include "rpet/synthetic.hpp"

using namespace rpet;

namespace {

SyntheticModel plain_model() {
    SyntheticModel m;
    m.youngs_modulus = 1743.5;
    m.yield_stress = 61.65;
    m.yield_strain = 61.65 / 1743.5;
    m.softening_slope = -500.0;
    m.fracture_strain = 0.076;
    return m;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST(SyntheticModel, NoToeNoNoiseRoundTripsExactly) {
    const auto m = plain_model();
    const auto rec = generate_synthetic_record(m, kNominalSpecimen, 200);
    const auto c = to_stress_strain(rec);
    ASSERT_EQ(c.size(), 200u);
    for (Eigen::Index i = 0; i < c.stress.size(); ++i) {
        const double e = m.fracture_strain * static_cast<double>(i) / 199.0;
        EXPECT_NEAR(c.strain[i], e, 1e-15);
        const double expect = e <= m.yield_strain ? m.youngs_modulus * e : m.yield_stress - 500.0 * (e - m.yield_strain);
        EXPECT_NEAR(c.stress[i], expect, 1e-10);
    }
    EXPECT_EQ(rec.end, EndCondition::MachineStop);
}

TEST(SyntheticModel, ToeIsHardeningAndMeetsElasticLine) {
    auto m = model_from_targets({1743.5, 61.65, 42.21, 0.038, 0.076});
    const double gap = m.toe_gap();
    EXPECT_NEAR(gap, 0.038 - 61.65 / 1743.5, 1e-15);
    EXPECT_GE(m.toe_strain, gap);
    EXPECT_LE(m.toe_strain, 2.0 * gap + 1e-15);
    // Continuity at the toe end and convexity inside it.
    const double t = m.toe_strain;
    EXPECT_NEAR(model_stress(m, t - 1e-12), model_stress(m, t + 1e-12), 1e-6);
    double prev_slope = 0.0;
    for (int i = 1; i <= 20; ++i) {
        const double a = t * (i - 1) / 20.0, b = t * i / 20.0;
        const double slope = (model_stress(m, b) - model_stress(m, a)) / (b - a);
        EXPECT_GE(slope, prev_slope);
        EXPECT_LE(slope, m.youngs_modulus * (1 + 1e-9));
        prev_slope = slope;
    }
    EXPECT_NEAR(model_stress(m, 0.038), 61.65, 1e-9);
    EXPECT_NEAR(model_stress(m, 0.076), 42.21, 1e-9);
}

TEST(SyntheticModel, MirrorsFractureStressAboveYield) {
    const auto m = model_from_targets({1543.1, 33.96, 39.91, 0.035, 0.095});
    EXPECT_LE(m.softening_slope, 0.0);
    EXPECT_NEAR(m.fracture_stress(), 2.0 * 33.96 - 39.91, 1e-9);
}

TEST(SyntheticModel, SameSeedSameRecord) {
    const auto m = model_from_targets({1543.1, 33.96, 39.91, 0.035, 0.095}, 0.5, 42);
    const auto a = generate_synthetic_record(m, kNominalSpecimen, 300);
    const auto b = generate_synthetic_record(m, kNominalSpecimen, 300);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].force, b.samples[i].force);
    auto m2 = m;
    m2.seed = 43;
    const auto c = generate_synthetic_record(m2, kNominalSpecimen, 300);
    EXPECT_NE(a.samples[100].force, c.samples[100].force);
}

TEST(SyntheticModel, InconsistentModelsRejected) {
    auto m = plain_model();
    m.fracture_strain = m.yield_strain;
    EXPECT_THROW(generate_synthetic_record(m, kNominalSpecimen, 100), DomainError);
    m = plain_model();
    m.softening_slope = 10.0;
    EXPECT_THROW(m.validate(), DomainError);
    m = plain_model();
    m.noise_std = -1.0;
    EXPECT_THROW(m.validate(), DomainError);
    EXPECT_THROW(generate_synthetic_record(plain_model(), kNominalSpecimen, 49), DomainError);
    // Yield strain below sigma_y / E leaves no room for a hardening toe.
    EXPECT_THROW(model_from_targets({1743.5, 61.65, 42.21, 0.030, 0.076}), DomainError);
}

TEST(ExtractProperties, NoiseFreeRoundTrip) {
    const PropertyTargets t{1743.5, 61.65, 42.21, 0.038, 0.076};
    const std::size_t n = 1500;
    const auto rec = generate_synthetic_record(model_from_targets(t), kNominalSpecimen, n);
    const auto r = extract_properties(rec);
    const auto& p = r.properties;
    const double h = t.fracture_strain / static_cast<double>(n - 1);
    EXPECT_NEAR(p.youngs_modulus, t.youngs_modulus, 0.01 * t.youngs_modulus);
    EXPECT_NEAR(p.yield_stress, t.yield_stress, 0.005 * t.yield_stress);
    EXPECT_NEAR(p.fracture_stress, t.fracture_stress, 0.005 * t.fracture_stress);
    EXPECT_LE(std::abs(p.yield_strain - t.yield_strain), h * (1 + 1e-9));
    EXPECT_LE(std::abs(p.fracture_strain - t.fracture_strain), h * (1 + 1e-9));
    EXPECT_EQ(r.fracture.rule, FractureRule::Terminal);
    EXPECT_GT(r.toe_offset, 0.0);
}

TEST(ExtractProperties, RecyclingModulusTarget) {
    // Datasheet-scale modulus with a plausible yield point.
    const PropertyTargets t{1630.0, 50.0, 42.0, 0.034, 0.07};
    const auto r = extract_properties(generate_synthetic_record(model_from_targets(t), kNominalSpecimen, 1000));
    EXPECT_NEAR(r.properties.youngs_modulus, 1630.0, 16.3);
}

TEST(ExtractProperties, NoisyMediansWithinThreePercent) {
    const PropertyTargets t{1743.5, 61.65, 42.21, 0.038, 0.076};
    std::vector<double> E, sy, sf, ey, ef;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto rec = generate_synthetic_record(model_from_targets(t, 0.5, seed), kNominalSpecimen, 1500);
        const auto p = extract_properties(rec).properties;
        EXPECT_GE(p.fracture_strain, p.yield_strain);
        E.push_back(p.youngs_modulus);
        sy.push_back(p.yield_stress);
        sf.push_back(p.fracture_stress);
        ey.push_back(p.yield_strain);
        ef.push_back(p.fracture_strain);
    }
    EXPECT_NEAR(median(E), t.youngs_modulus, 0.03 * t.youngs_modulus);
    EXPECT_NEAR(median(sy), t.yield_stress, 0.03 * t.yield_stress);
    EXPECT_NEAR(median(sf), t.fracture_stress, 0.03 * t.fracture_stress);
    EXPECT_NEAR(median(ey), t.yield_strain, 0.03 * t.yield_strain);
    EXPECT_NEAR(median(ef), t.fracture_strain, 0.03 * t.fracture_strain);
}
