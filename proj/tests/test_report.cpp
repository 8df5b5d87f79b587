#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rpet/curve_io.hpp"
#include "rpet/error.hpp"
#include "rpet/report.hpp"

using namespace rpet;
namespace fs = std::filesystem;

namespace {

const char* kPublishedComparison =
    "config,experimental_mm,numerical_mm,published_abs_mm,published_rel_pct\n"
    "z:concentric,0.408,0.400,0.008,1.81\n"
    "xy:concentric,0.442,0.433,0.009,2.02\n"
    "z:zigzag,0.458,0.432,0.035,5.24\n"
    "xy:zigzag,0.502,0.500,0.002,0.31\n"
    "z:cross45,0.399,0.375,0.024,5.91\n"
    "xy:cross45,0.451,0.472,0.021,4.63\n"
    "z:cross90,0.399,0.375,0.024,5.91\n"
    "xy:cross90,0.451,0.451,0.001,0.10\n";

fs::path scratch_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("rpet_report_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Plot one_curve() {
    Plot p;
    p.name = "curve";
    p.title = "Compression <XY> & Z";
    Series s;
    s.label = "xy:concentric";
    for (int i = 0; i <= 20; ++i) {
        const double e = 0.0025 * i;
        s.x.push_back(e);
        s.y.push_back(1650.0 * e * (1.0 - 5.0 * e));
    }
    p.series.push_back(s);
    return p;
}

}  // namespace

TEST(CompareDisplacement, Examples) {
    const auto m = compare_displacement(0.442, 0.433);
    EXPECT_EQ(m.experimental, 0.442);
    EXPECT_EQ(m.numerical, 0.433);
    EXPECT_NEAR(m.absolute_error, 0.009, 1e-12);
    EXPECT_NEAR(m.relative_error_pct, 100.0 * 0.009 / 0.442, 1e-9);
    EXPECT_NEAR(m.relative_error_pct, 2.036, 5e-4);
    EXPECT_NEAR(m.relative_error_numerical_pct, 100.0 * 0.009 / 0.433, 1e-9);

    const auto same = compare_displacement(0.5, 0.5);
    EXPECT_EQ(same.absolute_error, 0.0);
    EXPECT_EQ(same.relative_error_pct, 0.0);
    EXPECT_THROW(compare_displacement(0.0, 0.4), DomainError);
}

TEST(CompareDisplacement, AbsoluteErrorSymmetric) {
    const auto a = compare_displacement(0.399, 0.375), b = compare_displacement(0.375, 0.399);
    EXPECT_EQ(a.absolute_error, b.absolute_error);
    EXPECT_NE(a.relative_error_pct, b.relative_error_pct);
}

TEST(ServiceLimit, Examples) {
    const auto ok = service_limit_check(6532.0);
    EXPECT_TRUE(ok.pass);
    EXPECT_NEAR(ok.utilization, 1000.0 / 6532.0, 1e-12);
    EXPECT_NEAR(ok.utilization, 0.1531, 5e-5);
    EXPECT_FALSE(service_limit_check(999.0).pass);
    EXPECT_FALSE(service_limit_check(1000.0).pass);
    EXPECT_TRUE(service_limit_check(1000.5).pass);
    EXPECT_THROW(service_limit_check(0.0), DomainError);
    EXPECT_THROW(service_limit_check(100.0, -1.0), DomainError);
}

TEST(ComparisonTable, PublishedRowsRecomputed) {
    const auto table = build_comparison_table(parse_comparison_csv(kPublishedComparison));
    ASSERT_EQ(table.size(), 8u);
    // Canonical order: the four XY classes, then Z with cross45/cross90 together.
    EXPECT_EQ(table[0].input.config_label, "xy:concentric");
    EXPECT_EQ(table[4].input.config_label, "z:concentric");
    EXPECT_EQ(table[6].input.config_label, "z:cross45");
    EXPECT_EQ(table[7].input.config_label, "z:cross90");
    for (const auto& r : table) {
        EXPECT_DOUBLE_EQ(r.metrics.absolute_error, std::abs(r.input.experimental - r.input.numerical));
        EXPECT_DOUBLE_EQ(r.metrics.relative_error_pct, 100.0 * r.metrics.absolute_error / r.input.experimental);
    }
    int abs_flags = 0, dup = 0;
    for (const auto& r : table) {
        abs_flags += r.absolute_discrepancy;
        dup += r.duplicate;
        EXPECT_TRUE(r.relative_discrepancy) << r.input.config_label;
        if (r.absolute_discrepancy) EXPECT_EQ(r.input.config_label, "z:zigzag");
        if (r.duplicate) EXPECT_EQ(r.input.config.axis, PrintAxis::Z);
    }
    EXPECT_EQ(abs_flags, 1);
    EXPECT_EQ(dup, 2);
}

TEST(ComparisonTable, EmptyAndDuplicates) {
    EXPECT_TRUE(build_comparison_table({}).empty());
    ComparisonInput a{"xy:zigzag", parse_config("xy:zigzag"), 0.5, 0.45, {}, {}};
    ComparisonInput b = a;
    b.numerical = 0.55;
    const auto t = build_comparison_table({a, b});
    ASSERT_EQ(t.size(), 2u);
    EXPECT_TRUE(t[0].duplicate && t[1].duplicate);
    EXPECT_EQ(t[0].input.numerical, 0.45);
    ComparisonInput zero = a;
    zero.experimental = 0.0;
    EXPECT_THROW(build_comparison_table({zero}), DomainError);
}

TEST(ComparisonCsv, ParseErrorsAndFormat) {
    EXPECT_THROW(parse_comparison_csv(""), ParseError);
    EXPECT_THROW(parse_comparison_csv("cfg,exp,num\n"), ParseError);
    EXPECT_THROW(parse_comparison_csv("config,experimental_mm,numerical_mm\nz:zigzag,abc,0.4\n"), ParseError);
    EXPECT_THROW(parse_comparison_csv("config,experimental_mm,numerical_mm\nq:zigzag,0.4,0.4\n"), ValidationError);
    const auto rows = parse_comparison_csv("config,experimental_mm,numerical_mm\n# note\nxy:zigzag,0.502,0.500\n");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_FALSE(rows[0].published_absolute.has_value());
    const auto csv = format_comparison_csv(build_comparison_table(rows));
    EXPECT_EQ(csv.rfind("config,", 0), 0u);
    EXPECT_NE(csv.find("xy:zigzag"), std::string::npos);
}

TEST(RenderSvg, GoldenSingleCurve) {
    const std::string svg = render_svg(one_curve());
    EXPECT_NE(svg.find("Strain [mm/mm]"), std::string::npos);
    EXPECT_NE(svg.find("Stress [MPa]"), std::string::npos);
    EXPECT_NE(svg.find("&lt;XY&gt; &amp; Z"), std::string::npos);
    const std::string golden = slurp(fs::path(RPET_GOLDEN_DIR) / "single_curve.svg");
    ASSERT_FALSE(golden.empty());
    EXPECT_EQ(svg, golden);
}

TEST(RenderReport, MinimalDocument) {
    const auto dir = scratch_dir("minimal");
    const auto files = render_report(Report{}, dir);
    ASSERT_EQ(files.size(), 1u);
    const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
    EXPECT_TRUE(j.is_object());
    EXPECT_TRUE(j.at("comparison").empty());
}

TEST(RenderReport, ByteIdenticalRerun) {
    Report r;
    r.provenance["input"] = "table.csv";
    r.comparison = build_comparison_table(parse_comparison_csv(kPublishedComparison));
    r.service_limits.push_back({"xy:concentric", service_limit_check(6532.0)});
    r.plots.push_back(one_curve());
    const auto a = scratch_dir("a"), b = scratch_dir("b");
    const auto fa = render_report(r, a, {true, true});
    const auto fb = render_report(r, b, {true, true});
    ASSERT_EQ(fa.size(), fb.size());
    EXPECT_EQ(fa.size(), 4u);
    for (std::size_t i = 0; i < fa.size(); ++i) {
        EXPECT_EQ(fa[i].filename(), fb[i].filename());
        EXPECT_EQ(slurp(fa[i]), slurp(fb[i]));
    }
    EXPECT_TRUE(fs::exists(a / "curve.svg"));
    write_run_sidecar(a);
    EXPECT_TRUE(fs::exists(a / "run.json"));
    EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
}

TEST(RenderReport, UnwritableDestination) {
    const auto dir = scratch_dir("blocked");
    std::ofstream(dir / "file") << "x";
    EXPECT_THROW(render_report(Report{}, dir / "file" / "sub"), IoError);
}
