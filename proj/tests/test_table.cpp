#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "curvecp/beta_table.hpp"

using namespace curvecp;
namespace fs = std::filesystem;

namespace {

TableSpec flat_spec(const char* body, const char* medium, double d) {
    TableSpec s;
    s.pair = {builtin(medium), builtin(body)};
    s.d_um = d;
    s.curvature = false;
    s.grid.nodes = 90;
    return s;
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("curvecp_table_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

} // namespace

TEST(BetaTable, NodesAreExactDirectValues) {
    const TableSpec s = flat_spec("Au", "Br", 0.5);
    const BetaTable t = build_table(s);
    for (int j : {0, 17, 60, 89}) {
        const BetaSet direct = beta_set(t.kappabar[j], media_at(s.pair, s.d_um, t.kappabar[j]), false, s.opt);
        EXPECT_EQ(t.at(t.kappabar[j]).values(), direct.values()) << j;
    }
    EXPECT_EQ(t.at(0.0).values(), t.static_row.values());
}

TEST(BetaTable, MidpointAuditWithinTolerance) {
    for (const char* body : {"Au", "Si", "PS"}) {
        const BetaTable t = build_table(flat_spec(body, "Br", 1.0));
        EXPECT_GE(t.audit_error, 0.0);
        EXPECT_LT(t.audit_error, 1e-6) << body;
    }
}

TEST(BetaTable, InterpolationTracksDirectValues) {
    const TableSpec s = flat_spec("Au", "vacuum", 0.3);
    const BetaTable t = build_table(s);
    for (double kb : {3e-3, 0.077, 1.3, 17.1}) {
        const auto a = t.at(kb).values();
        const auto b = beta_set(kb, media_at(s.pair, s.d_um, kb), false, s.opt).values();
        for (int c = 0; c < 2; ++c) EXPECT_NEAR(a[c], b[c], 1e-6 * std::abs(b[c])) << kb;
    }
}

TEST(BetaTable, CurvatureTableAgreesWithDirect) {
    TableSpec s = flat_spec("PS", "Br", 1.0);
    s.curvature = true;
    s.grid.nodes = 60;
    s.grid.kmax = 10.0;
    s.audit_tol = 1e-4;
    const BetaTable t = build_table(s);
    const double kb = 0.41;
    const auto a = t.at(kb).values();
    const auto b = beta_set(kb, media_at(s.pair, s.d_um, kb), true, s.opt).values();
    double scale = 0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    for (int c = 0; c < 5; ++c) EXPECT_NEAR(a[c], b[c], 1e-4 * scale) << c;
}

TEST(BetaTable, CsvRoundTripIsBitExact) {
    const TableSpec s = flat_spec("Si", "vacuum", 2.0);
    const BetaTable t = build_table(s);
    BetaTable u;
    ASSERT_TRUE(parse_table_csv(table_csv(t), s, u));
    EXPECT_EQ(table_csv(u), table_csv(t));
    EXPECT_EQ(u.kappabar, t.kappabar);
    for (std::size_t j = 0; j < t.node.size(); ++j) EXPECT_EQ(u.node[j].values(), t.node[j].values());
    EXPECT_EQ(u.static_row.values(), t.static_row.values());
}

TEST(BetaTable, CsvForOtherSpecRejected) {
    const TableSpec s = flat_spec("Si", "vacuum", 2.0);
    const BetaTable t = build_table(s);
    BetaTable u;
    EXPECT_FALSE(parse_table_csv(table_csv(t), flat_spec("Si", "vacuum", 2.5), u));
    EXPECT_FALSE(parse_table_csv("garbage\n", s, u));
}

TEST(BetaTable, CoverageEnforced) {
    const BetaTable t = build_table(flat_spec("Au", "vacuum", 1.0));
    EXPECT_NO_THROW(t.at(40.0));
    try {
        t.at(41.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::TableCoverage);
    }
}

TEST(BetaTable, CoarseGridDetected) {
    TableSpec s = flat_spec("Au", "vacuum", 1.0);
    s.grid.nodes = 8;
    s.grid.order = 4;
    try {
        build_table(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::GridTooCoarse);
    }
}

TEST(BetaTable, ZeroTemperatureIntegralOfConductorImage) {
    TableSpec s;
    s.pair = {builtin("vacuum"), builtin("PEC")};
    s.curvature = false;
    const BetaTable t = build_table(s);
    const auto I = t.integrate([](double) { return 1.0; });
    EXPECT_NEAR(2 * I[0] + I[1], 0.75, 1e-7);
}

TEST(Cache, ReusesStoredTable) {
    const fs::path dir = scratch("reuse");
    const TableSpec s = flat_spec("PS", "vacuum", 1.0);
    const BetaTable a = load_or_build(s, dir);
    const fs::path p = table_path(dir, s);
    ASSERT_TRUE(fs::exists(p));
    const auto stamp = fs::last_write_time(p);
    const BetaTable b = load_or_build(s, dir);
    EXPECT_EQ(fs::last_write_time(p), stamp);
    EXPECT_EQ(table_csv(a), table_csv(b));
    fs::remove_all(dir);
}

TEST(Cache, CorruptFileIsRebuilt) {
    const fs::path dir = scratch("corrupt");
    const TableSpec s = flat_spec("PS", "vacuum", 1.0);
    const BetaTable a = load_or_build(s, dir);
    std::ofstream(table_path(dir, s)) << "# truncated\n1,2\n";
    const BetaTable b = load_or_build(s, dir);
    EXPECT_EQ(table_csv(a), table_csv(b));
    fs::remove_all(dir);
}

TEST(Cache, UnwritableDirectoryReported) {
    if (::geteuid() == 0) {
        // root ignores permissions; use a path whose parent is a regular file
        const fs::path f = scratch("file");
        std::ofstream(f) << "x";
        try {
            load_or_build(flat_spec("PS", "vacuum", 1.0), f / "sub");
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::CacheWriteFailure);
        }
        fs::remove(f);
        return;
    }
    const fs::path dir = scratch("ro");
    fs::create_directories(dir);
    fs::permissions(dir, fs::perms::owner_read | fs::perms::owner_exec);
    try {
        load_or_build(flat_spec("PS", "vacuum", 1.0), dir);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::CacheWriteFailure);
    }
    fs::permissions(dir, fs::perms::owner_all);
    fs::remove_all(dir);
}

TEST(Cache, KeyDependsOnInputs) {
    const TableSpec a = flat_spec("PS", "vacuum", 1.0);
    TableSpec b = a;
    b.grid.nodes = 91;
    TableSpec c = a;
    c.pair.body = builtin("Si");
    EXPECT_NE(table_path("x", a), table_path("x", b));
    EXPECT_NE(table_path("x", a), table_path("x", c));
    EXPECT_EQ(table_path("x", a), table_path("x", flat_spec("PS", "vacuum", 1.0)));
}
