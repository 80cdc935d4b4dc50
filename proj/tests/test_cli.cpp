#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "hypcover/cli.hpp"

namespace fs = std::filesystem;
using namespace hypcover;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("hypcover_cli_" + std::to_string(getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args) {
    std::string cmd = std::string(HYPCOVER_CLI) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json load(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

std::string torus_group() { return "custom:" + std::string(HYPCOVER_DATA_DIR) + "/torus_square.json"; }

}  // namespace

TEST(Cli, TopologyOfAllGroups) {
    auto d = scratch("topology");
    ASSERT_EQ(run("topology --group psl2z --out " + (d / "a").string()), 0);
    auto a = load(d / "a" / "topology.json");
    EXPECT_EQ(a["betti1"], 0);
    EXPECT_EQ(a["genus"], 0);
    ASSERT_EQ(run("topology --group triangle246 --out " + (d / "b").string()), 0);
    EXPECT_EQ(load(d / "b" / "topology.json")["genus"], 0);
    ASSERT_EQ(run("topology --group " + torus_group() + " --out " + (d / "c").string()), 0);
    auto c = load(d / "c" / "topology.json");
    EXPECT_EQ(c["betti1"], 2);
    EXPECT_EQ(c["genus"], 1);
}

TEST(Cli, TraceIntegerMatrix) {
    auto d = scratch("trace");
    ASSERT_EQ(run("trace --group psl2z --packet 'matrices:[[2,1],[5,3]]' --out " + d.string()), 0);
    auto j = load(d / "trace.json");
    double s = 0;
    for (const auto& c : j["crossings"]) s += c["seg_length"].get<double>();
    EXPECT_NEAR(s, 2 * std::acosh(2.5), 1e-8);
    std::string svg = slurp(d / "trace.svg");
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find(" A "), std::string::npos);
}

TEST(Cli, TraceGamma3) {
    auto d = scratch("trace3");
    ASSERT_EQ(run("trace --group triangle246 --packet named:gamma3 --out " + d.string()), 0);
    auto j = load(d / "trace.json");
    EXPECT_EQ(j["crossings"].size(), 8u);
    EXPECT_NEAR(j["total_length"].get<double>(), j["length"].get<double>(), 1e-8);
}

TEST(Cli, TraceBoundaryGeodesicWarns) {
    auto d = scratch("traceb");
    ASSERT_EQ(run("trace --group triangle246 --packet 'word:S*sigma*S*sigma^2' --out " + d.string()), 0);
    auto j = load(d / "trace.json");
    EXPECT_EQ(j["warning"], "BoundaryGeodesic");
    EXPECT_TRUE(j["crossings"].empty());
    EXPECT_TRUE(fs::exists(d / "trace.svg"));
}

TEST(Cli, CoverFigureRange) {
    auto d = scratch("cover");
    ASSERT_EQ(run("cover --group triangle246 --packet named:gamma3 --grid 200 --out " + d.string()), 0);
    auto j = load(d / "cover.json");
    EXPECT_EQ(j["min_mult"], 3);
    EXPECT_EQ(j["max_mult"], 8);
    ASSERT_EQ(run("cover --group triangle246 --packet named:gamma1 --grid 100 --out " + (d / "g1").string()), 0);
    auto g1 = load(d / "g1" / "cover.json");
    EXPECT_EQ(g1["min_mult"], g1["max_mult"]);
    ASSERT_EQ(run("cover --group psl2z --packet disc:5 --grid 100 --out " + (d / "d5").string()), 0);
    EXPECT_GT(load(d / "d5" / "cover.json")["volume"].get<double>(), 0);
    EXPECT_TRUE(fs::exists(d / "d5" / "cover.csv"));
    EXPECT_TRUE(fs::exists(d / "d5" / "cover.svg"));
}

TEST(Cli, SweepRows) {
    auto d = scratch("sweep");
    ASSERT_EQ(run("sweep --group psl2z --packet qorbit:5 --packet qorbit:13 --packet qorbit:29 --out " + d.string()),
              0);
    std::istringstream csv(slurp(d / "sweep.csv"));
    std::string header, line;
    std::getline(csv, header);
    EXPECT_EQ(header,
              "packet_label,D_or_q,packet_size,total_length,volume,volume_ratio,covering_discrepancy,"
              "geodesic_discrepancy,max_cusp_fraction");
    int rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    EXPECT_EQ(rows, 3);
    EXPECT_TRUE(fs::exists(d / "sweep.svg"));
}

TEST(Cli, ExitCodes) {
    auto d = scratch("codes");
    EXPECT_EQ(run("sweep --packet disc:5 --out " + d.string()), 1);
    EXPECT_EQ(run("trace --out " + d.string()), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("topology --group nowhere --out " + d.string()), 2);
    EXPECT_EQ(run("cover --packet disc:49 --out " + d.string()), 2);
    EXPECT_EQ(run("trace --group psl2z --packet 'matrices:[[1,1],[0,1]]' --out " + d.string()), 2);
    EXPECT_EQ(run("cover --packet disc:5 --partition 1,2 --out " + d.string()), 1);
    EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, Deterministic) {
    auto d = scratch("determinism");
    std::string common = " --group psl2z --packet disc:5 --packet disc:13 --seed 7 --out ";
    ASSERT_EQ(run("sweep" + common + (d / "a").string()), 0);
    ASSERT_EQ(run("sweep" + common + (d / "b").string()), 0);
    EXPECT_EQ(slurp(d / "a" / "sweep.csv"), slurp(d / "b" / "sweep.csv"));
    std::string cov = " --group triangle246 --packet named:gamma3 --grid 120 --seed 7 --out ";
    ASSERT_EQ(run("cover" + cov + (d / "c").string()), 0);
    ASSERT_EQ(run("cover" + cov + (d / "e").string()), 0);
    EXPECT_EQ(slurp(d / "c" / "cover.json"), slurp(d / "e" / "cover.json"));
    EXPECT_EQ(slurp(d / "c" / "cover.csv"), slurp(d / "e" / "cover.csv"));
    EXPECT_EQ(load(d / "c" / "cover.json")["seed"], 7);
}

TEST(Cli, ConfigFileAndFlagOverride) {
    auto d = scratch("config");
    std::ofstream(d / "run.cfg") << "# sweep settings\n"
                                 << "group = triangle246\n"
                                 << "packet = named:gamma1\n"
                                 << "grid = 60\n"
                                 << "out = " << (d / "from_file").string() << "\n";
    ASSERT_EQ(run("cover --config " + (d / "run.cfg").string()), 0);
    auto a = load(d / "from_file" / "cover.json");
    EXPECT_EQ(a["group"], "triangle246");
    EXPECT_EQ(a["min_mult"], a["max_mult"]);
    ASSERT_EQ(run("cover --config " + (d / "run.cfg").string() + " --packet named:gamma3 --out " +
                  (d / "flag").string()),
              0);
    auto b = load(d / "flag" / "cover.json");
    EXPECT_EQ(b["packet"].get<std::string>().find("gamma3") != std::string::npos, true);
    std::ofstream(d / "bad.cfg") << "colour = blue\n";
    EXPECT_EQ(run("topology --config " + (d / "bad.cfg").string()), 1);
}

TEST(Cli, ConfigParsing) {
    auto kv = parse_config_text("a-b = 1 # c\n\npacket=disc:5\npacket=disc:13\n");
    EXPECT_EQ(kv.count("a_b"), 1u);
    EXPECT_EQ(kv.count("packet"), 2u);
    RunConfig cfg;
    apply_config(cfg, parse_config_text("packet=disc:5\npacket=disc:13\nseed=3\nstep=0.02"));
    EXPECT_EQ(cfg.packets.size(), 2u);
    EXPECT_EQ(cfg.seed, 3);
    EXPECT_DOUBLE_EQ(cfg.step, 0.02);
    RunConfig flagged;
    flagged.seed = 9;
    apply_config(flagged, parse_config_text("seed=3"), {"seed"});
    EXPECT_EQ(flagged.seed, 9);
    EXPECT_THROW(parse_config_text("no equals sign"), Error);
    EXPECT_THROW(apply_config(cfg, parse_config_text("seed=x")), Error);
    auto p = parse_partition("6,4,2,8");
    EXPECT_EQ(p.rows, 6);
    EXPECT_EQ(p.bins, 8);
    EXPECT_THROW(parse_partition("6,4"), Error);
}

TEST(Cli, NumberFormatting) {
    EXPECT_EQ(fmt12(1.0), "1.00000000000e+00");
    EXPECT_EQ(fmt12(-0.000123456789012345), "-1.23456789012e-04");
    EXPECT_EQ(csv_row({"a,b", "c\"d", "e"}), "\"a,b\",\"c\"\"d\",e\n");
    EXPECT_DOUBLE_EQ(round12(std::acos(-1.0)), 3.14159265359);
}
