#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "test_support.hpp"

using namespace divgraph;

namespace {

const std::string kData = DIVGRAPH_TEST_DATA;

std::string data(const std::string& name) { return kData + "/" + name; }

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("divgraph_cli_test_" + name)).string();
}

}  // namespace

TEST(Cli, RhoOnPath) {
  const Outcome o = run_cli({"rho", data("g_path.json"), data("v0.json"), data("v1.json")});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "1.0\n");
  EXPECT_EQ(o.err, "");
}

TEST(Cli, SfuncAndResistance) {
  EXPECT_EQ(run_cli({"sfunc", data("g_circle.json"), data("v0.json"), data("v1.json")}).out, "0.125\n");
  EXPECT_EQ(run_cli({"resistance", data("g_circle.json"), "--p", "v0", "--q", "v1"}).out, "0.25\n");
  EXPECT_EQ(run_cli({"resistance", data("g_path.json"), "--p", "e:0.25", "--q", "v1"}).out, "0.75\n");
}

TEST(Cli, MemberFalseExitsOne) {
  const Outcome o =
      run_cli({"member", data("g_circle.json"), data("circle_e0_025.json"), "--hull", data("v0.json"), data("v1.json")});
  EXPECT_EQ(o.code, 1);
  EXPECT_EQ(o.out, "false\n");
  const Outcome t =
      run_cli({"member", data("g_path.json"), data("path_e05.json"), "--hull", data("v0.json"), data("v1.json")});
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(t.out, "true\n");
}

TEST(Cli, TpathEndpointEchoesFirstDivisor) {
  const Outcome o = run_cli({"tpath", data("g_path.json"), data("v0.json"), data("v1.json"), "--t", "0"});
  ASSERT_EQ(o.code, 0);
  const MetricGraph g = graph_from_json(read_json_file(data("g_path.json")));
  const RDivisor echoed = divisor_from_json(g, Json::parse(o.out));
  EXPECT_EQ(o.out, divisor_to_json(g, divisor_from_json(g, read_json_file(data("v0.json")))).dump(2) + "\n");
  EXPECT_LT(rho(g, echoed, divgraph::testing::at(g, "v0")), 1e-12);
}

TEST(Cli, SegmentCommands) {
  EXPECT_EQ(run_cli({"segment-contains", data("g_path.json"), data("v0.json"), data("v1.json"), data("path_e04.json")}).code, 0);
  const Outcome no =
      run_cli({"segment-contains", data("g_circle.json"), data("v0.json"), data("v1.json"), data("circle_e0_025.json")});
  EXPECT_EQ(no.code, 1);
  EXPECT_EQ(no.out, "false\n");
  const Outcome inter = run_cli({"segment-intersect", data("g_path.json"), data("v0.json"), data("path_e06.json"),
                                 data("path_e04.json"), data("v1.json")});
  ASSERT_EQ(inter.code, 0) << inter.err;
  const Json j = Json::parse(inter.out);
  EXPECT_EQ(j["from"]["points"][0]["offset"].get<double>(), 0.4);
  EXPECT_EQ(j["to"]["points"][0]["offset"].get<double>(), 0.6);
  EXPECT_EQ(run_cli({"segment-intersect", data("g_path.json"), data("v0.json"), data("path_e04.json"),
                     data("path_e05.json"), data("v1.json")})
                .out,
            "empty\n");
}

TEST(Cli, ReduceReportsCertificate) {
  const Outcome o =
      run_cli({"reduce", data("g_path.json"), data("v1.json"), "--hull", data("v0.json"), data("path_e04.json"), "--strict"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json j = Json::parse(o.out);
  EXPECT_EQ(j["status"], "certified");
  EXPECT_EQ(j["divisor"]["points"][0]["offset"].get<double>(), 0.4);
  EXPECT_NEAR(j["objective"].get<double>(), 0.42, 1e-12);
  EXPECT_TRUE(j["certificate"]["certified"].get<bool>());
}

TEST(Cli, StrictCertificateFailureExitsThree) {
  const std::vector<std::string> base{"reduce",          data("g_star.json"), data("star_x.json"),
                                      "--hull",          data("star_a.json"), data("star_cx05.json"),
                                      data("star_b.json"), "--grid",         "1",
                                      "--rounds",        "1",                 "--no-peel"};
  const Outcome loose = run_cli(base);
  ASSERT_EQ(loose.code, 0) << loose.err;
  EXPECT_EQ(Json::parse(loose.out)["status"], "best-effort");
  std::vector<std::string> strict = base;
  strict.push_back("--strict");
  const Outcome o = run_cli(strict);
  EXPECT_EQ(o.code, 3);
  EXPECT_EQ(o.out, "");
  EXPECT_EQ(o.err.rfind("error: ", 0), 0U);
  EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 1);
}

TEST(Cli, ProjectRetractExtremals) {
  const Outcome p =
      run_cli({"project", data("g_path.json"), data("v1_double.json"), "--hull", data("v0.json"), data("path_e04.json")});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(Json::parse(p.out)["points"][0]["offset"].get<double>(), 0.4);
  const Outcome r = run_cli(
      {"retract", data("g_path.json"), data("v1.json"), "--hull", data("path_e04.json"), "--t", "0.5", "--kappa", "0.6"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["points"][0]["offset"].get<double>(), 0.7);
  const Outcome k =
      run_cli({"retract", data("g_path.json"), data("v1.json"), "--hull", data("path_e04.json"), "--t", "0.5", "--kappa", "0.1"});
  EXPECT_EQ(k.code, 2);
  const Outcome e = run_cli(
      {"extremals", data("g_path.json"), "--hull", data("v0.json"), data("v1.json"), data("path_e05.json")});
  ASSERT_EQ(e.code, 0) << e.err;
  const Json ej = Json::parse(e.out);
  ASSERT_EQ(ej["generators"].size(), 2U);
  EXPECT_EQ(ej["generators"][0]["index"], 0);
  EXPECT_EQ(ej["generators"][1]["index"], 1);
}

TEST(Cli, CsvAndSvgOutputs) {
  const Outcome j = run_cli({"jfun", data("g_path.json"), "--p", "v1", "--q", "v0"});
  ASSERT_EQ(j.code, 0) << j.err;
  EXPECT_EQ(j.out.rfind("edge_id,offset,value\n", 0), 0U);
  EXPECT_NE(j.out.find("e,1.0,1.0\n"), std::string::npos);
  const std::string csv = temp_path("j.csv");
  ASSERT_EQ(run_cli({"jfun", data("g_path.json"), "--p", "v1", "--q", "v0", "--csv", csv}).code, 0);
  EXPECT_EQ(slurp(csv), j.out);
  const std::string svg = temp_path("f.svg");
  const Outcome s = run_cli({"plot", data("g_circle.json"), data("v0.json"), data("v1.json"), "--svg", svg});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_NE(slurp(svg).find("<svg"), std::string::npos);
  std::filesystem::remove(csv);
  std::filesystem::remove(svg);
}

TEST(Cli, ErrorsExitTwoWithOneLine) {
  const std::vector<std::vector<std::string>> bad{
      {"rho", data("g_path.json"), data("v0.json"), data("v1_double.json")},
      {"rho", data("g_path.json"), data("v0.json"), data("missing.json")},
      {"rho", data("g_path.json"), data("v0.json")},
      {"no-such-command"},
      {},
      {"tpath", data("g_path.json"), data("v0.json"), data("v1.json"), "--t", "1.5"},
      {"resistance", data("g_path.json"), "--p", "v9", "--q", "v0"},
      {"resistance", data("g_path.json"), "--p", "e:2.0", "--q", "v0"},
      {"member", data("g_path.json"), data("v0.json")},
      {"--tol-val", "-1", "rho", data("g_path.json"), data("v0.json"), data("v1.json")},
  };
  for (const auto& args : bad) {
    const Outcome o = run_cli(args);
    EXPECT_EQ(o.code, 2) << (args.empty() ? std::string("<empty>") : args.front());
    EXPECT_EQ(o.err.rfind("error: ", 0), 0U) << o.err;
    EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 1) << o.err;
  }
}

TEST(Cli, ToleranceOverrides) {
  const std::vector<std::string> args{"--tol-val", "1e-6", "--tol-len", "1e-10", "rho", data("g_path.json"),
                                      data("v0.json"), data("v1.json")};
  EXPECT_EQ(run_cli(args).out, "1.0\n");
  ::setenv("DIVGRAPH_TOL_VAL", "1e-7", 1);
  EXPECT_EQ(run_cli({"rho", data("g_path.json"), data("v0.json"), data("v1.json")}).out, "1.0\n");
  ::setenv("DIVGRAPH_TOL_VAL", "abc", 1);
  EXPECT_EQ(run_cli({"rho", data("g_path.json"), data("v0.json"), data("v1.json")}).code, 2);
  // The flag wins over the environment, but the environment is still parsed.
  EXPECT_EQ(run_cli(args).code, 2);
  ::unsetenv("DIVGRAPH_TOL_VAL");
  ::setenv("DIVGRAPH_TOL_LEN", "0.5", 1);
  EXPECT_EQ(run_cli({"rho", data("g_path.json"), data("v0.json"), data("v1.json")}).code, 0);
  ::unsetenv("DIVGRAPH_TOL_LEN");
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::vector<std::string>> jobs{
      {"tpath", data("g_circle.json"), data("v0.json"), data("v1.json"), "--t", "0.5"},
      {"reduce", data("g_path.json"), data("v1.json"), "--hull", data("v0.json"), data("path_e04.json")},
      {"jfun", data("g_circle.json"), "--p", "e0:0.1", "--q", "v1"},
      {"plot", data("g_circle.json"), data("v0.json"), data("circle_e0_025.json")},
  };
  for (const auto& args : jobs) {
    const Outcome a = run_cli(args), b = run_cli(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, DivisorJsonRoundTrip) {
  divgraph::testing::Rng rng(81);
  for (int trial = 0; trial < 20; ++trial) {
    const MetricGraph g = divgraph::testing::random_graph(rng);
    const RDivisor d = divgraph::testing::random_divisor(g, rng, divgraph::testing::random_degree(rng));
    const std::string once = divisor_to_json(g, d).dump(2);
    const std::string twice = divisor_to_json(g, divisor_from_json(g, Json::parse(once))).dump(2);
    EXPECT_EQ(once, twice);
    const std::string graph_once = graph_to_json(g).dump(2);
    EXPECT_EQ(graph_to_json(graph_from_json(Json::parse(graph_once))).dump(2), graph_once);
  }
}

TEST(Cli, RealFormatting) {
  EXPECT_EQ(format_real(1.0), "1.0");
  EXPECT_EQ(format_real(0.0), "0.0");
  EXPECT_EQ(format_real(-0.0), "0.0");
  EXPECT_EQ(format_real(0.1 + 0.2), "0.3");
  EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_real(1e-20), "1e-20");
  EXPECT_EQ(format_real(123456.0), "123456.0");
}
