#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "hciz/errors.hpp"
#include "hciz/io.hpp"

using namespace hciz;
namespace fs = std::filesystem;
using io::Json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hciz_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  static std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }

  fs::path dir_;
};

}  // namespace

TEST(Io, MeasureRoundTrip) {
  for (const auto& m : {SpectralMeasure::uniform(-1, 2), SpectralMeasure::semicircle(0.5, 3),
                        SpectralMeasure::atomic({0.1, 0.9}, {0.25, 0.75})}) {
    EXPECT_EQ(io::measure_from_json(io::measure_to_json(m)), m);
    EXPECT_EQ(io::measure_from_json(Json{{"measure", io::measure_to_json(m)}}), m);
    EXPECT_EQ(io::measure_from_json(Json::parse(io::measure_to_json(m).dump())), m);
  }
}

TEST(Io, SpectrumRoundTrip) {
  const Spectrum s({0.3, -1.25, 7, 0});
  EXPECT_EQ(io::spectrum_from_json(io::spectrum_to_json(s)), s);
  EXPECT_EQ(io::spectrum_from_json(Json{{"spectrum", io::spectrum_to_json(s)}}), s);
}

TEST(Io, RejectsBadInput) {
  EXPECT_THROW(io::measure_from_json(Json{{"kind", "cauchy"}}), DomainError);
  EXPECT_THROW(io::measure_from_json(Json{{"kind", "uniform"}, {"a", 0}}), DomainError);
  EXPECT_THROW(io::spectrum_from_json(Json{{"values", {1, "x"}}}), DomainError);
  EXPECT_THROW(io::read_json_file("/nonexistent/hciz.json"), DomainError);
}

TEST(Io, LogScalarJson) {
  EXPECT_EQ(io::log_scalar_to_json(LogScalar::zero())["log_abs"], nullptr);
  EXPECT_EQ(io::log_scalar_to_json(LogScalar::from_double(-2))["sign"], -1);
}

TEST_F(CliTest, TransformBranchSwitchesAtEdge) {
  const auto m = write("semi.json", R"({"kind":"semicircle","center":0.0,"radius":2.0})");
  const auto r = run({"transform", "--measure", m, "--beta", "2", "--t-grid", "-3:3:0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 63u);
  EXPECT_EQ(ls[0].rfind("# config ", 0), 0u);
  EXPECT_EQ(ls[1], "t,v,f_beta,branch");
  for (std::size_t i = 2; i < ls.size(); ++i) {
    std::istringstream row(ls[i]);
    std::string t, v, f, branch;
    std::getline(row, t, ',');
    std::getline(row, v, ',');
    std::getline(row, f, ',');
    std::getline(row, branch, ',');
    const double tv = std::stod(t);
    const std::string expected = tv > 1 ? "upper" : tv < -1 ? "lower" : "R";
    EXPECT_EQ(branch, expected) << ls[i];
  }
}

TEST_F(CliTest, ExactZeroA) {
  const auto a = write("a.json", R"({"values":[0,0,0]})");
  const auto b = write("b.json", R"({"values":[1.0,0.5,-0.25]})");
  const auto r = run({"exact", "--a", a, "--b", b});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["sign"], 1);
  EXPECT_EQ(j["log_abs"], 0.0);
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["config"]["precision_bits"], 256);
  EXPECT_EQ(j["config"]["seed"], 0);
}

TEST_F(CliTest, ExactMethodsAgree) {
  const auto a = write("a.json", R"({"values":[0.7]})");
  const auto b = write("b.json", R"({"values":[1.0,0.5,-0.25,0.1]})");
  double values[3];
  int k = 0;
  for (const char* method : {"confluent", "det", "rank-one"}) {
    auto r = run({"exact", "--a-spectrum", a, "--b-spectrum", b, "--method", method, "--n", "4"});
    if (std::string(method) == "det") {
      EXPECT_EQ(r.code, 2);  // repeated zeros in A
      values[k++] = NAN;
      continue;
    }
    ASSERT_EQ(r.code, 0) << r.err;
    values[k++] = Json::parse(r.out)["log_abs"].get<double>();
  }
  EXPECT_NEAR(values[0], values[2], 1e-9);
}

TEST_F(CliTest, ConvergeHeadline) {
  const auto m = write("u.json", R"({"kind":"uniform","a":0.0,"b":1.0})");
  const auto summary = (dir_ / "summary.json").string();
  const auto r = run({"converge", "--measure", m, "--t", "0.5", "--rank", "cbrt", "--dims", "8,16,32,64",
                      "--beta", "2", "--method", "exact", "--summary", summary});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 7u);
  EXPECT_EQ(ls[1], "n,m,lhs,rhs,gap,lower,upper,method,stderr");
  const auto cfg = Json::parse(ls[0].substr(9));
  EXPECT_EQ(cfg["dims"], Json::parse("[8,16,32,64]"));
  EXPECT_EQ(cfg["prefactor"], "none");
  EXPECT_EQ(cfg["samples"], 100000);
  const auto s = Json::parse(ls.back().substr(10));
  EXPECT_TRUE(s["monotone"].get<bool>());
  std::ifstream in(summary);
  EXPECT_EQ(Json::parse(in), s);
}

TEST_F(CliTest, DiluteWritesCsvFile) {
  const auto nu = write("nu.json", R"({"kind":"atomic","points":[0.3,0.6],"weights":[0.5,0.5]})");
  const auto mu = write("mu.json", R"({"kind":"uniform","a":0.0,"b":1.0})");
  const auto csv = (dir_ / "d.csv").string();
  const auto r = run({"dilute", "--nu", nu, "--mu", mu, "--n", "32", "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(csv);
  std::stringstream text;
  text << in.rdbuf();
  const auto ls = lines(text.str());
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[1], "a,n,m,lhs,rhs,gap,lower,upper,method,stderr");
  EXPECT_EQ(ls[2].substr(0, 7), "0.5,32,");
}

TEST_F(CliTest, McBitIdenticalAcrossWorkers) {
  const auto a = write("a.json", R"({"values":[0.9,0.2]})");
  const auto b = write("b.json", R"({"values":[1.0,0.5,-0.25,0.1]})");
  std::string first;
  for (const char* w : {"1", "2", "5"}) {
    const auto r = run({"mc", "--beta", "4", "--n", "4", "--samples", "3000", "--seed", "11", "--chunks", "6",
                        "--a-spectrum", a, "--b-spectrum", b, "--workers", w});
    ASSERT_EQ(r.code, 0) << r.err;
    if (first.empty()) first = r.out;
    EXPECT_EQ(r.out, first);
  }
  const auto j = Json::parse(first);
  for (const char* key : {"log_mean", "stderr", "samples", "seed", "chunks", "config"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_FALSE(j["config"].contains("workers"));
}

TEST_F(CliTest, MeasureOutputIsReadable) {
  const auto m = write("semi.json", R"({"kind":"semicircle","center":0.0,"radius":2.0})");
  const auto out = (dir_ / "sample.json").string();
  auto r = run({"measure", "--measure", m, "--sample", "6", "--output", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::load_measure(out), SpectralMeasure::semicircle(0, 2));
  const auto s = io::load_spectrum(out);
  EXPECT_EQ(s.size(), 6u);
  // the emitted spectrum feeds back into the CLI
  r = run({"measure", "--spectrum", out, "--spacing", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_TRUE(j["spacing_ok"].get<bool>());
  EXPECT_EQ(j["rank"], 6);
  EXPECT_EQ(j["hilbert_edges"]["h_max"], nullptr);
  r = run({"measure", "--measure", m, "--compare", m});
  EXPECT_EQ(Json::parse(r.out)["bl_distance"], 0.0);
}

TEST_F(CliTest, ExitCodes) {
  const auto a = write("a.json", R"({"values":[0.9,0.2,0]})");
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"exact", "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"transform", "--measure", a, "--t-grid", "1:0:0.1"}).code, cli::kExitUsage);

  auto r = run({"mc", "--beta", "4", "--a", a, "--b", a});
  EXPECT_EQ(r.code, cli::kExitDomain);
  const auto diag = Json::parse(r.err);
  EXPECT_EQ(diag["error"], "domain");
  EXPECT_FALSE(diag["message"].get<std::string>().empty());

  const auto bad = write("bad.json", R"({"kind":"atomic","points":[0,1],"weights":[0.5,0.2]})");
  EXPECT_EQ(run({"transform", "--measure", bad}).code, cli::kExitDomain);
  EXPECT_EQ(run({"exact", "--beta", "1", "--a", a, "--b", a}).code, cli::kExitDomain);

  std::string av = R"({"values":[)", bv = av;
  for (int i = 0; i < 48; ++i) {
    av += (i ? "," : "") + std::string(i < 6 ? "2" : "0");
    bv += (i ? "," : "") + std::to_string((i + 0.5) / 48);
  }
  const auto big_a = write("big_a.json", av + "]}");
  const auto big_b = write("big_b.json", bv + "]}");
  r = run({"exact", "--a", big_a, "--b", big_b, "--precision-bits", "64"});
  EXPECT_EQ(r.code, cli::kExitPrecision) << r.err;
  EXPECT_EQ(Json::parse(r.err)["error"], "precision");
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("converge"), std::string::npos);
}
