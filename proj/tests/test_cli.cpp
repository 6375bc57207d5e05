#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
  const auto d = fs::temp_directory_path() / "film_bounds_cli_test" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run(const std::string& args, const fs::path& dir)
{
  const std::string cmd = std::string(FILM_BOUNDS_CLI) + " " + args + " > " + (dir / "stdout.txt").string() +
                          " 2> " + (dir / "stderr.txt").string();
  const int s = std::system(cmd.c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(Cli, ClassifyRegimeC)
{
  const auto d = scratch("classify");
  ASSERT_EQ(run("classify --sigma 0.01 --gamma 1 --out " + d.string(), d), 0);
  const auto j = nlohmann::json::parse(slurp(d / "classify.json"));
  EXPECT_EQ(j["regime"], "C");
  EXPECT_EQ(j["a"], "1/2");
  EXPECT_EQ(j["b"], "5/8");
  ASSERT_EQ(run("classify --sigma 0.01 --gamma 0 --out " + d.string(), d), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(d / "classify.json"))["regime"], "D");
}

TEST(Cli, UsageErrors)
{
  const auto d = scratch("usage");
  EXPECT_EQ(run("classify --sigma 1.5 --gamma 1 --out " + d.string(), d), 1);
  EXPECT_EQ(run("poincare --n 0 --out " + d.string(), d), 1);
  EXPECT_EQ(run("sweep --axis sigma --gamma 1 --values 0.01,0.02 --out " + d.string(), d), 1);
  EXPECT_EQ(run("frobnicate", d), 1);
}

TEST(Cli, ConstructErrorsNameTheInequality)
{
  const auto d = scratch("construct_err");
  EXPECT_EQ(run("construct --kind branching --sigma 0.01 --gamma 100 --out " + d.string(), d), 1);
  EXPECT_NE(slurp(d / "stderr.txt").find("gamma > sigma^{-4/9}"), std::string::npos);
}

TEST(Cli, ConstructFlat)
{
  const auto d = scratch("construct_flat");
  ASSERT_EQ(run("construct --kind flat --out " + d.string(), d), 0);
  const auto e = nlohmann::json::parse(slurp(d / "energy.json"));
  EXPECT_EQ(e["bonding"], 0.0);
  EXPECT_EQ(e["total"], 1.0);
  EXPECT_TRUE(fs::exists(d / "field.csv"));
  EXPECT_TRUE(fs::exists(d / "construction.json"));
}

TEST(Cli, MinimizeFromConstructOutput)
{
  const auto d = scratch("minimize");
  ASSERT_EQ(run("construct --kind laminate --sigma 0.01 --gamma 10 --nx 33 --ny 257 --out " + d.string(), d), 0);
  ASSERT_EQ(run("minimize --input " + (d / "field.csv").string() + " --max-iterations 10 --out " + d.string(), d), 0);
  std::istringstream log(slurp(d / "minimize_log.csv"));
  std::string line;
  std::getline(log, line);
  double prev = INFINITY;
  int rows = 0;
  while (std::getline(log, line)) {
    std::istringstream ls(line);
    std::string cell;
    for (int k = 0; k < 5; ++k)
      std::getline(ls, cell, ',');
    const double total = std::stod(cell);
    EXPECT_LE(total, prev);
    prev = total;
    ++rows;
  }
  EXPECT_GE(rows, 2);
  EXPECT_EQ(run("minimize --input " + (d / "missing.csv").string() + " --out " + d.string(), d), 2);
  EXPECT_NE(slurp(d / "stderr.txt").find("missing.csv"), std::string::npos);
}

TEST(Cli, ConfigAndFlagPrecedence)
{
  const auto d = scratch("config");
  {
    std::ofstream c(d / "cfg.json");
    c << R"({"sigma": 0.01, "gamma": 1})";
  }
  ASSERT_EQ(run("classify --config " + (d / "cfg.json").string() + " --out " + d.string(), d), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(d / "classify.json"))["regime"], "C");
  ASSERT_EQ(run("classify --config " + (d / "cfg.json").string() + " --gamma 200 --out " + d.string(), d), 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(d / "classify.json"))["regime"], "A");
  EXPECT_EQ(run("classify --config " + (d / "nope.json").string(), d), 2);
}

TEST(Cli, PoincareDeterministic)
{
  const auto d = scratch("poincare");
  ASSERT_EQ(run("poincare --n 20 --seed 3 --out " + (d / "a").string(), d), 0);
  ASSERT_EQ(run("poincare --n 20 --seed 3 --out " + (d / "b").string(), d), 0);
  EXPECT_EQ(slurp(d / "a" / "poincare.json"), slurp(d / "b" / "poincare.json"));
  EXPECT_TRUE(nlohmann::json::parse(slurp(d / "a" / "poincare.json"))["pass"].get<bool>());
}
