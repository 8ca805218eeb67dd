/* Copyright 2026 The dsieve Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "dsieve/cli.hpp"
#include "dsieve/config.hpp"
#include "dsieve/report.hpp"

namespace dsieve {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(testing::TempDir()) / ("dsieve_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

RunRequest request(const std::string& command, const fs::path& out) {
  RunRequest r;
  r.command = command;
  r.config.out = out.string();
  r.config.n_to = 200;
  return r;
}

TEST(Config, ParsesCommentsAndBlankLines) {
  RunConfig cfg;
  apply_config_text(cfg, "# run\n\ngamma = 3/2\n  n_to=500   # upper\nstrategy = max-run\n");
  EXPECT_EQ(cfg.gamma, "3/2");
  EXPECT_EQ(cfg.n_to, 500);
  EXPECT_EQ(cfg.strategy, "max-run");
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  RunConfig cfg;
  EXPECT_THROW(apply_config_text(cfg, "gama = 2\n"), ConfigError);
  EXPECT_THROW(apply_config_text(cfg, "n_to = many\n"), ConfigError);
  EXPECT_THROW(apply_config_text(cfg, "gamma = two\n"), ConfigError);
  EXPECT_THROW(apply_config_text(cfg, "just text\n"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "seed"), ConfigError);
}

TEST(Config, OverridesApplyInOrder) {
  RunConfig cfg;
  apply_override(cfg, "seed=4");
  apply_override(cfg, "seed = 9");
  EXPECT_EQ(cfg.seed, 9u);
}

TEST(Config, DerivedObjectsValidate) {
  RunConfig cfg;
  cfg.c_mode = "custom";
  EXPECT_THROW(params_of(cfg), ConfigError);
  cfg.c_value = "1/2";
  EXPECT_EQ(params_of(cfg).c.lo, Rational(1, 2));
  cfg.h_mode = "fast";
  EXPECT_THROW(params_of(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.window = "20:5";
  ASSERT_TRUE(window_of(cfg).has_value());
  EXPECT_EQ(window_of(cfg)->index, 5u);
  cfg.window = "3:8";
  EXPECT_THROW(window_of(cfg), ConfigError);
  cfg.strategy = "best";
  EXPECT_THROW(strategy_of(cfg), ConfigError);
}

TEST(Run, ParamsWritesReportAndManifest) {
  const fs::path out = scratch("params");
  const RunResult r = run(request("params", out));
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  EXPECT_TRUE(fs::exists(out / "params_report.json"));
  const std::string manifest = read_text(out / "manifest.txt");
  EXPECT_NE(manifest.find("command params"), std::string::npos);
  EXPECT_NE(manifest.find(sha256_hex(read_text(out / "params_report.json"))), std::string::npos);
}

TEST(Run, ConfigErrorsExitTwo) {
  RunRequest req = request("sieve", scratch("bad"));
  req.config.gamma = "-1";
  EXPECT_EQ(run(req).exit_code, kExitConfig);
  req = request("explode", scratch("bad2"));
  EXPECT_EQ(run(req).exit_code, kExitConfig);
  req = request("certify", scratch("bad3"));
  EXPECT_EQ(run(req).exit_code, kExitConfig);
}

TEST(Run, CapacityExitsFour) {
  RunRequest req = request("sieve", scratch("cap"));
  req.config.window = "0:0";
  req.config.max_runs = 3;
  EXPECT_EQ(run(req).exit_code, kExitCapacity);
}

TEST(Run, IdenticalRunsAreByteIdentical) {
  const fs::path a = scratch("same_a"), b = scratch("same_b");
  ASSERT_EQ(run(request("witness", a)).exit_code, kExitOk);
  ASSERT_EQ(run(request("witness", b)).exit_code, kExitOk);
  for (const char* f : {"sieve_stats.csv", "survivors.json", "scores.csv", "certificate.json"})
    EXPECT_EQ(read_text(a / f), read_text(b / f)) << f;
}

TEST(Run, WitnessBundleAndCertifyRoundTrip) {
  const fs::path w = scratch("witness"), c = scratch("certify");
  const RunResult first = run(request("witness", w));
  ASSERT_EQ(first.exit_code, kExitOk) << first.message;
  const std::string manifest = read_text(w / "manifest.txt");
  for (const char* f : {"sieve_stats.csv", "survivors.json", "scores.csv", "certificate.json"})
    EXPECT_NE(manifest.find(std::string("  ") + f), std::string::npos) << f;
  RunRequest req;
  req.command = "certify";
  req.config.out = c.string();
  req.alpha_path = (w / "certificate.json").string();
  const RunResult again = run(req);
  ASSERT_EQ(again.exit_code, kExitOk) << again.message;
  EXPECT_EQ(read_text(w / "scores.csv"), read_text(c / "scores.csv"));
  const Json a = Json::parse(read_text(w / "certificate.json")), b = Json::parse(read_text(c / "certificate.json"));
  EXPECT_EQ(a["min_score"], b["min_score"]);
  EXPECT_EQ(a["verdict"], b["verdict"]);
}

TEST(Run, HalfFailsVerdict) {
  const fs::path dir = scratch("half");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "alpha.json");
    f << R"({"alpha": {"num": "1", "level": 1}, "n_from": 32, "n_to": 40})";
  }
  RunRequest req;
  req.command = "certify";
  req.config.out = (dir / "out").string();
  req.alpha_path = (dir / "alpha.json").string();
  const RunResult r = run(req);
  EXPECT_EQ(r.exit_code, kExitVerdictFalse) << r.message;
  const Json cert = Json::parse(read_text(dir / "out" / "certificate.json"));
  EXPECT_FALSE(cert["verdict"].get<bool>());
}

TEST(Run, MalformedAlphaIsConfigError) {
  const fs::path dir = scratch("malformed");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "alpha.json");
    f << "{not json";
  }
  RunRequest req;
  req.command = "certify";
  req.config.out = (dir / "out").string();
  req.alpha_path = (dir / "alpha.json").string();
  EXPECT_EQ(run(req).exit_code, kExitConfig);
}

TEST(Run, DimensionWritesSeries) {
  const fs::path out = scratch("dimension");
  const RunResult r = run(request("dimension", out));
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  const Json j = Json::parse(read_text(out / "dimension.json"));
  EXPECT_EQ(j["D"].size(), 3u);
  EXPECT_TRUE(fs::exists(out / "dimension.csv"));
}

TEST(Run, ManifestOfEmptyDirectoryListsNoFiles) {
  const fs::path out = scratch("empty");
  const std::string text = emit_report(out, RunConfig{}, "none", {});
  EXPECT_EQ(text.substr(text.find("[files]")), "[files]\n");
}

}  // namespace
}  // namespace dsieve
