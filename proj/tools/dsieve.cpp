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

// dsieve command line: params | sieve | witness | certify | validate | dimension

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsieve/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dyadic interval sieve for lower bounds on n ln n ||alpha t_n||"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, alpha_path;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::vector<std::string> overrides;

  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--out", out_dir, "output directory (overrides config key out)");
  app.add_option("--threads", threads, "worker cap; outputs do not depend on it")->check(CLI::PositiveNumber);
  app.add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; }, "seed (overrides config key seed)");
  app.add_option("--set", overrides, "config override key=value (repeatable)");

  for (const char* name : {"params", "sieve", "witness", "validate", "dimension"}) app.add_subcommand(name);
  app.add_subcommand("certify")->add_option("--alpha", alpha_path, "certificate or alpha JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dsieve::kExitConfig;
  }

  dsieve::RunRequest req;
  req.command = app.get_subcommands().front()->get_name();
  req.threads = threads;
  try {
    if (!config_path.empty()) req.config = dsieve::load_config(config_path);
    for (const auto& o : overrides) dsieve::apply_override(req.config, o);
  } catch (const dsieve::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dsieve::kExitConfig;
  }
  if (!out_dir.empty()) req.config.out = out_dir;
  if (seed_given) req.config.seed = seed;
  if (!alpha_path.empty()) req.alpha_path = alpha_path;

  const dsieve::RunResult result = dsieve::run(req);
  (result.exit_code == 0 ? std::cout : std::cerr) << req.command << ": " << result.message << "\n";
  return result.exit_code;
}
