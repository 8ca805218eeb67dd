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

#ifndef DSIEVE_CLI_HPP
#define DSIEVE_CLI_HPP

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dsieve/config.hpp"
#include "dsieve/error.hpp"
#include "dsieve/params.hpp"
#include "dsieve/report.hpp"
#include "dsieve/sieve.hpp"
#include "dsieve/validate.hpp"
#include "dsieve/witness.hpp"

namespace dsieve {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitConfig = 2,
  kExitEmptySurvivor = 3,
  kExitCapacity = 4,
  kExitVerdictFalse = 5,
  kExitDomain = 6,
};

struct RunRequest {
  std::string command;  // params | sieve | witness | certify | validate | dimension
  RunConfig config;
  unsigned threads = 1;
  std::optional<std::string> alpha_path;  // certify only
};

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<PhaseTiming> phases;
};

namespace detail {

class PhaseClock {
 public:
  explicit PhaseClock(std::vector<PhaseTiming>& sink) : sink_(sink) {}
  template <class F>
  auto operator()(const std::string& name, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      std::vector<PhaseTiming>& sink;
      std::string name;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        sink.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
      }
    } record{sink_, name, start};
    return f();
  }

 private:
  std::vector<PhaseTiming>& sink_;
};

inline SurvivorState run_sieve(const RunConfig& cfg, const GrowthSequence& seq, const SieveParams& p) {
  const SieveOptions opts = sieve_options_of(cfg);
  if (const auto window = window_of(cfg)) return sieve_range(seq, p, *window, cfg.n_from, cfg.n_to, opts);
  return sieve_auto(seq, p, cfg.n_from, cfg.n_to, strategy_of(cfg), cfg.seed, opts);
}

inline int write_certificate(const std::filesystem::path& out, const WitnessCertificate& cert,
                             const std::vector<DyadicCell>& chain, const GrowthSequence& seq, const RunConfig& cfg,
                             std::string& message) {
  write_text(out / "scores.csv", scores_csv(cert));
  write_json(out / "certificate.json", certificate_json(cert, chain, seq, cfg, "scores.csv"));
  message = std::string("verdict=") + (cert.verdict ? "true" : "false") +
            " min_score=" + to_decimal_string(cert.min_score, 10, MPFR_RNDD) + " at n=" +
            std::to_string(cert.argmin_n) + " target=" + to_decimal_string(cert.target.hi, 10, MPFR_RNDU);
  return cert.verdict ? kExitOk : kExitVerdictFalse;
}

inline int run_validate(const std::filesystem::path& out, const RunConfig& cfg, const GrowthSequence& seq,
                        SieveParams p, unsigned threads, std::vector<PhaseTiming>& phases, std::string& message) {
  PhaseClock clock(phases);
  Json reports = Json::array();
  auto add = [&](const LemmaReport& r, const std::string& mode, const std::string& file) {
    Json j = lemma_json(r);
    j["h_mode"] = mode;
    j["detail_csv"] = file;
    write_text(out / file, lemma_csv(r));
    reports.push_back(j);
  };
  for (const HMode mode : {HMode::effective, HMode::paper}) {
    SieveParams q = p;
    q.h_mode = mode;
    const std::string tag = to_string(mode);
    clock("lemma1_" + tag, [&] {
      const auto samples = sample_lemma1(seq, q, cfg.l1_n_lo, cfg.l1_n_hi, cfg.l1_samples, cfg.seed);
      add(lemma1_check(seq, q, samples, threads), tag, "lemma1_" + tag + ".csv");
      return 0;
    });
    clock("retention_" + tag, [&] {
      const Index n = cfg.retention_n0;
      const Index m = h_of(q, seq, n);
      const Index M = h_of(q, seq, m);
      SieveParams r = q;
      r.n_start = std::min(q.n_start, n);
      RetentionOptions ropts;
      ropts.work_budget = cfg.work_budget;
      ropts.sieve = sieve_options_of(cfg);
      const auto cells = sample_retention_cells(seq, r, n, cfg.retention_samples, cfg.seed, ropts.sieve);
      const RetentionStudy study = study_retention(seq, r, n, m, M, cells, ropts, threads);
      add(lemma2_report(study), tag, "lemma2_" + tag + ".csv");
      add(lemma3_report(study), tag, "lemma3_" + tag + ".csv");
      LemmaReport budget = budget_check(q, m, M);
      add(budget, tag, "budget_" + tag + ".csv");
      return 0;
    });
  }
  write_json(out / "validation_report.json", {{"validation_report", reports}});
  bool all = true;
  for (const auto& r : reports)
    if (r["h_mode"] == "effective") all = all && r["pass"].get<bool>();
  message = std::string("effective-mode checks: ") + (all ? "all pass" : "not all pass; see validation_report.json");
  return kExitOk;
}

}  // namespace detail

/// Runs one command; never throws. Files go to config.out.
inline RunResult run(const RunRequest& req) {
  RunResult result;
  const RunConfig& cfg = req.config;
  const std::filesystem::path out = cfg.out;
  detail::PhaseClock clock(result.phases);
  try {
    RunConfig effective = cfg;
    std::optional<AlphaFile> alpha;
    if (req.command == "certify") {
      if (!req.alpha_path) throw ConfigError("cli", "alpha", "certify needs --alpha <file>");
      alpha = read_alpha_file(*req.alpha_path);
      for (const auto& [k, v] : alpha->settings) effective.set(k, v);
      if (alpha->n_from) effective.n_from = *alpha->n_from;
      if (alpha->n_to) effective.n_to = *alpha->n_to;
    }
    const GrowthSequence seq = sequence_of(effective);
    const SieveParams p = params_of(effective);
    std::filesystem::create_directories(out);

    if (req.command == "params") {
      clock("params", [&] {
        write_json(out / "params_report.json", params_report_json(p, seq, effective));
        return 0;
      });
      result.message = "c=" + to_decimal_string(p.c.lo, 12) + " 1/c=" + to_decimal_string(reciprocal(p.c).hi, 12);
    } else if (req.command == "sieve") {
      const SurvivorState state = clock("sieve", [&] { return detail::run_sieve(effective, seq, p); });
      write_text(out / "sieve_stats.csv", stats_csv(state));
      write_json(out / "survivors.json", survivors_json(state));
      result.message = "survivor_measure=" + decimal(state.survivor_measure());
    } else if (req.command == "witness") {
      const SurvivorState state = clock("sieve", [&] { return detail::run_sieve(effective, seq, p); });
      write_text(out / "sieve_stats.csv", stats_csv(state));
      write_json(out / "survivors.json", survivors_json(state));
      const Witness w = clock("extract", [&] { return extract_witness(state, strategy_of(effective), effective.seed); });
      const WitnessCertificate cert =
          clock("certify", [&] { return certify(w.alpha, seq, p, effective.n_from, effective.n_to, req.threads); });
      result.exit_code = detail::write_certificate(out, cert, w.chain, seq, effective, result.message);
    } else if (req.command == "certify") {
      const WitnessCertificate cert = clock(
          "certify", [&] { return certify(alpha->alpha, seq, p, effective.n_from, effective.n_to, req.threads); });
      result.exit_code = detail::write_certificate(out, cert, {}, seq, effective, result.message);
    } else if (req.command == "validate") {
      result.exit_code = detail::run_validate(out, effective, seq, p, req.threads, result.phases, result.message);
    } else if (req.command == "dimension") {
      const DimensionEstimate est = clock("dimension", [&] {
        const Ladder ladder = build_ladder(p, seq, effective.n_from, effective.ladder_depth);
        return eggleston_estimate(seq, p, ladder);
      });
      write_text(out / "dimension.csv", dimension_csv(est));
      write_json(out / "dimension.json", dimension_json(est));
      result.message = est.valid ? "dimension estimate valid" : "invalid at k=" + std::to_string(est.invalid_k);
    } else {
      throw ConfigError("cli", "command", "unknown command '" + req.command + "'");
    }
    emit_report(out, effective, req.command, result.phases);
  } catch (const ConfigError& e) {
    result.exit_code = kExitConfig;
    result.message = e.what();
  } catch (const EmptySurvivorError& e) {
    result.exit_code = kExitEmptySurvivor;
    result.message = e.what();
  } catch (const CapacityError& e) {
    result.exit_code = kExitCapacity;
    result.message = e.what();
  } catch (const DomainError& e) {
    result.exit_code = kExitDomain;
    result.message = e.what();
  } catch (const PrecisionError& e) {
    result.exit_code = kExitDomain;
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = kExitIo;
    result.message = e.what();
  }
  return result;
}

}  // namespace dsieve

#endif  // DSIEVE_CLI_HPP
