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

// Report files. Everything except manifest.txt is a pure function of the
// run configuration, so identical runs give byte-identical files. Output
// schemas are described in docs/output-schema.md.

#ifndef DSIEVE_REPORT_HPP
#define DSIEVE_REPORT_HPP

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dsieve/config.hpp"
#include "dsieve/error.hpp"
#include "dsieve/numeric.hpp"
#include "dsieve/params.hpp"
#include "dsieve/sieve.hpp"
#include "dsieve/validate.hpp"
#include "dsieve/witness.hpp"
#include "json.hpp"

namespace dsieve {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

class IoError : public Error {
 public:
  IoError(std::string parameter, const std::string& what) : Error("cli", std::move(parameter), what) {}
};

inline std::string decimal(const Rational& q, int digits = 12) { return to_decimal_string(q, digits); }

inline Json enclosure_json(const Enclosure& e, int digits = 15) {
  return {{"lo", to_fraction_string(e.lo)},
          {"hi", to_fraction_string(e.hi)},
          {"lo_decimal", to_decimal_string(e.lo, digits, MPFR_RNDD)},
          {"hi_decimal", to_decimal_string(e.hi, digits, MPFR_RNDU)}};
}

inline Json cell_json(const DyadicCell& c) { return {{"level", c.level}, {"index", c.index}}; }

// ---------------------------------------------------------------------------
// Files

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("out", "cannot write " + path.string());
  out << text;
  if (!out) throw IoError("out", "write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("path", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("digest", "sha256 failed");
  std::ostringstream out;
  for (unsigned i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

// ---------------------------------------------------------------------------
// Sieve

inline std::string stats_csv(const SurvivorState& state) {
  std::ostringstream out;
  out << "n,l_n,delta_n,cells_removed,removed_measure,survivor_measure,survivor_measure_decimal\n";
  for (const auto& s : state.stats()) {
    char delta[32];
    std::snprintf(delta, sizeof delta, "%.10e", s.delta);
    const Rational removed = Rational(from_u64(s.cells_removed)) * pow2q(-s.level);
    out << s.n << ',' << s.level << ',' << delta << ',' << s.cells_removed << ',' << to_fraction_string(removed)
        << ',' << to_fraction_string(s.survivor_measure) << ',' << decimal(s.survivor_measure) << '\n';
  }
  return out.str();
}

inline Json survivors_json(const SurvivorState& state) {
  Json path = Json::array();
  for (const auto& c : state.zoom_path()) path.push_back(cell_json(c));
  return {{"window", cell_json(state.window())},
          {"zoom_path", path},
          {"processed_up_to", state.processed_up_to()},
          {"level", state.level()},
          {"survivor_cells", state.survivor_count()},
          {"runs", state.run_count()},
          {"survivor_measure", to_fraction_string(state.survivor_measure())},
          {"survivor_measure_decimal", decimal(state.survivor_measure())}};
}

// ---------------------------------------------------------------------------
// Witness certificate

inline std::string scores_csv(const WitnessCertificate& cert) {
  std::ostringstream out;
  out << "n,score_lower_bound,score_decimal\n";
  for (Index n = cert.n_from; n <= cert.n_to; ++n) {
    const Rational& s = cert.score(n);
    out << n << ',' << to_fraction_string(s) << ',' << to_decimal_string(s, 12, MPFR_RNDD) << '\n';
  }
  return out.str();
}

inline Json certificate_json(const WitnessCertificate& cert, const std::vector<DyadicCell>& chain,
                             const GrowthSequence& seq, const RunConfig& cfg, const std::string& scores_path) {
  Json ch = Json::array();
  for (const auto& c : chain) ch.push_back(cell_json(c));
  return {{"alpha", {{"num", cert.alpha.numerator.get_str()}, {"level", cert.alpha.level}}},
          {"alpha_decimal", decimal(cert.alpha.value(), 20)},
          {"n_from", cert.n_from},
          {"n_to", cert.n_to},
          {"min_score", to_fraction_string(cert.min_score)},
          {"min_score_decimal", to_decimal_string(cert.min_score, 12, MPFR_RNDD)},
          {"argmin_n", cert.argmin_n},
          {"target_1_over_c", enclosure_json(cert.target)},
          {"verdict", cert.verdict},
          {"scores_csv_path", scores_path},
          {"chain", ch},
          {"sequence", seq.spec()},
          {"gamma", cfg.gamma},
          {"c_mode", cfg.c_mode},
          {"c_value", cfg.c_value},
          {"precision", cfg.precision}};
}

/// What `certify` needs from a certificate or a bare alpha file.
struct AlphaFile {
  DyadicRational alpha;
  std::optional<Index> n_from, n_to;
  std::vector<std::pair<std::string, std::string>> settings;  // config keys carried by the file
};

inline AlphaFile read_alpha_file(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::exception& e) {
    throw ConfigError("cli", "alpha", std::string("malformed alpha JSON: ") + e.what());
  }
  const Json& a = j.contains("alpha") ? j["alpha"] : j;
  if (!a.contains("num") || !a.contains("level")) throw ConfigError("cli", "alpha", "alpha needs num and level");
  AlphaFile f;
  const std::string num = a["num"].is_string() ? a["num"].get<std::string>() : a["num"].dump();
  Integer numerator;
  if (numerator.set_str(num, 10) != 0) throw ConfigError("cli", "alpha", "bad numerator '" + num + "'");
  f.alpha = DyadicRational::make(numerator, a["level"].get<int>());
  if (j.contains("n_from")) f.n_from = j["n_from"].get<Index>();
  if (j.contains("n_to")) f.n_to = j["n_to"].get<Index>();
  for (const char* key : {"sequence", "gamma", "c_mode", "c_value"})
    if (j.contains(key) && j[key].is_string() && !j[key].get<std::string>().empty())
      f.settings.emplace_back(key, j[key].get<std::string>());
  if (j.contains("precision")) f.settings.emplace_back("precision", std::to_string(j["precision"].get<int>()));
  return f;
}

// ---------------------------------------------------------------------------
// Params

inline Json params_report_json(const SieveParams& p, const GrowthSequence& seq, const RunConfig& cfg) {
  Json j;
  j["log_base"] = "natural";
  j["gamma"] = to_fraction_string(p.gamma);
  j["c_mode"] = to_string(p.c_mode);
  j["h_mode"] = to_string(p.h_mode);
  j["c"] = enclosure_json(p.c);
  j["one_over_c"] = enclosure_json(reciprocal(p.c));
  j["eps2"] = to_fraction_string(p.eps2);
  j["v"] = to_fraction_string(p.v);
  j["n_start"] = p.n_start;
  j["sequence"] = seq.spec();

  Json table = Json::array();
  for (Index n : {Index{2}, Index{10}, Index{32}, Index{100}, Index{1000}, Index{10000}}) {
    if (n < seq.n_min()) continue;
    Json row;
    row["n"] = n;
    row["delta_n"] = enclosure_json(delta(p, n), 12);
    row["l_n"] = dyadic_level(p, seq, n);
    row["h_paper"] = h_paper(p, n);
    try {
      row["h_effective"] = h_effective(p, seq, n);
    } catch (const CapacityError&) {
      row["h_effective"] = nullptr;
    }
    table.push_back(row);
  }
  j["delta_table"] = table;

  const Index n0 = std::max({cfg.n_from, seq.n_min(), Index{2}});
  try {
    const Ladder ladder = build_ladder(p, seq, n0, cfg.ladder_depth);
    Json entries = Json::array();
    for (Index n : ladder.entries) entries.push_back({{"n", n}, {"l_n", dyadic_level(p, seq, n)}});
    j["ladder"] = {{"mode", to_string(ladder.mode)}, {"n0", n0}, {"entries", entries}};
    const LadderReport lr = check_ladder(p, seq, ladder);
    Json steps = Json::array();
    for (const auto& s : lr.steps)
      steps.push_back({{"n_prev", s.n_prev},
                       {"n_next", s.n_next},
                       {"growth_lower", s.growth_lower},
                       {"growth_upper", s.growth_upper},
                       {"depth_gap", s.depth_gap},
                       {"log_ratio", s.log_ratio}});
    j["ladder_report"] = {{"steps", steps},
                          {"growth_pass", lr.growth_pass},
                          {"depth_gap_pass", lr.depth_gap_pass},
                          {"iterated_growth", "derived from per-step growth bounds"}};
    const SeriesReport sr = series_report(p, seq, ladder, p.v);
    Json terms = Json::array();
    for (const auto& t : sr.terms) terms.push_back({{"k", t.k}, {"log_term", t.log_term}});
    j["series_report"] = {{"omega", to_fraction_string(sr.omega)},
                          {"omega_decimal", decimal(sr.omega)},
                          {"v_position", to_string(sr.v_position)},
                          {"terms", terms},
                          {"verdict", sr.verdict}};
  } catch (const CapacityError& e) {
    j["ladder"] = {{"error", e.what()}};
  }
  return {{"params_report", j}};
}

// ---------------------------------------------------------------------------
// Validation

inline Json lemma_json(const LemmaReport& r) {
  Json j = {{"lemma_id", r.lemma_id},
            {"samples", r.samples},
            {"worst_ratio", r.worst_ratio},
            {"bound", r.bound},
            {"pass", r.pass},
            {"status", r.status}};
  if (!r.note.empty()) j["note"] = r.note;
  for (const auto& [k, v] : r.extras) j[k] = v;
  return j;
}

inline std::string lemma_csv(const LemmaReport& r) {
  std::ostringstream out;
  out << "n,m,M,J_level,J_index,status,ratio,bound,pass,r,good,required\n";
  out << std::setprecision(12);
  for (const auto& d : r.details)
    out << d.n << ',' << d.m << ',' << d.M << ',' << d.J.level << ',' << d.J.index << ',' << d.status << ','
        << d.ratio << ',' << d.bound << ',' << (d.pass ? 1 : 0) << ',' << d.r << ',' << d.good << ','
        << d.required << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Dimension

inline std::string dimension_csv(const DimensionEstimate& est) {
  std::ostringstream out;
  out << std::setprecision(15);
  out << "k,n_k,l_k,N_k,ln_N_k,D_k,log_series_term\n";
  for (std::size_t k = 0; k < est.levels.size(); ++k) {
    out << k << ',' << (k < est.ladder.size() ? est.ladder[k] : 0) << ',' << est.levels[k] << ',';
    if (k == 0) {
      out << ",,,\n";
      continue;
    }
    out << est.counts[k - 1].get_str() << ',' << est.log_counts[k - 1] << ',' << est.D[k - 1] << ',';
    if (k >= 2) out << est.log_series[k - 2];
    out << '\n';
  }
  return out.str();
}

inline Json dimension_json(const DimensionEstimate& est) {
  Json counts = Json::array(), d = Json::array();
  for (const auto& n : est.counts) counts.push_back(n.get_str());
  for (double x : est.D) d.push_back(std::isfinite(x) ? Json(x) : Json(nullptr));
  return {{"ladder", est.ladder.entries},
          {"levels", est.levels},
          {"counts", counts},
          {"D", d},
          {"log_series_terms", est.log_series},
          {"valid", est.valid},
          {"invalid_k", est.invalid_k},
          {"positive", est.positive},
          {"nondecreasing", est.nondecreasing}};
}

// ---------------------------------------------------------------------------
// Manifest

struct PhaseTiming {
  std::string phase;
  double seconds = 0;
};

/// Writes manifest.txt listing the config, per-phase wall-clock and the
/// sha256 of every other file in the directory (sorted by name).
inline std::string emit_report(const std::filesystem::path& dir, const RunConfig& cfg, const std::string& command,
                               const std::vector<PhaseTiming>& phases) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("out", "cannot create " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != "manifest.txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::ostringstream out;
  out << "dsieve " << kVersion << "\n";
  out << "command " << command << "\n";
  out << "[config]\n";
  for (const auto& [k, v] : cfg.echo()) out << k << " = " << v << "\n";
  out << "[phases]\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& p : phases) out << p.phase << " " << p.seconds << " s\n";
  out << "[files]\n";
  for (const auto& f : files)
    out << sha256_hex(read_text(f)) << "  " << std::filesystem::relative(f, dir).generic_string() << "\n";
  const std::string text = out.str();
  write_text(dir / "manifest.txt", text);
  return text;
}

}  // namespace dsieve

#endif  // DSIEVE_REPORT_HPP
