#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "logcorr/branching.hpp"
#include "logcorr/charpoly.hpp"
#include "logcorr/closed_forms.hpp"
#include "logcorr/common.hpp"
#include "logcorr/ensembles.hpp"
#include "logcorr/mom.hpp"
#include "logcorr/number_models.hpp"
#include "logcorr/rng.hpp"
#include "logcorr/symfunc.hpp"
#include "logcorr/zeta.hpp"

namespace logcorr {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Deterministic parallelism: replicate r always uses the stream derived from
// (master seed, experiment label, r), so serial and parallel runs coincide.
// ---------------------------------------------------------------------------

inline int thread_count(int override_threads = 0) {
  if (override_threads > 0) return override_threads;
  if (const char* env = std::getenv("LOGCORR_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int use = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  pool.reserve(static_cast<std::size_t>(use));
  for (int t = 0; t < use; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Parallel experiment drivers shared by the CLI and the acceptance suite.
// ---------------------------------------------------------------------------

struct ScanRow {
  double x = 0.0;          // the swept parameter (N, depth, ...)
  double value = 0.0;
  double stderr_value = 0.0;
};

/// Mean of field_max over `trials` independent draws for each N.
inline std::vector<ScanRow> field_max_scan(Group group, const std::vector<int>& n_values,
                                           int trials, double arc_length, int grid_factor,
                                           int refine_iters, std::optional<double> beta,
                                           std::uint64_t seed, int threads) {
  std::vector<ScanRow> rows;
  for (int n : n_values) {
    std::vector<double> vals(static_cast<std::size_t>(trials));
    const std::string label = "field-max/" + std::to_string(n);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t r) {
      Rng rng = Rng::substream(seed, label, r);
      const EigenphaseSet eigs = sample_eigenphases(group, n, beta, rng);
      vals[r] = field_max(eigs, arc_length, grid_factor, refine_iters).value;
    });
    RunningStats st;
    for (double v : vals) st.push(v);
    rows.push_back({static_cast<double>(n), st.mean(), st.stderr_mean()});
  }
  return rows;
}

/// Mean of g_N(beta;A)^k over trials, parallel over replicates.
inline Estimate mom_mc_parallel(Group group, int k, double beta, int n, int trials,
                                int theta_nodes, std::uint64_t seed, int threads) {
  std::vector<double> vals(static_cast<std::size_t>(trials));
  const std::string label = "mom-mc/" + group_name(group) + "/" + std::to_string(n);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t r) {
    Rng rng = Rng::substream(seed, label, r);
    vals[r] = mom_single_draw(group, k, beta, n, theta_nodes, rng);
  });
  RunningStats st;
  for (double v : vals) st.push(v);
  return {st.mean(), st.stderr_mean()};
}

/// BRW / REM maxima scan, parallel over trials.
template <class Draw>
inline std::vector<ScanRow> max_scan_parallel(const std::vector<int>& depths, int trials,
                                              const std::string& label, std::uint64_t seed,
                                              int threads, Draw&& draw) {
  std::vector<ScanRow> rows;
  for (int n : depths) {
    std::vector<double> vals(static_cast<std::size_t>(trials));
    const std::string full = label + "/" + std::to_string(n);
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t r) {
      Rng rng = Rng::substream(seed, full, r);
      vals[r] = draw(n, rng);
    });
    RunningStats st;
    for (double v : vals) st.push(v);
    rows.push_back({static_cast<double>(n), st.mean(), st.stderr_mean()});
  }
  return rows;
}

/// Fitted log-n coefficient after removing the theory linear term.
inline LinearFit subleading_fit(const std::vector<ScanRow>& rows, double linear_coeff) {
  std::vector<double> lx, ly;
  for (const auto& r : rows) {
    lx.push_back(std::log(r.x));
    ly.push_back(r.value - linear_coeff * r.x);
  }
  return linear_fit(lx, ly);
}

// ---------------------------------------------------------------------------
// Declarative experiment configuration.
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> params;  // flat, dotted keys
  std::uint64_t seed = 1;
  std::string output_path = "out/run";

  std::string serialize() const {
    std::ostringstream os;
    os << "experiment = " << experiment << "\n";
    os << "seed = " << seed << "\n";
    os << "output = " << output_path << "\n";
    for (const auto& [k, v] : params) os << k << " = " << v << "\n";
    return os.str();
  }

  static ExperimentConfig parse(const std::string& text) {
    ExperimentConfig cfg;
    cfg.output_path.clear();
    std::istringstream is(text);
    std::string line;
    bool have_experiment = false;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      require(eq != std::string::npos, "config: expected 'key = value', got: " + line);
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      require(!key.empty() && !value.empty(), "config: empty key or value in: " + line);
      if (key == "experiment") {
        cfg.experiment = value;
        have_experiment = true;
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "output") {
        cfg.output_path = value;
      } else {
        require(!cfg.params.count(key), "config: duplicate key " + key);
        cfg.params[key] = value;
      }
    }
    require(have_experiment, "config: missing 'experiment' key");
    if (cfg.output_path.empty()) cfg.output_path = "out/" + cfg.experiment;
    return cfg;
  }
};

/// One results table: a header and string-formatted cells (floats already
/// printed with 17 significant digits).
struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunRecord {
  ExperimentConfig config;
  std::string version = kVersion;
  double runtime_s = 0.0;
  ResultTable table;
  nlohmann::json summary;

  std::string csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.header.size(); ++i)
      os << (i ? "," : "") << table.header[i];
    os << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
    return os.str();
  }

  nlohmann::json manifest() const {
    nlohmann::json j;
    j["experiment"] = config.experiment;
    j["params"] = config.params;
    j["seed"] = config.seed;
    j["version"] = version;
    j["runtime_s"] = runtime_s;
    j["summary"] = summary;
    return j;
  }
};

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

struct ParamReader {
  const ExperimentConfig& cfg;
  mutable std::vector<std::string> allowed;

  std::optional<std::string> raw(const std::string& key) const {
    allowed.push_back(key);
    const auto it = cfg.params.find(key);
    return it == cfg.params.end() ? std::nullopt : std::optional<std::string>(it->second);
  }
  std::string str(const std::string& key, const std::string& dflt) const {
    return raw(key).value_or(dflt);
  }
  std::string str_required(const std::string& key) const {
    auto v = raw(key);
    require(v.has_value(), "config: missing required key '" + key + "'");
    return *v;
  }
  long integer(const std::string& key, std::optional<long> dflt = std::nullopt) const {
    auto v = raw(key);
    if (!v) {
      require(dflt.has_value(), "config: missing required key '" + key + "'");
      return *dflt;
    }
    try {
      std::size_t pos = 0;
      const long out = std::stol(*v, &pos);
      require(pos == v->size(), "trailing characters");
      return out;
    } catch (...) {
      throw Error("config: key '" + key + "' expects an integer, got '" + *v + "'");
    }
  }
  double real(const std::string& key, std::optional<double> dflt = std::nullopt) const {
    auto v = raw(key);
    if (!v) {
      require(dflt.has_value(), "config: missing required key '" + key + "'");
      return *dflt;
    }
    try {
      return to_double(parse_rational(*v));
    } catch (...) {
      try {
        return std::stod(*v);
      } catch (...) {
        throw Error("config: key '" + key + "' expects a number, got '" + *v + "'");
      }
    }
  }
  BigRat rational(const std::string& key, const std::string& dflt) const {
    return parse_rational(str(key, dflt));
  }
  bool flag(const std::string& key, bool dflt) const {
    const std::string v = str(key, dflt ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error("config: key '" + key + "' expects a boolean, got '" + v + "'");
  }
  /// "4" -> {4};  "2,4,8" -> {2,4,8};  "1..6" -> {1,...,6}
  std::vector<int> int_list(const std::string& key, const std::string& dflt) const {
    const std::string v = str(key, dflt);
    std::vector<int> out;
    const auto dots = v.find("..");
    if (dots != std::string::npos) {
      const int a = std::stoi(v.substr(0, dots));
      const int b = std::stoi(v.substr(dots + 2));
      require(b >= a, "config: bad range '" + v + "'");
      for (int i = a; i <= b; ++i) out.push_back(i);
      return out;
    }
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
    require(!out.empty(), "config: empty list for '" + key + "'");
    return out;
  }
  std::vector<double> real_list(const std::string& key, const std::string& dflt) const {
    const std::string v = str(key, dflt);
    std::vector<double> out;
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(to_double(parse_rational(tok)));
    require(!out.empty(), "config: empty list for '" + key + "'");
    return out;
  }
  Group group(const std::string& key, const std::string& dflt) const {
    const std::string v = str(key, dflt);
    if (v == "unitary") return Group::Unitary;
    if (v == "so-even") return Group::SpecialOrthogonalEven;
    if (v == "o-minus") return Group::OrthogonalMinus;
    if (v == "symplectic") return Group::Symplectic;
    if (v == "cbeta") return Group::CircularBeta;
    throw Error("config: unknown group '" + v + "'");
  }
  void finish() const {
    for (const auto& [k, v] : cfg.params) {
      bool ok = false;
      for (const auto& a : allowed)
        if (a == k) ok = true;
      require(ok, "config: unknown key '" + k + "' for experiment " + cfg.experiment);
    }
  }
};

}  // namespace detail

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::vector<std::string> keys;  // "key: meaning"
};

/// Dispatch table: every experiment produces a RunRecord from its config.
RunRecord run_experiment(const ExperimentConfig& cfg, int threads);

inline const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> cat = {
      {"field-max",
       "mean maximum of log|P_N| over [0, L) across Haar draws",
       {"group (unitary)", "n (list or a..b, required)", "trials (400)", "arc-length (2pi)",
        "grid-factor (8)", "refine-iters (30)", "beta (CbetaE only)"}},
      {"clt",
       "standardized Re/Im log P_N(A,0) moments and KS distance",
       {"group (unitary)", "n (required)", "trials (10000)", "part (real|imag)"}},
      {"pair-correlation",
       "rescaled eigenphase pair correlation histogram vs the sine kernel",
       {"n (50)", "samples (1000)", "bin-width (0.25)", "x-max (8)"}},
      {"covariance",
       "Monte Carlo covariance profile of V_N = -2 log|P_N|",
       {"n (256)", "separations (1e-4,0.1,...)", "trials (5000)"}},
      {"mom-exact",
       "exact integer moments of moments via restricted tableau counts",
       {"k (required)", "beta (required)", "n (list or a..b, required)"}},
      {"mom-toeplitz",
       "moments of moments via Heine-Szego determinants and torus quadrature",
       {"k (required)", "beta (required)", "n (list, required)", "quad-nodes (256)"}},
      {"mom-mc",
       "Monte Carlo moments of moments for any compact group",
       {"group (unitary)", "k (required)", "beta (required)", "n (list, required)",
        "trials (1000)", "theta-nodes (4N)"}},
      {"mom-poly",
       "exact rational interpolation of MoM_{U(N)}(k, beta) in N",
       {"k (required)", "beta (required)"}},
      {"branching-mom",
       "exact branching moments of moments (brute force or recursion)",
       {"k (required)", "beta (rational, required)", "n (list or a..b, required)",
        "mode (recursion|bruteforce)"}},
      {"branching-max",
       "BRW or REM maxima regression against the Bramson form",
       {"kind (brw|rem)", "depths (10..22)", "sigma2 ((1/2) log 2)", "trials (1000)"}},
      {"freezing",
       "normalized free energy of the BRW partition function across beta",
       {"depth (16)", "sigma2 ((1/2) log 2)", "betas (0.5,1,...)", "trials (300)"}},
      {"zeta-model",
       "prime-based random model of zeta: field maxima or increment sums",
       {"mode (max|increments)", "n (4)", "variant (steinhaus|gaussian)",
        "grid-size (2^{n+3})", "second-order (false)", "trials (200)"}},
      {"closed-form",
       "evaluate a named closed form",
       {"formula (keating-snaith|symmetry-coefficient|selberg|gumbel-density|"
        "fyodorov-bouchaud|zeta-arithmetic|bramson|mom-prediction|iid-norming)",
        "... formula-specific keys, see README"}},
      {"secular",
       "secular coefficient second moments E|Sc_n|^2 and windowed sums",
       {"n (8)", "trials (20000)", "eta (1)", "m (list or a..b, required)"}},
  };
  return cat;
}

namespace detail {

inline void write_text_file(const std::string& path, const std::string& content) {
  if (const auto slash = path.find_last_of('/'); slash != std::string::npos) {
    std::error_code ec;
    std::filesystem::create_directories(path.substr(0, slash), ec);
  }
  std::ofstream os(path, std::ios::binary);
  require(os.good(), "cannot open output file " + path);
  os << content;
}

}  // namespace detail

/// Run and serialize: writes <output>.csv and <output>.json.
inline RunRecord run_and_write(const ExperimentConfig& cfg, int threads) {
  RunRecord rec = run_experiment(cfg, threads);
  detail::write_text_file(cfg.output_path + ".csv", rec.csv());
  detail::write_text_file(cfg.output_path + ".json", rec.manifest().dump(2) + "\n");
  return rec;
}

}  // namespace logcorr

#include "logcorr/experiments_impl.hpp"
