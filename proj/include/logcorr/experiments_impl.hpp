#pragma once

// Implementation of run_experiment: one block per experiment in the catalog.
// Included at the end of experiments.hpp.

#include <chrono>

namespace logcorr {

namespace detail {

inline void push_row(ResultTable& t, std::initializer_list<std::string> cells) {
  t.rows.emplace_back(cells);
}

inline RunRecord make_record(const ExperimentConfig& cfg) {
  RunRecord rec;
  rec.config = cfg;
  rec.summary = nlohmann::json::object();
  return rec;
}

inline RunRecord run_field_max(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const Group group = p.group("group", "unitary");
  const std::vector<int> ns = p.int_list("n", "");
  const int trials = static_cast<int>(p.integer("trials", 400));
  const double arc = p.real("arc-length", kTwoPi);
  const int gf = static_cast<int>(p.integer("grid-factor", 8));
  const int ri = static_cast<int>(p.integer("refine-iters", 30));
  std::optional<double> beta;
  if (group == Group::CircularBeta) beta = p.real("beta");
  p.finish();

  RunRecord rec = make_record(cfg);
  rec.table.header = {"N", "mean_max", "stderr", "mean_max_minus_logN", "logloglogN_abscissa"};
  const auto rows = field_max_scan(group, ns, trials, arc, gf, ri, beta, cfg.seed, threads);
  std::vector<double> lx, ly;
  for (const auto& r : rows) {
    const double excess = r.value - std::log(r.x);
    push_row(rec.table, {fmt17(r.x), fmt17(r.value), fmt17(r.stderr_value), fmt17(excess),
                         fmt17(std::log(std::log(r.x)))});
    lx.push_back(std::log(std::log(r.x)));
    ly.push_back(excess);
  }
  if (rows.size() >= 2) {
    const LinearFit f = linear_fit(lx, ly);
    rec.summary["loglog_slope"] = f.slope;
    rec.summary["loglog_slope_stderr"] = f.slope_stderr;
  }
  return rec;
}

inline RunRecord run_clt(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const Group group = p.group("group", "unitary");
  const int n = static_cast<int>(p.integer("n"));
  const int trials = static_cast<int>(p.integer("trials", 10000));
  const std::string part = p.str("part", "real");
  require(part == "real" || part == "imag", "clt: part must be real|imag");
  p.finish();
  (void)threads;
  Rng rng = Rng::substream(cfg.seed, "clt", 0);
  const CltSummary s = clt_experiment(group, n, trials, rng, part == "imag");
  RunRecord rec = make_record(cfg);
  rec.table.header = {"mean", "variance", "third_central", "ks_normal"};
  push_row(rec.table, {fmt17(s.mean), fmt17(s.variance), fmt17(s.third_central), fmt17(s.ks_normal)});
  rec.summary["mean"] = s.mean;
  rec.summary["variance"] = s.variance;
  rec.summary["ks_normal"] = s.ks_normal;
  return rec;
}

inline RunRecord run_pair_correlation(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const int n = static_cast<int>(p.integer("n", 50));
  const int samples = static_cast<int>(p.integer("samples", 1000));
  const double width = p.real("bin-width", 0.25);
  const double xmax = p.real("x-max", 8.0);
  p.finish();
  std::vector<EigenphaseSet> batch(static_cast<std::size_t>(samples));
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t r) {
    Rng rng = Rng::substream(cfg.seed, "pair-correlation", r);
    batch[r] = sample_eigenphases(Group::Unitary, n, std::nullopt, rng);
  });
  const Histogram h = pair_correlation(batch, width, xmax);
  RunRecord rec = make_record(cfg);
  rec.table.header = {"x", "density", "sine_kernel"};
  double worst = 0.0;
  for (std::size_t b = 0; b < h.size(); ++b) {
    const double x = h.center(b);
    const double kernel = 1.0 - sq(std::sin(kPi * x) / (kPi * x));
    worst = std::max(worst, std::abs(h.counts[b] - kernel));
    push_row(rec.table, {fmt17(x), fmt17(h.counts[b]), fmt17(kernel)});
  }
  rec.summary["sup_bin_deviation"] = worst;
  return rec;
}

inline RunRecord run_covariance(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const int n = static_cast<int>(p.integer("n", 256));
  const std::vector<double> seps = p.real_list("separations", "0.0001,0.01,0.1,1.0");
  const int trials = static_cast<int>(p.integer("trials", 5000));
  p.finish();
  // parallel over replicates, slots per (replicate, separation)
  std::vector<std::vector<double>> prods(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t r) {
    Rng rng = Rng::substream(cfg.seed, "covariance", r);
    const EigenphaseSet eigs = sample_eigenphases(Group::Unitary, n, std::nullopt, rng);
    const double v0 = negative_log_field(eigs, 0.0);
    auto& row = prods[r];
    row.assign(seps.size(), std::numeric_limits<double>::quiet_NaN());
    if (!std::isfinite(v0)) return;
    for (std::size_t i = 0; i < seps.size(); ++i) {
      const double vs = negative_log_field(eigs, seps[i]);
      if (std::isfinite(vs)) row[i] = v0 * vs;
    }
  });
  RunRecord rec = make_record(cfg);
  rec.table.header = {"separation", "covariance", "stderr", "minus_2_log_s"};
  for (std::size_t i = 0; i < seps.size(); ++i) {
    RunningStats st;
    for (const auto& row : prods)
      if (std::isfinite(row[i])) st.push(row[i]);
    push_row(rec.table, {fmt17(seps[i]), fmt17(st.mean()), fmt17(st.stderr_mean()),
                         fmt17(-2.0 * std::log(seps[i]))});
  }
  return rec;
}

inline RunRecord run_mom_exact(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const int k = static_cast<int>(p.integer("k"));
  const int beta = static_cast<int>(p.integer("beta"));
  const std::vector<int> ns = p.int_list("n", "");
  p.finish();
  (void)threads;
  RunRecord rec = make_record(cfg);
  rec.table.header = {"N", "value"};
  for (int n : ns)
    push_row(rec.table, {std::to_string(n), to_string(mom_exact_unitary(k, beta, n))});
  return rec;
}

inline RunRecord run_mom_toeplitz(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const int k = static_cast<int>(p.integer("k"));
  const double beta = p.real("beta");
  const std::vector<int> ns = p.int_list("n", "");
  const int nodes = static_cast<int>(p.integer("quad-nodes", 256));
  p.finish();
  (void)threads;
  RunRecord rec = make_record(cfg);
  rec.table.header = {"N", "value", "nodes", "previous_estimate"};
  std::vector<double> lx, ly;
  for (int n : ns) {
    const QuadratureResult r = mom_toeplitz(k, beta, n, nodes);
    push_row(rec.table, {std::to_string(n), fmt17(r.value), std::to_string(r.nodes),
                         fmt17(r.previous)});
    lx.push_back(std::log(n));
    ly.push_back(std::log(r.value));
  }
  if (ns.size() >= 2) rec.summary["loglog_slope"] = linear_fit(lx, ly).slope;
  return rec;
}

inline RunRecord run_mom_mc(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const Group group = p.group("group", "unitary");
  const int k = static_cast<int>(p.integer("k"));
  const double beta = p.real("beta");
  const std::vector<int> ns = p.int_list("n", "");
  const int trials = static_cast<int>(p.integer("trials", 1000));
  const int nodes_cfg = static_cast<int>(p.integer("theta-nodes", 0));
  p.finish();
  RunRecord rec = make_record(cfg);
  rec.table.header = {"N", "value", "stderr"};
  std::vector<double> lx, ly;
  for (int n : ns) {
    const int nodes = nodes_cfg > 0 ? nodes_cfg : 4 * n;
    const Estimate e = mom_mc_parallel(group, k, beta, n, trials, nodes, cfg.seed, threads);
    push_row(rec.table, {std::to_string(n), fmt17(e.value), fmt17(e.stderr_value)});
    lx.push_back(std::log(n));
    ly.push_back(std::log(e.value));
  }
  if (ns.size() >= 2) rec.summary["loglog_slope"] = linear_fit(lx, ly).slope;
  return rec;
}

inline RunRecord run_mom_poly(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const int k = static_cast<int>(p.integer("k"));
  const int beta = static_cast<int>(p.integer("beta"));
  p.finish();
  (void)threads;
  const MomPolynomial mp = mom_polynomial(k, beta);
  RunRecord rec = make_record(cfg);
  rec.table.header = {"degree", "coefficient"};
  for (std::size_t i = 0; i < mp.poly.coeffs().size(); ++i)
    push_row(rec.table, {std::to_string(i), to_string(mp.poly.coeffs()[i])});
  rec.summary["degree"] = mp.poly.degree();
  rec.summary["polynomial"] = mp.poly.to_string("N");
  return rec;
}

inline RunRecord run_branching_mom(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const int k = static_cast<int>(p.integer("k"));
  const BigRat beta = p.rational("beta", "1");
  const std::vector<int> ns = p.int_list("n", "");
  const std::string mode = p.str("mode", "recursion");
  require(mode == "recursion" || mode == "bruteforce", "branching-mom: mode recursion|bruteforce");
  p.finish();
  (void)threads;
  RunRecord rec = make_record(cfg);
  rec.table.header = {"n", "value_exact", "value"};
  for (int n : ns) {
    const Pow2Ext v = mom_branching_exact(
        k, beta, n, mode == "recursion" ? BranchingMode::Recursion : BranchingMode::BruteForce);
    push_row(rec.table, {std::to_string(n), v.to_string(), fmt17(v.to_double())});
  }
  return rec;
}

inline RunRecord run_branching_max(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const std::string kind = p.str("kind", "brw");
  require(kind == "brw" || kind == "rem", "branching-max: kind brw|rem");
  const std::vector<int> depths = p.int_list("depths", "10..22");
  const double sigma2 = p.real("sigma2", default_brw_sigma2());
  const int trials = static_cast<int>(p.integer("trials", 1000));
  p.finish();

  const auto rows = max_scan_parallel(
      depths, trials, "branching-max/" + kind, cfg.seed, threads, [&](int n, Rng& rng) {
        if (kind == "brw") return simulate_brw_max(TreeConfig{n, sigma2}, rng);
        const double sd = std::sqrt(sigma2 * n);
        double best = -kInf;
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i)
          best = std::max(best, sd * rng.normal());
        return best;
      });
  const double c = std::sqrt(2.0 * sigma2 * std::log(2.0));
  const LinearFit f = subleading_fit(rows, c);
  RunRecord rec = make_record(cfg);
  rec.table.header = {"n", "mean_max", "stderr", "residual_after_cn"};
  for (const auto& r : rows)
    push_row(rec.table,
             {fmt17(r.x), fmt17(r.value), fmt17(r.stderr_value), fmt17(r.value - c * r.x)});
  rec.summary["linear_coeff_theory"] = c;
  rec.summary["log_coeff"] = f.slope;
  rec.summary["log_coeff_stderr"] = f.slope_stderr;
  return rec;
}

inline RunRecord run_freezing(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const int depth = static_cast<int>(p.integer("depth", 16));
  const double sigma2 = p.real("sigma2", default_brw_sigma2());
  const std::vector<double> betas = p.real_list("betas", "0.25,0.5,0.75,1,1.5,2,3");
  const int trials = static_cast<int>(p.integer("trials", 300));
  p.finish();
  // parallel over trials; per-trial values for each beta accumulated in slots
  std::vector<std::vector<double>> vals(static_cast<std::size_t>(trials));
  const TreeConfig tc{depth, sigma2};
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t r) {
    Rng rng = Rng::substream(cfg.seed, "freezing", r);
    const LeafField f = simulate_brw(tc, rng);
    auto& row = vals[r];
    row.resize(betas.size());
    const double log2n = depth * std::log(2.0);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      const double beta = betas[i];
      double mx = -kInf;
      for (double v : f.values) mx = std::max(mx, 2.0 * beta * v);
      double acc = 0.0;
      for (double v : f.values) acc += std::exp(2.0 * beta * v - mx);
      row[i] = (mx + std::log(acc)) / (beta * log2n);
    }
  });
  RunRecord rec = make_record(cfg);
  rec.table.header = {"beta", "neg_free_energy", "stderr", "high_temp_prediction"};
  for (std::size_t i = 0; i < betas.size(); ++i) {
    RunningStats st;
    for (const auto& row : vals) st.push(row[i]);
    push_row(rec.table, {fmt17(betas[i]), fmt17(st.mean()), fmt17(st.stderr_mean()),
                         fmt17(betas[i] <= 1.0 ? betas[i] + 1.0 / betas[i] : 2.0)});
  }
  return rec;
}

inline RunRecord run_zeta_model(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const std::string mode = p.str("mode", "max");
  const int n = static_cast<int>(p.integer("n", 4));
  RunRecord rec = make_record(cfg);
  if (mode == "increments") {
    p.finish();
    rec.table.header = {"m", "increment_variance", "half_log2"};
    for (int m = 1; m <= n; ++m)
      push_row(rec.table, {std::to_string(m), fmt17(increment_covariance_sum(m)),
                           fmt17(0.5 * std::log(2.0))});
    return rec;
  }
  require(mode == "max", "zeta-model: mode max|increments");
  const std::string variant = p.str("variant", "steinhaus");
  require(variant == "steinhaus" || variant == "gaussian", "zeta-model: variant");
  const int grid = static_cast<int>(p.integer("grid-size", 1 << (n + 3)));
  const bool second = p.flag("second-order", false);
  const int trials = static_cast<int>(p.integer("trials", 200));
  p.finish();
  ModelConfig mc{n, variant == "steinhaus" ? ModelVariant::Steinhaus : ModelVariant::Gaussian,
                 grid, second};
  const ModelPrimes primes = model_primes(mc);
  std::vector<double> maxima(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t r) {
    Rng rng = Rng::substream(cfg.seed, "zeta-model", r);
    const auto x = model_field(mc, primes, rng);
    double mx = -kInf;
    for (double v : x) mx = std::max(mx, v);
    maxima[r] = mx;
  });
  RunningStats st;
  for (double v : maxima) st.push(v);
  const double loglog_t = n * std::log(2.0);
  rec.table.header = {"mean_max", "stderr", "loglog_T", "ratio_leading", "recentred"};
  push_row(rec.table, {fmt17(st.mean()), fmt17(st.stderr_mean()), fmt17(loglog_t),
                       fmt17(st.mean() / loglog_t),
                       fmt17(st.mean() - (loglog_t - 0.75 * std::log(loglog_t)))});
  rec.summary["ratio_leading"] = st.mean() / loglog_t;
  return rec;
}

inline RunRecord run_closed_form(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const std::string formula = p.str_required("formula");
  (void)threads;
  RunRecord rec = make_record(cfg);
  rec.table.header = {"quantity", "value"};
  if (formula == "keating-snaith") {
    const int n = static_cast<int>(p.integer("n"));
    const double beta = p.real("beta");
    push_row(rec.table, {"keating_snaith", fmt17(keating_snaith_moment(n, beta))});
    if (beta == std::floor(beta) && beta >= 0)
      push_row(rec.table, {"exact_rational",
                           to_string(keating_snaith_moment_exact(n, static_cast<int>(beta)))});
  } else if (formula == "symmetry-coefficient") {
    const Group g = p.group("group", "unitary");
    const double beta = p.real("beta");
    push_row(rec.table, {"coefficient", fmt17(symmetry_coefficient(g, beta))});
  } else if (formula == "selberg") {
    const double a = p.real("a"), b = p.real("b");
    const double alpha = p.real("alpha"), beta = p.real("beta");
    const double gamma = p.real("gamma", 0.0);
    const int n = static_cast<int>(p.integer("n-vars", 1));
    push_row(rec.table, {"selberg", fmt17(selberg_integral(a, b, alpha, beta, gamma, n))});
  } else if (formula == "gumbel-density") {
    const double y = p.real("y");
    push_row(rec.table, {"density", fmt17(gumbel_sum_density(y))});
  } else if (formula == "fyodorov-bouchaud") {
    const double k = p.real("k"), beta = p.real("beta");
    push_row(rec.table, {"moment", fmt17(fyodorov_bouchaud_moment(k, beta))});
  } else if (formula == "zeta-arithmetic") {
    const double beta = p.real("beta");
    const long pmax = p.integer("p-max", 100000);
    push_row(rec.table, {"a_zeta", fmt17(zeta_arithmetic_factor(beta, static_cast<std::uint64_t>(pmax)))});
  } else if (formula == "bramson") {
    const double n = p.real("n"), s2 = p.real("sigma2", default_brw_sigma2());
    push_row(rec.table, {"brw", fmt17(bramson_prediction(n, s2))});
    push_row(rec.table, {"iid", fmt17(bramson_iid_prediction(n, s2))});
  } else if (formula == "mom-prediction") {
    const Group g = p.group("group", "unitary");
    const BigRat k = p.rational("k", "2"), beta = p.rational("beta", "1");
    const int n = static_cast<int>(p.integer("n", 64));
    const MomPrediction mp = mom_prediction(g, k, beta, n);
    push_row(rec.table, {"regime", regime_name(mp.regime)});
    push_row(rec.table, {"exponent", fmt17(mp.exponent)});
    if (mp.coefficient) push_row(rec.table, {"coefficient", fmt17(*mp.coefficient)});
    if (mp.modulating_factor) push_row(rec.table, {"modulating_factor", *mp.modulating_factor});
  } else if (formula == "iid-norming") {
    const double n = p.real("n");
    const MaxNorming mn = iid_max_norming(n);
    push_row(rec.table, {"a_n", fmt17(mn.a_n)});
    push_row(rec.table, {"b_n", fmt17(mn.b_n)});
  } else if (formula == "zeta-eval") {
    const double t = p.real("t");
    const auto z = zeta_eval(t);
    push_row(rec.table, {"re", fmt17(z.real())});
    push_row(rec.table, {"im", fmt17(z.imag())});
    push_row(rec.table, {"abs", fmt17(std::abs(z))});
  } else {
    throw Error("closed-form: unknown formula '" + formula + "'");
  }
  p.finish();
  return rec;
}

inline RunRecord run_secular(const ExperimentConfig& cfg, int threads) {
  ParamReader p{cfg};
  const int n = static_cast<int>(p.integer("n", 8));
  const int trials = static_cast<int>(p.integer("trials", 20000));
  const int eta = static_cast<int>(p.integer("eta", 1));
  const std::vector<int> ms = p.int_list("m", "");
  p.finish();
  RunRecord rec = make_record(cfg);
  rec.table.header = {"m", "moment", "stderr"};
  for (int m : ms) {
    std::vector<double> vals(static_cast<std::size_t>(trials));
    const std::string label = "secular/" + std::to_string(m);
    if (m > eta * n) {
      push_row(rec.table, {std::to_string(m), fmt17(0.0), fmt17(0.0)});
      continue;
    }
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t r) {
      Rng rng = Rng::substream(cfg.seed, label, r);
      vals[r] = secular_sum_moment(eta, m, n, 1, rng).value;
    });
    RunningStats st;
    for (double v : vals) st.push(v);
    push_row(rec.table, {std::to_string(m), fmt17(st.mean()), fmt17(st.stderr_mean())});
  }
  return rec;
}

}  // namespace detail

inline RunRecord run_experiment(const ExperimentConfig& cfg, int threads) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  if (cfg.experiment == "field-max") rec = detail::run_field_max(cfg, threads);
  else if (cfg.experiment == "clt") rec = detail::run_clt(cfg, threads);
  else if (cfg.experiment == "pair-correlation") rec = detail::run_pair_correlation(cfg, threads);
  else if (cfg.experiment == "covariance") rec = detail::run_covariance(cfg, threads);
  else if (cfg.experiment == "mom-exact") rec = detail::run_mom_exact(cfg, threads);
  else if (cfg.experiment == "mom-toeplitz") rec = detail::run_mom_toeplitz(cfg, threads);
  else if (cfg.experiment == "mom-mc") rec = detail::run_mom_mc(cfg, threads);
  else if (cfg.experiment == "mom-poly") rec = detail::run_mom_poly(cfg, threads);
  else if (cfg.experiment == "branching-mom") rec = detail::run_branching_mom(cfg, threads);
  else if (cfg.experiment == "branching-max") rec = detail::run_branching_max(cfg, threads);
  else if (cfg.experiment == "freezing") rec = detail::run_freezing(cfg, threads);
  else if (cfg.experiment == "zeta-model") rec = detail::run_zeta_model(cfg, threads);
  else if (cfg.experiment == "closed-form") rec = detail::run_closed_form(cfg, threads);
  else if (cfg.experiment == "secular") rec = detail::run_secular(cfg, threads);
  else throw Error("unknown experiment '" + cfg.experiment + "'; see list-experiments");
  rec.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace logcorr
