#include "stoken/commands.hpp"

#include <cmath>
#include <numeric>

#include "stoken/errors.hpp"
#include "stoken/estimation.hpp"
#include "stoken/protocol.hpp"
#include "stoken/records.hpp"
#include "stoken/rounding.hpp"
#include "stoken/theta.hpp"

namespace stoken {

namespace {

constexpr double kDeg = M_PI / 180.0;

template <class T>
const T& need(const std::optional<T>& section, const char* name) {
  if (!section) throw ConfigError(std::string("config lacks the '") + name + "' section");
  return *section;
}

template <class F>
auto with_source(const std::string& path, F f) {
  try {
    return f(parse_flat_file(path));
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ConfigError(path + ": " + msg);
  }
}

double log10_or_nan(double v) { return v > 0.0 ? std::log10(v) : -INFINITY; }

bool ideal_source(const SourceParams& s) { return s.theta == 0.0 && s.beta_pb == 0.0 && s.beta_ps == 0.0; }

// Closed form for the ideal source; otherwise the optimizer plus margin.
double resolve_p_bound(const SourceParams& s, double margin) {
  if (ideal_source(s)) return p_bound_ideal();
  PBoundOptions opts;
  opts.safety_margin = margin;
  return p_bound_optimize(s.theta, s.beta_pb, s.beta_ps, opts);
}

BoundReport bounds_from(const RunConfig& config, std::optional<int> multi_m) {
  const SchemeSection& sch = need(config.scheme, "scheme");
  const SourceParams source = config.source.value_or(SourceParams{});
  SchemeParams p = sch.params;
  p.beta_pb = source.beta_pb;
  p.beta_ps = source.beta_ps;
  p.theta = source.theta;
  p.p_noqub = source.p_noqub;
  p.p_theta = source.p_theta;
  std::optional<double> pinned = sch.p_bound;
  if (!pinned && ideal_source(source)) pinned = p_bound_ideal();
  PBoundOptions opts;
  opts.safety_margin = sch.p_bound_margin;
  return compute_bounds(p, sch.confidence, pinned, opts, multi_m);
}

Table value_table(const std::string& name) {
  return Table{name, {"quantity", "value", "log10_value", "golden_ref"}, {}};
}

void add_value(Table& t, const std::string& q, double v, const std::string& ref = "") {
  t.add({q, v, log10_or_nan(v), ref});
}

}  // namespace

Report cmd_bounds(const RunConfig& config) {
  const BoundReport b = bounds_from(config, config.scheme ? config.scheme->multi_node_m : std::nullopt);
  Report r{"bounds", config.seed, {}};
  Table t = value_table("bounds");
  add_value(t, b.p_bound_pinned ? "p_bound_pinned" : "p_bound_optimized", b.p_bound, "methods:p_bound");
  add_value(t, "p_noqub_theta", b.p_noqub_theta, "methods:p_noqub_theta");
  add_value(t, "eps_priv", b.eps_priv);
  add_value(t, "eps_rob", b.eps_rob);
  add_value(t, "eps_cor_term1", b.eps_cor.term1, "methods:eps_cor_terms");
  add_value(t, "eps_cor_term2", b.eps_cor.term2, "methods:eps_cor_terms");
  add_value(t, "eps_cor", b.eps_cor.total, "methods:eps_cor");
  add_value(t, "eps_unf_term1", b.eps_unf.term1, "methods:eps_unf_terms");
  add_value(t, "eps_unf_term2", b.eps_unf.term2, "methods:eps_unf_terms");
  add_value(t, "eps_unf", b.eps_unf.total, "methods:eps_unf");
  add_value(t, "eps_cor_prime", b.eps_cor_prime, "methods:eps_cor_adjusted");
  add_value(t, "eps_unf_prime", b.eps_unf_prime, "methods:eps_unf_adjusted");
  if (b.multi_m) {
    add_value(t, "multi_m", *b.multi_m);
    add_value(t, "multi_eps_priv", b.multi.eps_priv);
    add_value(t, "multi_eps_cor", b.multi.eps_cor, "multinode:eps_cor");
    add_value(t, "multi_forge_bound", b.multi.forge_bound, "multinode:forge_bound");
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report cmd_simulate(const RunConfig& config) {
  const SourceParams& source = need(config.source, "source");
  const SchemeSection& sch = need(config.scheme, "scheme");
  const TimingTopology& topo = need(config.topology, "topology");
  MeasurementPolicy policy;
  policy.detector = paper_detector_model();
  if (config.measurement) policy = *config.measurement;
  const SimTime dt_tran = simulate_transaction(topo).dt_tran;

  Report r{"simulate", config.seed, {}};
  Table t{"transactions",
          {"trial", "b", "z", "dt_tran_us", "error_rate_pct", "checked_positions", "accepted_at_b",
           "accepted_at_other"},
          {}};
  double sum_err = 0.0;
  std::int64_t accepted = 0, completed = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < config.simulation.trials; ++k) {
    Rng rng = make_rng(config.seed, k);
    const int drawn = random_bit(rng);
    const int b = config.simulation.b < 0 ? drawn : config.simulation.b;
    QuantumPhaseResult q = quantum_phase(static_cast<std::size_t>(sch.params.N), source, policy, rng);
    if (const auto* abort = std::get_if<Abort>(&q)) {
      t.add({static_cast<std::int64_t>(k), static_cast<std::int64_t>(b), std::string("abort"),
             ns_to_seconds(dt_tran) * 1e6, NAN, static_cast<std::int64_t>(abort->reported), false, false});
      continue;
    }
    const TokenRecord& rec = std::get<TokenRecord>(q);
    const TransactionResult tr = run_token_transaction(rec, b, sch.params.gamma_err);
    const std::string z = rec.z.size() == 1 ? std::to_string(rec.z[0]) : "per_pulse";
    t.add({static_cast<std::int64_t>(k), static_cast<std::int64_t>(b), z, ns_to_seconds(dt_tran) * 1e6,
           100.0 * tr.at_b.error_rate, static_cast<std::int64_t>(tr.at_b.n_i), tr.at_b.accepted,
           tr.at_other.accepted});
    ++completed;
    accepted += tr.at_b.accepted;
    sum_err += tr.at_b.error_rate;
    worst = std::max(worst, tr.at_b.error_rate);
  }
  r.tables.push_back(std::move(t));

  Table s{"summary", {"quantity", "value", "unit", "golden_ref"}, {}};
  s.add({std::string("trials"), static_cast<double>(config.simulation.trials), std::string("count"), std::string("")});
  s.add({std::string("accepted_at_b"), static_cast<double>(accepted), std::string("count"), std::string("")});
  s.add({std::string("mean_error_rate"), completed ? 100.0 * sum_err / completed : NAN, std::string("pct"),
         std::string("supplement:transaction_tables_mean_error")});
  s.add({std::string("max_error_rate"), 100.0 * worst, std::string("pct"), std::string("")});
  s.add({std::string("dt_tran"), ns_to_seconds(dt_tran) * 1e6, std::string("us"),
         std::string("supplement:transaction_tables_dt_tran")});
  r.tables.push_back(std::move(s));
  return r;
}

Report cmd_estimate(const std::string& counts_path, const std::string& optics_path) {
  if (counts_path.empty() && optics_path.empty()) throw ConfigError("estimate needs a counts file or an optics file");
  Report r{"estimate", 0, {}};
  if (!counts_path.empty()) {
    const EstimationInputs in = with_source(counts_path, estimation_inputs_from);
    const ErrorRateTable e = estimate_error_rates(in.counts);
    Table t{"error_rates",
            {"t", "u", "n_tu", "n_err_tu", "mean_pct", "sigma_pct", "bound7_pct", "golden_ref"},
            {}};
    for (int i = 0; i < 4; ++i) {
      t.add({static_cast<std::int64_t>(i / 2), static_cast<std::int64_t>(i % 2), in.counts.n_tu[i],
             in.counts.n_err_tu[i], round_decimals(100.0 * e.rows[i].value, 6),
             round_decimals(100.0 * e.rows[i].sigma, 6), round_decimals(100.0 * e.rows[i].bound7, 6),
             std::string("supplement:error_rate_table")});
    }
    r.tables.push_back(std::move(t));

    const BiasEstimates b = estimate_biases(in.counts);
    const DarkEstimates d = estimate_dark(in.dark, in.counts.f_sys);
    const DetectionEstimates det = estimate_detection(in.coincidence, in.counts.t_exp, in.counts.f_sys);
    const NoqubReport nq = derive_noqub_bound(d, det);
    const EtaBounds eta = eta_lower_bounds(nq.x_a, nq.x_b, nq.mu_u);
    Table c{"chain", {"quantity", "value", "sigma", "bound7", "golden_ref"}, {}};
    auto row = [&](const char* q, const EstimateWithSigma& v, const char* ref) {
      c.add({std::string(q), v.value, v.sigma, v.bound7, std::string(ref)});
    };
    row("beta_pb", b.beta_pb, "supplement:beta_pb");
    row("beta_ps", b.beta_ps, "supplement:beta_ps");
    c.add({std::string("e_max"), e.E, 0.0, e.E, std::string("supplement:e_max")});
    row("d_a0", d.d_a0, "supplement:dark_counts");
    row("d_a1", d.d_a1, "supplement:dark_counts");
    row("d_a", d.d_a, "supplement:dark_counts");
    row("d_b", d.d_b, "supplement:dark_counts");
    row("p_a", det.p_a, "supplement:detection_probabilities");
    row("p_b", det.p_b, "supplement:detection_probabilities");
    row("p_c", det.p_c, "supplement:detection_probabilities");
    row("x_a", nq.x_a, "");
    row("x_b", nq.x_b, "");
    row("x_c", nq.x_c, "");
    row("mu_u", nq.mu_u, "supplement:mu_upper");
    row("p_noqub", nq.p_noqub_max, "supplement:p_noqub_bound");
    row("eta_a_lower", eta.eta_a_l, "supplement:eta_lower");
    row("eta_b_lower", eta.eta_b_l, "supplement:eta_lower");
    c.add({std::string("mu_assumption_holds"), check_mu_assumption(nq.x_b) ? 1.0 : 0.0, 0.0, 0.0,
           std::string("supplement:mu_assumption")});
    r.tables.push_back(std::move(c));
  }
  if (!optics_path.empty()) {
    const OpticsInputs o = with_source(optics_path, optics_inputs_from);
    const ThetaResult th = compose_theta(o.alphas, o.hwp_01, o.hwp_pm, o.pbs, o.delta_rm);
    Table t{"theta", {"quantity", "value_deg", "golden_ref"}, {}};
    auto row = [&](const char* q, double v, const char* ref) {
      t.add({std::string(q), round_decimals(v, 6), std::string(ref)});
    };
    row("delta_pbs", th.optics.delta_pbs, "supplement:delta_pbs");
    row("beta_01", th.optics.beta_01, "supplement:beta_hwp");
    row("beta_pm", th.optics.beta_pm, "supplement:beta_hwp");
    row("delta_rm", th.optics.delta_rm, "");
    const char* names[4] = {"theta_0", "theta_1", "theta_plus", "theta_minus"};
    for (int i = 0; i < 4; ++i) row(names[i], th.theta_per_state[i], "supplement:theta_per_state");
    row("theta", th.theta, "supplement:theta");
    r.tables.push_back(std::move(t));
    Table p{"p_theta", {"quantity", "value", "golden_ref"}, {}};
    p.add({std::string("p_theta"), o.p_alpha, std::string("supplement:p_alpha")});
    p.add({std::string("alpha_confidence"), alpha_confidence(o.n_alpha, o.p_alpha),
           std::string("supplement:alpha_confidence")});
    r.tables.push_back(std::move(p));
  }
  return r;
}

Report cmd_forge(const RunConfig& config, unsigned threads) {
  const AdversarySection& adv = need(config.adversary, "adversary");
  ForgeSetup setup;
  setup.n_pulses = adv.n_pulses;
  if (!adv.ideal_source && config.source) setup.source = *config.source;
  const double margin = config.scheme ? config.scheme->p_bound_margin : 1e-4;
  const double p_bound = resolve_p_bound(setup.source, margin);
  const double pnt = p_noqub_theta(setup.source.p_noqub, setup.source.p_theta);

  Report r{"forge", config.seed, {}};
  Table t{"forge",
          {"strategy", "basis", "n_pulses", "gamma_err", "trials", "successes", "estimate", "sigma",
           "ci99_low", "ci99_high", "theorem_bound", "bound_capped", "verdict"},
          {}};
  std::uint64_t cell = 0;
  for (const auto& strategy : adv.strategies) {
    for (double g : adv.gamma_err) {
      setup.gamma_err = g;
      const ForgeEstimate e = monte_carlo_forge(setup, strategy, adv.trials, derive_seed(config.seed, cell++), threads);
      const TheoremBound tb = forge_theorem_bound(static_cast<std::int64_t>(adv.n_pulses), g, p_bound, pnt);
      const bool holds = e.estimate + 3.0 * e.sigma <= tb.value;
      t.add({std::string(strategy_name(strategy.kind)), static_cast<std::int64_t>(strategy.basis),
             static_cast<std::int64_t>(adv.n_pulses), g, static_cast<std::int64_t>(e.trials),
             static_cast<std::int64_t>(e.successes), e.estimate, e.sigma, e.ci99_low, e.ci99_high, tb.value,
             tb.capped, std::string(holds ? "bound holds" : "bound violated")});
    }
  }
  r.tables.push_back(std::move(t));
  return r;
}

Report cmd_advantage(const RunConfig& config) {
  const TimingTopology& topo = need(config.topology, "topology");
  const AdvantageReport a = advantage(topo);
  Report r{"advantage", config.seed, {}};
  Table t{"timing", {"quantity", "value_ns", "value_us", "golden_ref"}, {}};
  auto row = [&](const char* q, SimTime v, const char* ref) {
    t.add({std::string(q), static_cast<std::int64_t>(v), ns_to_seconds(v) * 1e6, std::string(ref)});
  };
  row("dt_tran", a.dt_tran, "timing:dt_tran");
  row("dt_tran_c", a.dt_tran_c, "timing:dt_tran_classical");
  row("dt_tran_cf", a.dt_tran_cf, "timing:dt_tran_free_space");
  row("quantum_advantage", a.qa, "timing:quantum_advantage");
  row("comparative_advantage", a.ca, "timing:comparative_advantage");
  r.tables.push_back(std::move(t));

  Table th{"thresholds", {"quantity", "value_m", "value_km", "golden_ref"}, {}};
  const double lq = qa_threshold_length_m(topo.dt_proc_s, topo.c_fibre);
  const double dc = ca_threshold_distance_m(topo.dt_proc_s, topo.c_fibre, topo.c_vac);
  th.add({std::string("qa_threshold_length"), lq, lq / 1000.0, std::string("methods:qa_threshold")});
  th.add({std::string("ca_threshold_distance"), dc, dc / 1000.0, std::string("methods:ca_threshold")});
  r.tables.push_back(std::move(th));

  Rng rng = make_rng(config.seed, 0);
  const int b = random_bit(rng);
  CrosscheckSetup cs;
  cs.topology = topo;
  const CrosscheckTranscript tr = run_crosscheck_protocol(cs, b, rng);
  Table ev{"crosscheck_events", {"event", "agent", "t_ns", "payload_digest"}, {}};
  for (const auto& e : tr.events) {
    ev.add({e.name, e.agent, static_cast<std::int64_t>(e.t_ns), std::to_string(e.digest)});
  }
  r.tables.push_back(std::move(ev));
  return r;
}

Report cmd_multinode(const RunConfig& config, std::optional<int> m) {
  if (!m && config.scheme) m = config.scheme->multi_node_m;
  if (!m) throw ConfigError("multinode needs --m or scheme.multi_node_m");
  const BoundReport b = bounds_from(config, m);
  Report r{"multinode", config.seed, {}};
  Table t = value_table("multinode");
  add_value(t, "m", *m);
  add_value(t, "eps_cor_prime", b.eps_cor_prime, "methods:eps_cor_adjusted");
  add_value(t, "eps_unf_prime", b.eps_unf_prime, "methods:eps_unf_adjusted");
  add_value(t, "multi_eps_priv", b.multi.eps_priv);
  add_value(t, "multi_eps_cor", b.multi.eps_cor, "multinode:eps_cor");
  add_value(t, "multi_forge_bound", b.multi.forge_bound, "multinode:forge_bound");
  r.tables.push_back(std::move(t));
  return r;
}

}  // namespace stoken
