#include "mleak_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "mleak/error.hpp"
#include "mleak/estimation.hpp"
#include "mleak/metrics.hpp"
#include "mleak/oracle.hpp"
#include "mleak/random.hpp"
#include "mleak/rate_distortion.hpp"
#include "mleak/timing.hpp"
#include "mleak_cli/io.hpp"

namespace mleak::cli {

namespace {

struct Context {
  std::uint64_t seed = 1;
  Unit unit = Unit::Nats;
  json inputs = json::array();
  json params = json::object();
  json outputs = json::array();
};

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json read_input(Context& ctx, const std::string& path) {
  std::string text = read_file(path);
  ctx.inputs.push_back({{"path", path}, {"fnv1a64", hex64(fnv1a64(text))}});
  return parse_json_text(text, path);
}

void write_output(Context& ctx, const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw ParseError("cannot write '" + path + "'");
  ctx.outputs.push_back(path);
}

double in_unit(const Context& ctx, LeakageValue v) { return v.in(ctx.unit); }

json labelled(const std::vector<std::string>& labels, const std::vector<double>& v) {
  json o = json::object();
  for (std::size_t i = 0; i < v.size(); ++i) o[labels[i]] = v[i];
  return o;
}

double number_field(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ParseError(std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

// ---- metrics ----

struct MetricsArgs {
  std::string file;
  std::vector<std::string> names{"all"};
};

json cmd_metrics(Context& ctx, const MetricsArgs& a) {
  Distribution d = parse_distribution(read_input(ctx, a.file));
  ctx.params["metric"] = a.names;
  bool all = std::find(a.names.begin(), a.names.end(), "all") != a.names.end();
  json rep{{"unit", unit_name(ctx.unit)}};

  if (auto* cj = std::get_if<CondJointPmf>(&d)) {
    for (const auto& n : a.names)
      if (n != "all" && n != "maximal_leakage" && n != "mutual_information")
        throw Error(ErrorKind::InvalidParameter, "metric '" + n + "' has no conditional form");
    rep["kind"] = "cond_joint";
    json m = json::object();
    auto want = [&](const char* n) { return all || std::find(a.names.begin(), a.names.end(), n) != a.names.end(); };
    if (want("maximal_leakage")) m["maximal_leakage"] = {{"value", in_unit(ctx, conditional_maximal_leakage(*cj))}};
    if (want("mutual_information"))
      m["mutual_information"] = {{"value", in_unit(ctx, LeakageValue::nats(conditional_mutual_information(*cj)))}};
    rep["metrics"] = m;
    rep["notes"] = json::array();
    return rep;
  }

  const JointPmf& j = std::get<JointPmf>(d);
  MetricReport mr = compute_metrics(j, all ? std::vector<std::string>{} : a.names);
  json m = json::object();
  for (const auto& [name, e] : mr.entries) {
    json o;
    if (name == "maximal_correlation" || name == "additive_increase_bound") {
      o["value"] = *e.raw;
    } else if (name == "mi_equality") {
      o["value"] = *e.raw > 0.5;
    } else {
      o["value"] = in_unit(ctx, e.value);
      if (name == "capacity") o["bracket_gap"] = LeakageValue::nats(*e.raw).in(ctx.unit);
    }
    if (e.witness) o["witness"] = name == "capacity" ? labelled(j.x_labels(), *e.witness) : labelled(j.y_labels(), *e.witness);
    if (e.witness_pair) o["witness_pair"] = {{"x", j.x_labels()[e.witness_pair->first]}, {"y", j.y_labels()[e.witness_pair->second]}};
    m[name] = o;
  }
  rep["kind"] = "joint";
  rep["metrics"] = m;
  rep["notes"] = mr.notes;
  return rep;
}

// ---- oracle-check ----

struct OracleArgs {
  std::string file;
  int draws = 500;
  int max_aux = 6;
};

json cmd_oracle(Context& ctx, const OracleArgs& a) {
  if (a.draws < 0) throw Error(ErrorKind::InvalidParameter, "draws must be >= 0");
  if (a.max_aux < 1) throw Error(ErrorKind::InvalidParameter, "max-aux must be >= 1");
  JointPmf j = parse_joint_only(read_input(ctx, a.file));
  ctx.params["draws"] = a.draws;
  ctx.params["max_aux"] = a.max_aux;

  LeakageValue l = maximal_leakage(j);
  Factorization f = factor(j);
  AuxChannel shatter = shattering_channel(f.px);
  LeakageValue ls = leakage_of_U(shatter, j);

  Rng rng = make_rng(ctx.seed, 11);
  double worst = 0.0;
  int violations = 0;
  for (int i = 0; i < a.draws; ++i) {
    std::size_t nu = 1 + static_cast<std::size_t>(uniform01(rng) * a.max_aux);
    nu = std::min<std::size_t>(nu, static_cast<std::size_t>(a.max_aux));
    double v = leakage_of_U(random_aux(rng, nu, j.nx(), 0.3), j).nats();
    worst = std::max(worst, v);
    if (v > l.nats() + 1e-12) ++violations;
  }

  MapEstimate map = map_estimate(j);
  json guess = json::object();
  for (std::size_t y = 0; y < map.guess.size(); ++y) guess[j.y_labels()[y]] = j.x_labels()[map.guess[y]];

  return {{"unit", unit_name(ctx.unit)},
          {"maximal_leakage", in_unit(ctx, l)},
          {"shattering", {{"atoms", shatter.nu()}, {"leakage", in_unit(ctx, ls)},
                          {"matches", std::fabs(ls.nats() - l.nats()) <= 1e-9}}},
          {"random_aux", {{"draws", a.draws}, {"max_leakage", in_unit(ctx, LeakageValue::nats(worst))},
                          {"violations", violations}}},
          {"map", {{"guess", guess}, {"success", map.success}}}};
}

// ---- estimate ----

json cmd_estimate(Context& ctx, const std::string& file) {
  json spec = read_input(ctx, file);
  if (!spec.is_object() || !spec.contains("distribution")) throw ParseError("estimate spec needs 'distribution'");
  JointPmf j = parse_joint_only(spec.at("distribution"));
  EstimatorConfig cfg;
  cfg.theta = number_field(spec, "theta", cfg.theta);
  cfg.delta = number_field(spec, "delta", cfg.delta);
  cfg.epsilon = number_field(spec, "epsilon", cfg.epsilon);
  cfg.validate();

  if (!spec.contains("trials") || !spec.at("trials").is_number_integer())
    throw ParseError("trials must be an integer");
  long long trials = spec.at("trials").get<long long>();
  if (trials < 1) throw Error(ErrorKind::InvalidParameter, "trials must be at least 1");

  double n = 0.0;
  bool automatic = false;
  const json nj = spec.value("n", json("auto"));
  if (nj.is_string() && nj.get<std::string>() == "auto") {
    n = std::ceil(sample_complexity_upper(j.nx(), j.ny(), cfg.theta, cfg.delta, cfg.epsilon));
    automatic = true;
  } else if (nj.is_number()) {
    n = nj.get<double>();
  } else {
    throw ParseError("n must be a number or \"auto\"");
  }

  SamplingMode mode = SamplingMode::Poisson;
  std::string mode_name = spec.value("mode", std::string("poisson"));
  if (mode_name == "fixed") mode = SamplingMode::Fixed;
  else if (mode_name != "poisson") throw ParseError("mode must be \"poisson\" or \"fixed\"");

  ctx.params["theta"] = cfg.theta;
  ctx.params["delta_nats"] = cfg.delta;
  ctx.params["epsilon"] = cfg.epsilon;
  ctx.params["n"] = n;
  ctx.params["n_auto"] = automatic;
  ctx.params["trials"] = trials;
  ctx.params["mode"] = mode_name;

  ExperimentReport r = run_error_rate_experiment(j, cfg, n, static_cast<std::size_t>(trials), ctx.seed, mode);
  double t = static_cast<double>(r.trials);
  double band = cfg.epsilon + 1.96 * std::sqrt(cfg.epsilon * (1.0 - cfg.epsilon) / t);
  json rep{{"unit", unit_name(ctx.unit)},
           {"n", r.n},
           {"trials", r.trials},
           {"true_leakage", in_unit(ctx, LeakageValue::nats(r.true_leakage))},
           {"mean_estimate", in_unit(ctx, LeakageValue::nats(r.mean_estimate))},
           {"failure_rate", r.failure_rate},
           {"failure_band", band},
           {"within_guarantee", r.failure_rate <= band},
           {"fallback_rate", r.fallback_rate},
           {"upper_bound_n", sample_complexity_upper(j.nx(), j.ny(), cfg.theta, cfg.delta, cfg.epsilon)}};

  if (spec.contains("plugin_n")) {
    const json& pn = spec.at("plugin_n");
    if (!pn.is_number_integer() || pn.get<long long>() < 1) throw ParseError("plugin_n must be a positive integer");
    ctx.params["plugin_n"] = pn;
    auto vals = plugin_trials(j, pn.get<std::size_t>(), static_cast<std::size_t>(trials), derive_seed(ctx.seed, 7));
    double mean = 0.0;
    std::size_t under = 0;
    for (double v : vals) {
      mean += v;
      under += v < r.true_leakage;
    }
    rep["plugin"] = {{"n", pn}, {"mean_estimate", in_unit(ctx, LeakageValue::nats(mean / t))},
                     {"underestimate_rate", static_cast<double>(under) / t}};
  }
  return rep;
}

// ---- mechanism ----

json solution_json(const Context& ctx, const MechanismSolution& s) {
  return {{"channel", s.channel.w().to_nested()},
          {"leakage", in_unit(ctx, s.leakage)},
          {"distortion", s.distortion},
          {"certificate", s.certificate},
          {"lower_bound_exp", s.lower_bound},
          {"gap_exp", s.gap},
          {"certified", s.certified}};
}

json cmd_mechanism_solve(Context& ctx, const std::string& file) {
  json spec = read_input(ctx, file);
  if (!spec.is_object() || !spec.contains("p_x") || !spec.contains("distortion") || !spec.contains("D"))
    throw ParseError("mechanism spec needs p_x, distortion and D");
  if (!spec.at("D").is_number()) throw ParseError("D must be a number");
  double level = spec.at("D").get<double>();
  std::vector<double> px;
  for (const auto& v : spec.at("p_x")) {
    if (!v.is_number()) throw ParseError("p_x entries must be numbers");
    px.push_back(v.get<double>());
  }
  DistortionSpec d = parse_distortion(spec.at("distortion"), level);
  ctx.params["D"] = level;
  json rep = solution_json(ctx, min_leakage_general(Pmf(px), d));
  rep["unit"] = unit_name(ctx.unit);
  return rep;
}

json cmd_mechanism_hamming(Context& ctx, double p, double level) {
  ctx.params["p"] = p;
  ctx.params["D"] = level;
  MechanismSolution closed = min_leakage_hamming_binary(p, level);
  MechanismSolution general = min_leakage_general(Pmf({1.0 - p, p}), DistortionSpec::hamming(2, level));
  MemorylessGap g = memoryless_lower_bound_hamming(p, level);
  return {{"unit", unit_name(ctx.unit)},
          {"closed_form", solution_json(ctx, closed)},
          {"general", solution_json(ctx, general)},
          {"agree", std::fabs(closed.leakage.nats() - general.leakage.nats()) <= 1e-6},
          {"memoryless", {{"lower_bound", in_unit(ctx, g.bound)},
                          {"optimal_scheme", in_unit(ctx, g.optimal_scheme)},
                          {"per_letter_optimum", in_unit(ctx, per_letter_memoryless_optimum(p, level))}}}};
}

// ---- cipher ----

CipherParams cipher_params(Context& ctx, const json& j) {
  CipherParams c = parse_cipher_params(j);
  if (!j.contains("seed")) c.seed = ctx.seed;
  ctx.params["cipher"] = cipher_params_to_json(c);
  return c;
}

json limit_json(const Context& ctx, const CipherParams& c) {
  SingleLetterResult r = single_letter_limit(c.source, c.spec, c.spec.level, c.key_rate_bits, c.alpha_bits);
  return {{"value", in_unit(ctx, LeakageValue::bits(r.value_bits))},
          {"max_rate", in_unit(ctx, LeakageValue::bits(r.max_rate_bits))},
          {"q_star", r.q_star}};
}

json scheme_summary(const Context& ctx, const CipherScheme& s) {
  std::size_t feasible = 0, codewords = 0, bins = 0;
  for (std::size_t t = 0; t < s.types().size(); ++t) {
    if (!s.feasible(t)) continue;
    ++feasible;
    codewords += s.codebook(t).size();
    bins += s.bins(t);
  }
  LeakageValue l = exact_scheme_leakage(s);
  double n = static_cast<double>(s.params().n);
  return {{"unit", unit_name(ctx.unit)},
          {"n", s.params().n},
          {"key_bits", s.key_bits()},
          {"types", s.types().size()},
          {"feasible_types", feasible},
          {"codewords", codewords},
          {"bins", bins},
          {"attempts", s.attempts()},
          {"leakage", in_unit(ctx, l)},
          {"leakage_per_letter", in_unit(ctx, LeakageValue::nats(l.nats() / n))},
          {"excess_distortion_prob", excess_distortion_prob(s)},
          {"limit", limit_json(ctx, s.params())}};
}

json cmd_cipher_limit(Context& ctx, const std::string& file) {
  CipherParams c = cipher_params(ctx, read_input(ctx, file));
  json rep = limit_json(ctx, c);
  rep["unit"] = unit_name(ctx.unit);
  return rep;
}

json cmd_cipher_build(Context& ctx, const std::string& file, const std::string& scheme_out) {
  CipherScheme s = CipherScheme::build(cipher_params(ctx, read_input(ctx, file)));
  if (!scheme_out.empty()) write_output(ctx, scheme_out, dump17(scheme_to_json(s)) + "\n");
  return scheme_summary(ctx, s);
}

json cmd_cipher_eval(Context& ctx, const std::string& file, bool brute) {
  CipherScheme s = scheme_from_json(read_input(ctx, file));
  ctx.params["cipher"] = cipher_params_to_json(s.params());
  ctx.params["brute"] = brute;
  json rep = scheme_summary(ctx, s);
  if (brute) {
    LeakageValue b = brute_force_scheme_leakage(s);
    rep["brute_force_leakage"] = in_unit(ctx, b);
    rep["brute_force_matches"] = std::fabs(b.nats() - exact_scheme_leakage(s).nats()) <= 1e-12;
  }
  return rep;
}

// ---- timing ----

struct TimingArgs {
  std::string scheme = "queue";
  double lambda = 1.0, mu = 2.0, tau = 1.0, m = 0.0, m_b = 0.0;
  double horizon = 1e4;
};

TimingScheme timing_scheme(Context& ctx, const TimingArgs& a) {
  TimingScheme s;
  if (a.scheme == "queue") s.variant = TimingVariant::Queue;
  else if (a.scheme == "dump") s.variant = TimingVariant::AccumulateDump;
  else if (a.scheme == "dummy") s.variant = TimingVariant::Dummy;
  else throw ParseError("scheme must be queue, dump or dummy");
  s.lambda = a.lambda;
  s.mu = a.mu;
  s.tau = a.tau;
  s.m = a.m;
  s.m_b = a.m_b;
  ctx.params["scheme"] = a.scheme;
  ctx.params["lambda"] = a.lambda;
  if (s.variant == TimingVariant::Queue) {
    ctx.params["mu"] = a.mu;
  } else {
    ctx.params["tau"] = a.tau;
    ctx.params["m"] = a.m;
    if (s.variant == TimingVariant::Dummy) ctx.params["m_b"] = a.m_b;
  }
  return s;
}

json analytic_json(const Context& ctx, const SchemeReport& r) {
  return {{"leakage_rate", in_unit(ctx, LeakageValue::nats(r.leakage_rate))},
          {"mean_wait", r.mean_wait},
          {"overflow_bound", r.overflow_bound},
          {"overflow_exact", r.overflow_exact},
          {"overhead", r.overhead}};
}

json cmd_timing_report(Context& ctx, const TimingArgs& a) {
  json rep = analytic_json(ctx, analytic_report(timing_scheme(ctx, a)));
  rep["unit"] = std::string(unit_name(ctx.unit)) + "/time";
  return rep;
}

json cmd_timing_simulate(Context& ctx, const TimingArgs& a) {
  TimingScheme s = timing_scheme(ctx, a);
  ctx.params["horizon"] = a.horizon;
  SchemeReport an = analytic_report(s);
  SimulationReport sim = simulate_scheme(s, ctx.seed, a.horizon);
  return {{"unit", std::string(unit_name(ctx.unit)) + "/time"},
          {"analytic", analytic_json(ctx, an)},
          {"simulation", {{"mean_wait", sim.mean_wait},
                          {"wait_se", sim.wait_se},
                          {"packets", sim.packets},
                          {"dropped", sim.dropped},
                          {"intervals", sim.intervals},
                          {"overflow_rate", sim.overflow_rate},
                          {"dummy_per_interval", sim.dummy_per_interval}}},
          {"wait_within_3se", std::fabs(sim.mean_wait - an.mean_wait) <= 3.0 * sim.wait_se}};
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Validation: return 3;
    case ErrorCategory::Domain: return 4;
    case ErrorCategory::Solver: return 5;
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Leakage measures for discrete channels", "mleak"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string unit = "nats", json_out;
  app.add_option("--seed", seed, "Seed for randomized commands")->capture_default_str();
  app.add_option("--unit", unit, "Output unit")->check(CLI::IsMember({"nats", "bits"}))->capture_default_str();
  app.add_option("--json-out", json_out, "Also write the result document to PATH");

  MetricsArgs ma;
  auto* metrics = app.add_subcommand("metrics", "Compute leakage metrics of a distribution file")->fallthrough();
  metrics->add_option("file", ma.file, "Distribution JSON")->required();
  metrics->add_option("--metric", ma.names, "Metric name or 'all'")->capture_default_str();

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle-check", "Check the guessing characterization on a distribution")->fallthrough();
  oracle->add_option("file", oa.file, "Distribution JSON")->required();
  oracle->add_option("--draws", oa.draws, "Random auxiliary channels to try")->capture_default_str();
  oracle->add_option("--max-aux", oa.max_aux, "Largest random auxiliary alphabet")->capture_default_str();

  std::string est_file;
  auto* estimate = app.add_subcommand("estimate", "Run the estimator error-rate experiment")->fallthrough();
  estimate->add_option("spec", est_file, "Experiment JSON")->required();

  auto* mechanism = app.add_subcommand("mechanism", "Minimum-leakage mechanisms under distortion")->fallthrough();
  mechanism->require_subcommand(1);
  std::string mech_file;
  auto* mech_solve = mechanism->add_subcommand("solve", "Solve the LP for a general instance")->fallthrough();
  mech_solve->add_option("spec", mech_file, "Mechanism JSON")->required();
  double hp = 0.5, hd = 0.25;
  auto* mech_ham = mechanism->add_subcommand("hamming", "Binary Hamming closed form and memoryless gap")->fallthrough();
  mech_ham->add_option("--p", hp, "P_X(1)")->required();
  mech_ham->add_option("--D", hd, "Distortion level")->required();

  auto* cipher = app.add_subcommand("cipher", "Shannon cipher system leakage")->fallthrough();
  cipher->require_subcommand(1);
  std::string cipher_file, scheme_out;
  bool brute = false;
  auto* c_limit = cipher->add_subcommand("limit", "Single-letter limit")->fallthrough();
  c_limit->add_option("params", cipher_file, "Cipher params JSON")->required();
  auto* c_build = cipher->add_subcommand("build", "Build a scheme and report its exact leakage")->fallthrough();
  c_build->add_option("params", cipher_file, "Cipher params JSON")->required();
  c_build->add_option("--scheme-out", scheme_out, "Write the scheme JSON to PATH");
  auto* c_eval = cipher->add_subcommand("eval", "Evaluate a stored scheme")->fallthrough();
  c_eval->add_option("scheme", cipher_file, "Scheme JSON")->required();
  c_eval->add_flag("--brute", brute, "Cross-check leakage by enumerating messages");

  auto* timing = app.add_subcommand("timing", "Packet-timing mitigation schemes")->fallthrough();
  timing->require_subcommand(1);
  TimingArgs ta;
  auto add_timing = [&](CLI::App* c) {
    c->add_option("--scheme", ta.scheme, "queue, dump or dummy")->capture_default_str();
    c->add_option("--lambda", ta.lambda, "Arrival rate")->capture_default_str();
    c->add_option("--mu", ta.mu, "Service rate (queue)")->capture_default_str();
    c->add_option("--tau", ta.tau, "Batch interval")->capture_default_str();
    c->add_option("--m", ta.m, "Batch capacity")->capture_default_str();
    c->add_option("--mb", ta.m_b, "Dummy floor")->capture_default_str();
  };
  auto* t_report = timing->add_subcommand("report", "Closed-form rates")->fallthrough();
  add_timing(t_report);
  auto* t_sim = timing->add_subcommand("simulate", "Discrete-event simulation")->fallthrough();
  add_timing(t_sim);
  t_sim->add_option("--horizon", ta.horizon, "Simulated time")->capture_default_str();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Context ctx;
  ctx.seed = seed;
  ctx.unit = unit == "bits" ? Unit::Bits : Unit::Nats;
  std::string name;
  try {
    json report;
    if (metrics->parsed()) {
      name = "metrics";
      report = cmd_metrics(ctx, ma);
    } else if (oracle->parsed()) {
      name = "oracle-check";
      report = cmd_oracle(ctx, oa);
    } else if (estimate->parsed()) {
      name = "estimate";
      report = cmd_estimate(ctx, est_file);
    } else if (mech_solve->parsed()) {
      name = "mechanism solve";
      report = cmd_mechanism_solve(ctx, mech_file);
    } else if (mech_ham->parsed()) {
      name = "mechanism hamming";
      report = cmd_mechanism_hamming(ctx, hp, hd);
    } else if (c_limit->parsed()) {
      name = "cipher limit";
      report = cmd_cipher_limit(ctx, cipher_file);
    } else if (c_build->parsed()) {
      name = "cipher build";
      report = cmd_cipher_build(ctx, cipher_file, scheme_out);
    } else if (c_eval->parsed()) {
      name = "cipher eval";
      report = cmd_cipher_eval(ctx, cipher_file, brute);
    } else if (t_report->parsed()) {
      name = "timing report";
      report = cmd_timing_report(ctx, ta);
    } else {
      name = "timing simulate";
      report = cmd_timing_simulate(ctx, ta);
    }
    if (!json_out.empty()) ctx.outputs.push_back(json_out);
    json doc{{"manifest", {{"subcommand", name},
                           {"inputs", ctx.inputs},
                           {"parameters", ctx.params},
                           {"seed", ctx.seed},
                           {"unit", unit_name(ctx.unit)},
                           {"version", kToolVersion},
                           {"outputs", ctx.outputs}}},
             {"report", report}};
    std::string text = dump17(doc) + "\n";
    if (!json_out.empty()) {
      std::ofstream f(json_out, std::ios::binary);
      if (!f || !(f << text)) throw ParseError("cannot write '" + json_out + "'");
    }
    out << text;
    return 0;
  } catch (const ParseError& e) {
    err << "mleak: parse error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "mleak: parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "mleak: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "mleak: internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mleak::cli
