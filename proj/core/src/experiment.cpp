#include "iet/experiment.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "iet/cocycle.hpp"
#include "iet/combinatorics.hpp"
#include "iet/suspension.hpp"
#include "iet/weak_stable.hpp"

namespace iet {

namespace {

constexpr std::uint64_t kLambdaStream = 1;
constexpr std::uint64_t kTauStream = 2;
constexpr std::uint64_t kPilotStream = 3;

[[noreturn]] void bad(const std::string& what) { throw InputError("manifest: " + what); }

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad(std::string("parameter '") + key + "' has the wrong type");
  }
}

std::vector<double> get_vector(const Json& j, const char* key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_array()) bad(std::string("parameter '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) bad(std::string("parameter '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

template <class S>
S from_double(double x) {
  if constexpr (std::is_same_v<S, Quadratic>)
    return Quadratic(Rational(x));
  else
    return S(x);
}

bool all_rational(const std::vector<std::string>& entries) {
  for (const auto& e : entries)
    if (Quadratic::parse(e).radicand() != 0) return false;
  return true;
}

// Calls f(std::vector<S>) with the manifest lengths in the scalar family of
// the mode. Rational mode promotes to quadratic when an entry needs it.
template <class F>
auto with_given_lengths(const SystemSpec& spec, F&& f) {
  if (spec.lambda.empty()) bad("this experiment needs system.lambda");
  auto parse_all = [&](auto tag) {
    using S = decltype(tag);
    std::vector<S> v;
    for (const auto& e : spec.lambda) v.push_back(parse_scalar<S>(e));
    return v;
  };
  switch (spec.mode) {
    case ArithmeticMode::real: return f(parse_all(Real()));
    case ArithmeticMode::quadratic: return f(parse_all(Quadratic()));
    case ArithmeticMode::rational: break;
  }
  if (all_rational(spec.lambda)) return f(parse_all(Rational()));
  return f(parse_all(Quadratic()));
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out + '\n';
}

Json interval_json(const Interval& ci) { return Json::array({ci.lo, ci.hi}); }

Json fit_json(const DecayFit& f) {
  return {{"log_c", f.log_c},     {"rate", f.rate},     {"slope", f.slope},
          {"slope_ci", interval_json(f.slope_ci)}, {"points", f.points}};
}

template <class S>
Json lengths_json(const std::vector<S>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

// ---------------------------------------------------------------------------

RunResult run_perm_info(const Manifest& m) {
  auto p = Permutation::parse(m.system.permutation);
  RunResult r;
  r.json = perm_info_json(p);
  r.summary.push_back("permutation: " + p.to_string());
  if (r.json["irreducible"].get<bool>()) {
    r.summary.push_back("genus: " + std::to_string(r.json["genus"].get<int>()));
    r.summary.push_back("singularities: " + std::to_string(r.json["singularities"].size()));
    r.summary.push_back(std::string("(1,...,1) in H: ") + (r.json["ones_in_h"].get<bool>() ? "yes" : "no"));
  } else {
    r.summary.push_back("irreducible: no");
  }
  return r;
}

RunResult run_rauzy_class(const Manifest& m) {
  auto p = Permutation::parse(m.system.permutation);
  RunResult r;
  r.json = rauzy_class_json(p);
  r.summary.push_back("class size: " + std::to_string(r.json["size"].get<int>()));
  r.summary.push_back("self loops: " + std::to_string(r.json["self_loops"].get<int>()));
  return r;
}

RunResult run_induct(const Manifest& m) {
  int steps = get_or<int>(m.params, "steps", 10);
  auto trace = induct_trace(m.system, steps);
  if (!trace.stop_reason.empty()) {
    if (trace.stop_code == 2) throw TieError(trace.stop_reason);
    throw PrecisionError(trace.stop_reason);
  }
  RunResult r;
  r.csv = trace.csv;
  r.json = {{"steps", trace.steps_done}};
  r.summary.push_back("steps: " + std::to_string(trace.steps_done));
  return r;
}

template <class S>
std::vector<S> start_point(const Manifest& m, const SimplexSystem& sys) {
  auto rng = rng_stream(m.seed, kLambdaStream);
  return sample_simplex<S>(sys, rng);
}

RunResult run_orbit(Manifest m) {
  const long steps = get_or<long>(m.params, "steps", 1000);
  if (steps < 1) bad("orbit needs steps >= 1");
  auto sys = build_system(m.system, m.seed);
  auto body = [&](auto lambda) {
    using S = typename decltype(lambda)::value_type;
    RunResult r;
    const auto p0 = Permutation::parse(m.system.permutation);
    std::vector<std::string> head{"step", "winner", "kind"};
    for (int a = 0; a < p0.size(); ++a) head.push_back("lambda_" + p0.name(a));
    head.push_back("matrix_norm");
    head.push_back("delta_return");
    r.csv = csv_join(head);
    Permutation p = p0;
    normalize_in_place(lambda);
    IntMatrix b = IntMatrix::identity(p.size());
    long returns = 0;
    for (long n = 1; n <= steps; ++n) {
      auto st = renormalization_step<S>(std::move(lambda), p);
      b.add_row(st.loser, st.winner);
      lambda = std::move(st.lambda);
      p = st.perm;
      bool ret = p == sys.pi && in_simplex(sys, lambda);
      returns += ret;
      std::vector<std::string> row{std::to_string(n), p0.name(st.winner), to_string(st.kind)};
      for (const auto& x : lambda) row.push_back(to_string(x));
      row.push_back(b.max_abs().str());
      row.push_back(ret ? "1" : "0");
      r.csv += csv_join(row);
    }
    r.json = {{"steps", steps}, {"delta_returns", returns}, {"log_matrix_norm", b.log_max_abs()}};
    r.summary.push_back("steps: " + std::to_string(steps));
    r.summary.push_back("Delta returns: " + std::to_string(returns));
    return r;
  };
  RunResult r;
  if (!m.system.lambda.empty()) {
    r = with_given_lengths(m.system, body);
  } else if (m.system.mode == ArithmeticMode::real) {
    r = body(start_point<Real>(m, sys));
  } else if (m.system.mode == ArithmeticMode::rational) {
    r = body(start_point<Rational>(m, sys));
  } else {
    bad("quadratic mode needs explicit system.lambda");
  }
  r.resolved = m;
  r.resolved.system.gamma0 = sys.gamma0.word();
  return r;
}

RunResult run_lyapunov(Manifest m) {
  LyapunovOptions opt;
  opt.steps = get_or<long>(m.params, "steps", opt.steps);
  opt.burn_in = get_or<long>(m.params, "burn_in", opt.burn_in);
  opt.escape_cap = get_or<long>(m.params, "escape_cap", opt.escape_cap);
  opt.seed = m.seed;
  auto sys = build_system(m.system, m.seed);
  LyapunovEstimate est;
  if (!m.system.lambda.empty())
    est = with_given_lengths(m.system, [&](auto lambda) { return lyapunov_spectrum(sys, std::move(lambda), opt); });
  else
    est = lyapunov_spectrum(sys, start_point<Real>(m, sys), opt);
  RunResult r;
  auto res = est.pairing_residuals();
  auto hw = est.pairing_halfwidths();
  bool pairing_ok = true;
  for (std::size_t i = 0; i < res.size(); ++i) pairing_ok = pairing_ok && res[i] <= 3.0 * hw[i];
  const int positive = est.significantly_positive(3.0);
  Json flow = Json::array();
  for (double e : est.exponents) flow.push_back(e / est.mean_return_time);
  r.json = {{"genus", est.genus},
            {"steps", est.steps},
            {"burn_in", est.burn_in},
            {"exponents", est.exponents},
            {"halfwidths", est.halfwidths},
            {"flow_exponents", flow},
            {"pairing_residuals", res},
            {"pairing_halfwidths", hw},
            {"pairing_ok", pairing_ok},
            {"significantly_positive", positive},
            {"mean_return_time", est.mean_return_time},
            {"mean_renorm_steps", est.mean_renorm_steps},
            {"max_h_residual", est.max_h_residual}};
  std::ostringstream os;
  os << "exponents:";
  for (std::size_t i = 0; i < est.exponents.size(); ++i)
    os << ' ' << format_double(est.exponents[i]) << " +- " << format_double(est.halfwidths[i]);
  r.summary.push_back(os.str());
  r.summary.push_back(std::string("pairing: ") + (pairing_ok ? "pass" : "fail"));
  r.summary.push_back("significantly positive: " + std::to_string(positive) + " (genus " + std::to_string(est.genus) +
                      ")");
  r.resolved = m;
  r.resolved.system.gamma0 = sys.gamma0.word();
  return r;
}

LineSegment line_from_params(const Json& params, int d) {
  std::vector<double> ones(d, 1.0);
  auto dir = get_vector(params, "direction", ones);
  if (static_cast<int>(dir.size()) != d) bad("line direction has the wrong dimension");
  std::vector<double> off;
  if (params.contains("offset")) {
    off = get_vector(params, "offset", {});
    if (static_cast<int>(off.size()) != d) bad("line offset has the wrong dimension");
    return LineSegment::through(to_eigen(off), to_eigen(dir));
  }
  // Default offset: alternating signs, made orthogonal to the direction and
  // scaled to the requested distance from the origin.
  const double norm = get_or<double>(params, "line_norm", 0.02);
  Eigen::VectorXd u = to_eigen(dir).normalized();
  Eigen::VectorXd alt(d);
  for (int i = 0; i < d; ++i) alt(i) = i % 2 ? -1.0 : 1.0;
  alt -= alt.dot(u) * u;
  if (alt.norm() < 1e-12) bad("cannot build a default offset orthogonal to the direction");
  return LineSegment::through(norm * alt.normalized(), u);
}

RunResult run_survival(Manifest m) {
  SurvivalOptions opt;
  opt.delta = get_or<double>(m.params, "delta", opt.delta);
  opt.n_block = get_or<int>(m.params, "N", opt.n_block);
  opt.m_max = get_or<int>(m.params, "m_max", opt.m_max);
  opt.samples = get_or<long>(m.params, "samples", opt.samples);
  opt.population_cap = get_or<std::size_t>(m.params, "population_cap", opt.population_cap);
  opt.escape_cap = get_or<long>(m.params, "escape_cap", opt.escape_cap);
  opt.workers = get_or<unsigned>(m.params, "workers", opt.workers);
  opt.seed = m.seed;
  auto sys = build_system(m.system, m.seed);
  auto line = line_from_params(m.params, sys.dim());
  auto st = survival_probability(sys, line, opt);
  RunResult r;
  r.csv = csv_join({"m", "p_hat", "ci_low", "ci_high"});
  Json rows = Json::array();
  for (const auto& row : st.rows) {
    r.csv += csv_join({std::to_string(row.m), format_double(row.p_hat), format_double(row.ci.lo),
                       format_double(row.ci.hi)});
    rows.push_back({{"m", row.m}, {"count", row.count}, {"p_hat", row.p_hat}, {"ci", interval_json(row.ci)}});
  }
  r.json = {{"line_norm", line.norm}, {"rows", rows},           {"fit", fit_json(st.fit)},
            {"samples", st.samples},  {"capped", st.capped},    {"escaped", st.escaped}};
  r.summary.push_back("p_hat(m_max) = " + format_double(st.rows.back().p_hat));
  r.summary.push_back("kappa = " + format_double(st.fit.rate) + ", slope CI [" + format_double(st.fit.slope_ci.lo) +
                      ", " + format_double(st.fit.slope_ci.hi) + "]");
  r.summary.push_back("capped: " + std::to_string(st.capped) + ", escaped: " + std::to_string(st.escaped));
  r.resolved = m;
  r.resolved.system.gamma0 = sys.gamma0.word();
  return r;
}

std::vector<Quadratic> t_grid_from_params(const Json& params) {
  std::vector<Quadratic> grid;
  if (params.contains("t_grid")) {
    if (!params["t_grid"].is_array()) bad("t_grid must be an array of strings");
    for (const auto& t : params["t_grid"]) {
      if (!t.is_string()) bad("t_grid must be an array of strings");
      grid.push_back(Quadratic::parse(t.get<std::string>()));
    }
  }
  if (params.contains("grid_denominator")) {
    const long q = get_or<long>(params, "grid_denominator", 0);
    if (q < 2) bad("grid_denominator must be at least 2");
    for (long k = 1; k < q; ++k) grid.push_back(Quadratic(Rational(k, q)));
  }
  if (grid.empty()) bad("weakmix-scan needs t_grid or grid_denominator");
  return grid;
}

RunResult run_weakmix_scan(Manifest m) {
  const long visits = get_or<long>(m.params, "visits", 30);
  const double tol = get_or<double>(m.params, "tol", 1e-3);
  const long cap = get_or<long>(m.params, "escape_cap", kDefaultEscapeCap);
  auto grid = t_grid_from_params(m.params);
  auto sys = build_system(m.system, m.seed);
  std::vector<ScanRow> rows;
  if (!m.system.lambda.empty())
    rows = with_given_lengths(m.system, [&](auto lambda) { return weak_mixing_scan(sys, lambda, grid, visits, tol, cap); });
  else
    rows = weak_mixing_scan(sys, start_point<Real>(m, sys), grid, visits, tol, cap);
  RunResult r;
  r.csv = csv_join({"t", "visits_used", "tail_max_distance", "verdict"});
  Json jr = Json::array();
  long candidates = 0;
  for (const auto& row : rows) {
    r.csv += csv_join({row.t, std::to_string(row.visits_used), format_double(row.tail_max), to_string(row.verdict)});
    jr.push_back({{"t", row.t},
                  {"t_value", row.t_value},
                  {"visits_used", row.visits_used},
                  {"tail_max_distance", row.tail_max},
                  {"verdict", to_string(row.verdict)}});
    candidates += row.verdict == VeechVerdict::candidate;
  }
  r.json = {{"rows", jr}, {"candidates", candidates}};
  r.summary.push_back("grid points: " + std::to_string(rows.size()) + ", candidates: " + std::to_string(candidates));
  if (!rows.empty() && rows.front().verdict == VeechVerdict::excluded)
    r.summary.push_back("(1,...,1) is not in H(pi); scan skipped");
  r.resolved = m;
  r.resolved.system.gamma0 = sys.gamma0.word();
  return r;
}

template <class S>
RunResult suspend_with(const Manifest& m, const Permutation& p, std::vector<S> lambda) {
  std::vector<S> tau;
  if (m.params.contains("tau")) {
    if (!m.params["tau"].is_array()) bad("tau must be an array of strings");
    for (const auto& t : m.params["tau"]) tau.push_back(parse_scalar<S>(t.get<std::string>()));
    if (static_cast<int>(tau.size()) != p.size()) bad("tau has the wrong dimension");
    if (!in_tau_cone(p, tau)) throw InputError("tau violates the suspension inequalities");
  } else {
    auto rng = rng_stream(m.seed, kTauStream);
    for (double x : sample_tau(p, rng).tau) tau.push_back(from_double<S>(x));
  }
  auto h = heights_from_tau(p, tau);
  auto z = zippered_rectangles(p, lambda, h);
  auto rect_json = [&](const std::vector<Rectangle<S>>& rs) {
    Json out = Json::array();
    for (const auto& q : rs)
      out.push_back({{"letter", p.name(q.letter)},
                     {"x0", to_double(q.x0)},
                     {"x1", to_double(q.x1)},
                     {"y0", to_double(q.y0)},
                     {"y1", to_double(q.y1)}});
    return out;
  };
  RunResult r;
  r.json = {{"lambda", lengths_json(lambda)},
            {"tau", lengths_json(tau)},
            {"heights", lengths_json(h)},
            {"area", to_string(suspension_area(lambda, h))},
            {"top", rect_json(z.top)},
            {"bottom", rect_json(z.bottom)}};
  if (m.params.contains("flow")) {
    const Json& f = m.params["flow"];
    auto flow = make_special_flow(p, lambda, h);
    auto pt = special_flow_evaluate(flow, parse_scalar<S>(f.value("x", "0")), parse_scalar<S>(f.value("s", "0")),
                                    parse_scalar<S>(f.value("time", "1")), current_precision_bits());
    r.json["flow"] = {{"x", to_string(pt.x)}, {"s", to_string(pt.s)}, {"crossings", pt.crossings}, {"nudges", pt.nudges}};
  }
  r.summary.push_back("area sum lambda h: " + to_string(suspension_area(lambda, h)));
  return r;
}

RunResult run_suspend(const Manifest& m) {
  auto p = Permutation::parse(m.system.permutation);
  p.require_irreducible("suspend");
  if (!m.system.lambda.empty())
    return with_given_lengths(m.system, [&](auto lambda) { return suspend_with(m, p, std::move(lambda)); });
  auto rng = rng_stream(m.seed, kLambdaStream);
  auto w = dirichlet_ones(rng, p.size());
  if (m.system.mode == ArithmeticMode::real) return suspend_with(m, p, std::vector<Real>(w.begin(), w.end()));
  std::vector<Rational> lambda;
  for (double x : w) lambda.push_back(Rational(x));
  return suspend_with(m, p, lambda);
}

RunResult run_deviations(Manifest m) {
  DeviationOptions opt;
  opt.samples = get_or<long>(m.params, "samples", opt.samples);
  opt.escape_cap = get_or<long>(m.params, "escape_cap", opt.escape_cap);
  opt.workers = get_or<unsigned>(m.params, "workers", opt.workers);
  opt.seed = m.seed;
  for (double n : get_vector(m.params, "n_grid", {10, 20, 30, 40, 50, 60, 70, 80})) {
    if (n < 0 || n != std::floor(n)) bad("n_grid entries must be nonnegative integers");
    opt.n_grid.push_back(static_cast<long>(n));
  }
  const auto which = get_or<std::string>(m.params, "experiment", "both");
  if (which != "both" && which != "contraction" && which != "anomalous")
    bad("experiment must be contraction, anomalous or both");
  auto sys = build_system(m.system, m.seed);
  const int d = sys.dim();
  RunResult r;
  r.csv = csv_join({"experiment", "n", "p_hat", "ci_low", "ci_high"});
  r.json = Json::object();
  auto record = [&](const std::string& name, const DeviationResult& dr) {
    Json rows = Json::array();
    for (const auto& row : dr.rows) {
      r.csv += csv_join({name, std::to_string(row.n), format_double(row.p_hat), format_double(row.ci.lo),
                         format_double(row.ci.hi)});
      rows.push_back({{"n", row.n}, {"count", row.count}, {"p_hat", row.p_hat}, {"ci", interval_json(row.ci)}});
    }
    r.json[name] = {{"rate", dr.threshold_rate}, {"rows", rows},          {"fit", fit_json(dr.fit)},
                    {"samples", dr.samples},     {"escaped", dr.escaped}};
    r.summary.push_back(name + ": slope " + format_double(dr.fit.slope) + ", CI [" +
                        format_double(dr.fit.slope_ci.lo) + ", " + format_double(dr.fit.slope_ci.hi) + "]");
  };
  // Missing thresholds come from a pilot spectrum: c' = f c with c the
  // smallest positive exponent, and L_tilde = g L with L the top exponent.
  const bool need_c = which != "anomalous" && !m.params.contains("c_prime");
  const bool need_l = which != "contraction" && !m.params.contains("l_tilde");
  if (need_c || need_l) {
    LyapunovOptions pilot;
    pilot.steps = get_or<long>(m.params, "pilot_steps", 2000);
    pilot.escape_cap = opt.escape_cap;
    pilot.seed = m.seed;
    auto rng = rng_stream(m.seed, kPilotStream);
    auto est = lyapunov_spectrum(sys, sample_simplex<Real>(sys, rng), pilot);
    const double top = est.exponents.front();
    const double c = est.exponents[static_cast<std::size_t>(est.genus) - 1];
    r.json["pilot"] = {{"steps", pilot.steps}, {"exponents", est.exponents}, {"halfwidths", est.halfwidths}};
    if (need_c) m.params["c_prime"] = get_or<double>(m.params, "c_prime_fraction", 0.5) * c;
    if (need_l) m.params["l_tilde"] = get_or<double>(m.params, "l_tilde_factor", 2.0) * top;
  }
  if (which != "anomalous") {
    auto v = to_eigen(get_vector(m.params, "v", std::vector<double>(d, 1.0)));
    if (v.size() != d) bad("v has the wrong dimension");
    record("contraction", contraction_deviation_experiment(sys, m.params["c_prime"].get<double>(), v.normalized(), opt));
  }
  if (which != "contraction") {
    record("anomalous", anomalous_growth_experiment(sys, m.params["l_tilde"].get<double>(), opt));
  }
  r.resolved = m;
  r.resolved.system.gamma0 = sys.gamma0.word();
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(const Manifest& m) {
  Json sys = {{"permutation", m.system.permutation},
              {"mode", to_string(m.system.mode)},
              {"precision_bits", m.system.precision_bits}};
  if (!m.system.lambda.empty()) sys["lambda"] = m.system.lambda;
  if (!m.system.gamma0.empty()) sys["gamma0"] = m.system.gamma0;
  Json j = {{"kind", m.kind}, {"system", sys}, {"seed", m.seed}, {"params", m.params}};
  if (!m.outputs.empty()) j["outputs"] = m.outputs;
  return j;
}

Manifest manifest_from_json(const Json& j) {
  if (!j.is_object()) bad("top level must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "kind" && key != "system" && key != "seed" && key != "params" && key != "outputs")
      bad("unknown field '" + key + "'");
  Manifest m;
  if (!j.contains("kind") || !j["kind"].is_string()) bad("missing string field 'kind'");
  m.kind = j["kind"].get<std::string>();
  if (std::find(manifest_kinds().begin(), manifest_kinds().end(), m.kind) == manifest_kinds().end())
    bad("unknown kind '" + m.kind + "'");
  if (!j.contains("system") || !j["system"].is_object()) bad("missing object field 'system'");
  const Json& s = j["system"];
  for (const auto& [key, _] : s.items())
    if (key != "permutation" && key != "mode" && key != "precision_bits" && key != "lambda" && key != "gamma0")
      bad("unknown system field '" + key + "'");
  if (!s.contains("permutation") || !s["permutation"].is_string()) bad("missing string field 'system.permutation'");
  m.system.permutation = s["permutation"].get<std::string>();
  if (s.contains("mode")) {
    if (!s["mode"].is_string()) bad("system.mode must be a string");
    m.system.mode = parse_arithmetic_mode(s["mode"].get<std::string>());
  }
  if (s.contains("precision_bits")) {
    if (!s["precision_bits"].is_number_unsigned()) bad("system.precision_bits must be a positive integer");
    m.system.precision_bits = s["precision_bits"].get<unsigned>();
    if (m.system.precision_bits < 53) bad("system.precision_bits must be at least 53");
  }
  if (s.contains("lambda")) {
    if (!s["lambda"].is_array()) bad("system.lambda must be an array of strings");
    for (const auto& x : s["lambda"]) {
      if (!x.is_string()) bad("system.lambda must be an array of strings");
      m.system.lambda.push_back(x.get<std::string>());
    }
  }
  if (s.contains("gamma0")) {
    if (!s["gamma0"].is_string()) bad("system.gamma0 must be a string");
    m.system.gamma0 = s["gamma0"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("seed must be a nonnegative 64-bit integer");
    m.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) bad("params must be an object");
    m.params = j["params"];
  }
  if (j.contains("outputs")) {
    if (!j["outputs"].is_object()) bad("outputs must be an object");
    for (const auto& [key, v] : j["outputs"].items()) {
      if (key != "json" && key != "csv") bad("unknown output '" + key + "'");
      if (!v.is_string()) bad("output paths must be strings");
      m.outputs[key] = v.get<std::string>();
    }
  }
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("manifest " + path + " is not valid JSON: " + e.what());
  }
  return manifest_from_json(j);
}

SimplexSystem build_system(const SystemSpec& spec, std::uint64_t) {
  auto p = Permutation::parse(spec.permutation);
  p.require_irreducible("simplex system");
  if (!spec.gamma0.empty()) return make_simplex_system(RauzyPath::from_word(p, spec.gamma0));
  if (!spec.lambda.empty())
    return with_given_lengths(spec, [&](auto lambda) { return make_simplex_system(p, lambda); });
  return make_default_simplex_system(p);
}

Json perm_info_json(const Permutation& p) {
  Json j = {{"permutation", p.to_string()}, {"d", p.size()}, {"irreducible", p.is_irreducible()}};
  std::vector<int> mono;
  for (int x : p.monodromy()) mono.push_back(x);
  j["monodromy"] = mono;
  j["rotation"] = p.is_rotation();
  if (!p.is_irreducible()) return j;
  auto prof = singularity_profile(p);
  auto rule = check_one_vector_rule(p);
  auto ts = omega_maps(p);
  j["sigma"] = prof.sigma;
  j["singularities"] = prof.orbits;
  j["b_vectors"] = prof.b_vectors;
  j["genus"] = prof.genus;
  j["rank_omega"] = ts.rank;
  j["dim_h"] = p.size() + 1 - static_cast<int>(prof.orbits.size());
  j["ones_in_h"] = rule.ones_in_h;
  j["one_vector_values"] = rule.values;
  j["omega"] = ts.omega.to_rows();
  j["h_lattice_basis"] = h_lattice_basis(p).to_rows();
  return j;
}

Json rauzy_class_json(const Permutation& p) {
  auto cls = rauzy_class(p);
  Json members = Json::array();
  for (int v = 0; v < cls.size(); ++v) {
    const auto& q = cls.members[v];
    auto prof = singularity_profile(q);
    members.push_back({{"permutation", q.to_string()},
                       {"genus", prof.genus},
                       {"singularities", prof.orbits.size()},
                       {"ones_in_h", check_one_vector_rule(q).ones_in_h},
                       {"top", cls.members[cls.next[v][0]].to_string()},
                       {"bottom", cls.members[cls.next[v][1]].to_string()}});
  }
  return {{"permutation", p.to_string()},
          {"size", cls.size()},
          {"arrows", cls.arrow_count()},
          {"self_loops", cls.self_loops()},
          {"members", members}};
}

InductTrace induct_trace(const SystemSpec& spec, int steps, std::ostream* echo) {
  if (steps < 0) throw InputError("steps must be nonnegative");
  auto p0 = Permutation::parse(spec.permutation);
  p0.require_irreducible("induct");
  if (static_cast<int>(spec.lambda.size()) != p0.size())
    throw InputError("induct needs " + std::to_string(p0.size()) + " lengths");
  return with_given_lengths(spec, [&](auto lambda) {
    InductTrace t;
    require_positive_lengths(lambda, p0.size());
    auto emit = [&](const std::string& line) {
      t.csv += line;
      if (echo) *echo << line << std::flush;
    };
    std::vector<std::string> head{"step", "kind", "winner", "loser"};
    for (int a = 0; a < p0.size(); ++a) head.push_back("lambda_" + p0.name(a));
    head.push_back("permutation");
    emit(csv_join(head));
    auto row = [&](int n, const std::string& kind, const std::string& w, const std::string& l, const auto& lam,
                   const Permutation& p) {
      std::vector<std::string> cells{std::to_string(n), kind, w, l};
      for (const auto& x : lam) cells.push_back(to_string(x));
      cells.push_back(p.to_string());
      emit(csv_join(cells));
    };
    Permutation p = p0;
    row(0, "", "", "", lambda, p);
    for (int n = 1; n <= steps; ++n) {
      try {
        auto r = induction_step(lambda, p);
        lambda = std::move(r.lambda);
        p = r.perm;
        row(n, to_string(r.kind), p0.name(r.winner), p0.name(r.loser), lambda, p);
        t.steps_done = n;
      } catch (const Error& e) {
        t.stop_reason = "step " + std::to_string(n) + ": " + e.what();
        t.stop_code = e.exit_code();
        break;
      }
    }
    return t;
  });
}

RunResult run(const Manifest& m) {
  PrecisionScope scope(m.system.precision_bits);
  RunResult r;
  if (m.kind == "perm-info")
    r = run_perm_info(m);
  else if (m.kind == "rauzy-class")
    r = run_rauzy_class(m);
  else if (m.kind == "induct")
    r = run_induct(m);
  else if (m.kind == "orbit")
    r = run_orbit(m);
  else if (m.kind == "lyapunov")
    r = run_lyapunov(m);
  else if (m.kind == "survival")
    r = run_survival(m);
  else if (m.kind == "weakmix-scan")
    r = run_weakmix_scan(m);
  else if (m.kind == "suspend")
    r = run_suspend(m);
  else if (m.kind == "deviations")
    r = run_deviations(m);
  else
    bad("unknown kind '" + m.kind + "'");
  if (r.resolved.kind.empty()) r.resolved = m;
  return r;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::vector<std::string> write_outputs(const RunResult& r) {
  std::vector<std::string> written;
  const auto& outs = r.resolved.outputs;
  if (auto it = outs.find("json"); it != outs.end()) {
    Json env = {{"kind", r.resolved.kind}, {"manifest", to_json(r.resolved)}, {"result", r.json}};
    write_file_atomic(it->second, env.dump(2) + "\n");
    written.push_back(it->second);
  }
  if (auto it = outs.find("csv"); it != outs.end()) {
    if (r.csv.empty()) throw InputError("kind '" + r.resolved.kind + "' has no CSV output");
    write_file_atomic(it->second, r.csv);
    written.push_back(it->second);
  }
  return written;
}

}  // namespace iet
