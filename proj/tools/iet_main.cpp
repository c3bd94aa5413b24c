// iet: command-line front end for interval exchange experiments.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "iet/experiment.hpp"

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned precision_bits = 0;
  std::string mode = "rational";
  std::string json_out;
  std::string csv_out;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

iet::Json number_list(const std::string& s) {
  iet::Json arr = iet::Json::array();
  for (const auto& x : split_list(s)) {
    try {
      arr.push_back(std::stod(x));
    } catch (const std::exception&) {
      throw iet::InputError("not a number: '" + x + "'");
    }
  }
  return arr;
}

iet::Manifest base_manifest(const Globals& g, const std::string& kind, const std::string& perm) {
  iet::Manifest m;
  m.kind = kind;
  m.seed = g.seed;
  m.system.permutation = perm;
  m.system.mode = iet::parse_arithmetic_mode(g.mode);
  m.system.precision_bits = g.precision_bits ? g.precision_bits : iet::default_precision_bits();
  if (!g.json_out.empty()) m.outputs["json"] = g.json_out;
  if (!g.csv_out.empty()) m.outputs["csv"] = g.csv_out;
  return m;
}

void report(const iet::RunResult& r, bool print_json, bool print_csv) {
  for (const auto& line : r.summary) std::cout << line << '\n';
  for (const auto& path : iet::write_outputs(r)) std::cout << "wrote " << path << '\n';
  if (print_json) std::cout << r.json.dump(2) << '\n';
  if (print_csv && !r.csv.empty()) std::cout << r.csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval exchange transformations: Rauzy induction, cocycles and weak-mixing experiments"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Master seed for all random streams");
  app.add_option("--precision-bits", g.precision_bits, "MPFR mantissa bits (default: IET_PRECISION_BITS or 256)");
  app.add_option("--mode", g.mode, "Arithmetic: rational, quadratic or float")
      ->check(CLI::IsMember({"rational", "quadratic", "float"}));
  app.add_option("--json", g.json_out, "Write the JSON result here");
  app.add_option("--csv", g.csv_out, "Write the CSV table here");

  std::string perm, lambda, gamma0;
  bool print_json = false, print_csv = false;
  auto add_perm = [&](CLI::App* sub) {
    sub->add_option("permutation", perm, "Permutation, e.g. \"a b c d / d c b a\"")->required();
    sub->add_flag("--print-json", print_json, "Print the JSON result");
  };
  auto add_lengths = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--lambda", lambda, "Comma-separated lengths (fractions, decimals, phi, sqrtN)");
    if (required) o->required();
    sub->add_option("--gamma0", gamma0, "Positive loop at the permutation defining Delta, e.g. tbtb");
  };

  auto* perm_info = app.add_subcommand("perm-info", "Genus, singularities and H(pi) of a permutation");
  add_perm(perm_info);

  auto* rauzy = app.add_subcommand("rauzy-class", "Enumerate the Rauzy class");
  add_perm(rauzy);

  int induct_steps = 10;
  auto* induct = app.add_subcommand("induct", "Print a Rauzy induction trace");
  add_perm(induct);
  add_lengths(induct, true);
  induct->add_option("--steps", induct_steps, "Number of induction steps");

  long orbit_steps = 1000;
  auto* orbit = app.add_subcommand("orbit", "Renormalization orbit log as CSV");
  add_perm(orbit);
  add_lengths(orbit, false);
  orbit->add_option("--steps", orbit_steps, "Number of renormalization steps");

  long lyap_steps = 100000, lyap_burn = -1;
  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov spectrum of the cocycle restricted to H(pi)");
  add_perm(lyap);
  add_lengths(lyap, false);
  lyap->add_option("--steps", lyap_steps, "Delta-returns to average over");
  lyap->add_option("--burn-in", lyap_burn, "Discarded returns (default steps/100)");

  double delta = 0.05, line_norm = 0.02;
  int n_block = 5, m_max = 20;
  long samples = 5000, dev_samples = 2000;
  unsigned workers = 1;
  std::string direction, offset;
  auto* surv = app.add_subcommand("survival", "Survival probabilities of lines near the origin");
  add_perm(surv);
  add_lengths(surv, false);
  surv->add_option("--delta", delta, "Radius of the lattice balls");
  surv->add_option("-N,--block", n_block, "Delta-returns per generation");
  surv->add_option("--m-max", m_max, "Number of generations");
  surv->add_option("--samples", samples, "Monte Carlo samples");
  surv->add_option("--line-norm", line_norm, "Distance of the line from the origin");
  surv->add_option("--direction", direction, "Comma-separated line direction (default all ones)");
  surv->add_option("--offset", offset, "Comma-separated point on the line (overrides --line-norm)");
  surv->add_option("--workers", workers, "Worker threads");

  std::string t_grid;
  long grid_den = 0, visits = 30;
  double tol = 1e-3;
  auto* scan = app.add_subcommand("weakmix-scan", "Veech-criterion scan over t with h = (1,...,1)");
  add_perm(scan);
  add_lengths(scan, false);
  scan->add_option("--t-grid", t_grid, "Comma-separated t values (fractions, phi, sqrtN)");
  scan->add_option("--grid-denominator", grid_den, "Add t = k/q for k = 1..q-1");
  scan->add_option("--visits", visits, "Delta visits per orbit");
  scan->add_option("--tol", tol, "Tail distance below which t is flagged");

  std::string tau;
  auto* susp = app.add_subcommand("suspend", "Zippered rectangles for a suspension datum");
  add_perm(susp);
  add_lengths(susp, false);
  susp->add_option("--tau", tau, "Comma-separated tau (default: sampled)");

  std::string experiment = "both", n_grid = "10,20,30,40,50,60,70,80", vvec;
  double c_prime = 0.0, l_tilde = 0.0, c_fraction = 0.5, l_factor = 2.0;
  auto* dev = app.add_subcommand("deviations", "Large-deviation experiments for the cocycle");
  add_perm(dev);
  add_lengths(dev, false);
  dev->add_option("--experiment", experiment, "contraction, anomalous or both")
      ->check(CLI::IsMember({"contraction", "anomalous", "both"}));
  auto* c_opt = dev->add_option("--c-prime", c_prime, "Contraction threshold rate c'");
  auto* l_opt = dev->add_option("--l-tilde", l_tilde, "Growth threshold rate");
  dev->add_option("--c-prime-fraction", c_fraction, "Default c' as a fraction of the smallest positive exponent");
  dev->add_option("--l-tilde-factor", l_factor, "Default growth threshold as a multiple of the top exponent");
  dev->add_option("--n-grid", n_grid, "Comma-separated return counts");
  dev->add_option("--samples", dev_samples, "Monte Carlo samples");
  dev->add_option("--v", vvec, "Comma-separated vector for the contraction experiment");
  dev->add_option("--workers", workers, "Worker threads");

  std::string manifest_path;
  auto* run = app.add_subcommand("run", "Run an experiment manifest");
  run->add_option("manifest", manifest_path, "Manifest JSON file")->required();
  run->add_flag("--print-json", print_json, "Print the JSON result");
  run->add_flag("--print-csv", print_csv, "Print the CSV table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto sub = app.get_subcommands().front();
    const std::string kind = sub->get_name();
    if (kind == "run") {
      auto m = iet::load_manifest(manifest_path);
      report(iet::run(m), print_json, print_csv);
      return 0;
    }
    auto m = base_manifest(g, kind, perm);
    if (!lambda.empty()) m.system.lambda = split_list(lambda);
    m.system.gamma0 = gamma0;
    if (kind == "induct") {
      iet::PrecisionScope scope(m.system.precision_bits);
      auto trace = iet::induct_trace(m.system, induct_steps, &std::cout);
      if (!m.outputs.empty()) {
        iet::RunResult r;
        r.csv = trace.csv;
        r.json = {{"steps", trace.steps_done}};
        r.resolved = m;
        iet::write_outputs(r);
      }
      if (!trace.stop_reason.empty()) {
        std::cerr << "error: " << trace.stop_reason << '\n';
        return trace.stop_code;
      }
      return 0;
    }
    if (kind == "orbit") {
      m.params["steps"] = orbit_steps;
      print_csv = g.csv_out.empty();
    } else if (kind == "lyapunov") {
      m.params["steps"] = lyap_steps;
      m.params["burn_in"] = lyap_burn;
    } else if (kind == "survival") {
      m.params = {{"delta", delta}, {"N", n_block},           {"m_max", m_max},
                  {"samples", samples}, {"line_norm", line_norm}, {"workers", workers}};
      if (!direction.empty()) m.params["direction"] = number_list(direction);
      if (!offset.empty()) m.params["offset"] = number_list(offset);
    } else if (kind == "weakmix-scan") {
      if (!t_grid.empty()) m.params["t_grid"] = split_list(t_grid);
      if (grid_den) m.params["grid_denominator"] = grid_den;
      m.params["visits"] = visits;
      m.params["tol"] = tol;
      print_csv = g.csv_out.empty();
    } else if (kind == "suspend") {
      if (!tau.empty()) m.params["tau"] = split_list(tau);
    } else if (kind == "deviations") {
      m.params = {{"experiment", experiment},     {"n_grid", number_list(n_grid)}, {"samples", dev_samples},
                  {"c_prime_fraction", c_fraction}, {"l_tilde_factor", l_factor},    {"workers", workers}};
      if (c_opt->count()) m.params["c_prime"] = c_prime;
      if (l_opt->count()) m.params["l_tilde"] = l_tilde;
      if (!vvec.empty()) m.params["v"] = number_list(vvec);
    }
    report(iet::run(m), print_json, print_csv);
    return 0;
  } catch (const iet::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
