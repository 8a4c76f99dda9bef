// Command-line front end for the wiretap secrecy-capacity toolbox.
//
// Exit codes: 0 success, 1 input error, 2 numerical non-convergence or a
// failed check, so scripted verification runs can gate on the code.

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wiretap/bounds.hpp"
#include "wiretap/channel.hpp"
#include "wiretap/eei.hpp"
#include "wiretap/enhance.hpp"
#include "wiretap/io.hpp"
#include "wiretap/solver.hpp"
#include "wiretap/sweep.hpp"

namespace {

using nlohmann::json;
using namespace wiretap;

constexpr double kLn2 = 0.6931471805599453;

struct GlobalOpts {
  double tol = 1e-6;
  double tol_gap = 1e-3;
  int restarts = 8;
  std::uint64_t seed = 42;
  std::string units = "nats";
  std::string format = "text";
  std::vector<double> eps_sweep{1e-1, 1e-2, 1e-3, 1e-4};
  long samples = 200000;
};

double in_units(double nats, const GlobalOpts& g) {
  return g.units == "bits" ? nats / kLn2 : nats;
}

SolverConfig solver_cfg(const GlobalOpts& g) {
  SolverConfig cfg;
  cfg.restarts = g.restarts;
  cfg.seed = g.seed;
  cfg.cert_tol = g.tol;
  return cfg;
}

// Canonical view of any channel file; general channels are reduced at the
// smallest eps of the sweep.
CanonicalChannel as_canonical(const ChannelInput& input, const GlobalOpts& g) {
  if (const auto* c = std::get_if<CanonicalChannel>(&input)) return *c;
  const auto& gen = std::get<GeneralChannel>(input);
  if (std::holds_alternative<TotalPower>(gen.constraint)) {
    throw ChannelFileError(
        "this command needs a canonical channel or a covariance-constrained "
        "general channel (total power is only supported by `capacity`)");
  }
  return canonicalize(gen, g.eps_sweep.back());
}

void emit(const GlobalOpts& g, const json& report, const std::string& text) {
  if (g.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

int cmd_capacity(const std::string& file, const GlobalOpts& g) {
  ChannelInput input = load_channel(file);
  json report;
  std::ostringstream text;
  bool converged = false;
  if (const auto* gen = std::get_if<GeneralChannel>(&input)) {
    SweepConfig cfg;
    cfg.eps_sweep = g.eps_sweep;
    cfg.solver = solver_cfg(g);
    GeneralCapacityResult r = capacity_general(*gen, cfg);
    converged = r.converged;
    report = to_json(r);
    report["value"] = in_units(r.extrapolated, g);
    report["units"] = g.units;
    text << "secrecy capacity (extrapolated): " << in_units(r.extrapolated, g)
         << " " << g.units << "\n";
    for (size_t i = 0; i < r.eps.size(); ++i) {
      text << "  eps " << r.eps[i] << " -> " << in_units(r.values[i], g)
           << "\n";
    }
    text << "converged: " << (r.converged ? "yes" : "no") << "\n";
  } else {
    const auto& ch = std::get<CanonicalChannel>(input);
    CapacityResult r = maximize_rate(ch, solver_cfg(g));
    converged = r.converged;
    report = to_json(r);
    report["value"] = in_units(r.value, g);
    report["units"] = g.units;
    text << "secrecy capacity: " << in_units(r.value, g) << " " << g.units
         << "\n";
    text << "Kx*:\n" << r.Kx_star.mat() << "\n";
    text << "certificate: stationarity "
         << r.certificate.stationarity_residual << ", comp slack "
         << r.certificate.comp_slack_1 << " / " << r.certificate.comp_slack_2
         << ", psd margin " << r.certificate.psd_margin << "\n";
    text << "converged: " << (r.converged ? "yes" : "no") << "\n";
  }
  emit(g, report, text.str());
  return converged ? 0 : 2;
}

int cmd_verify(const std::string& file, const GlobalOpts& g) {
  CanonicalChannel ch = as_canonical(load_channel(file), g);
  CapacityResult r = maximize_rate(ch, solver_cfg(g));
  if (!r.converged) {
    json report = to_json(r);
    report["chain"] = nullptr;
    emit(g, report, "solver did not converge; proof chain skipped\n");
    return 2;
  }
  ChainReport chain = verify_theorem2_chain(ch, r);
  json report = to_json(chain);
  report["value_nats"] = r.value;
  report["value"] = in_units(r.value, g);
  report["units"] = g.units;
  std::ostringstream text;
  text << "secrecy capacity: " << in_units(r.value, g) << " " << g.units
       << "\n";
  text << "Ktilde_r:\n" << chain.enhanced.Ktilde_r.mat() << "\n";
  for (const auto& s : chain.steps) {
    text << (s.pass ? "PASS " : "FAIL ") << s.name << " (residual "
         << s.residual << ")\n";
  }
  emit(g, report, text.str());
  return chain.all_pass ? 0 : 2;
}

int cmd_upperbound(const std::string& file, const GlobalOpts& g) {
  CanonicalChannel ch = as_canonical(load_channel(file), g);
  SatoResult r = sato_upper_bound(ch);
  json report = to_json(r);
  report["value"] = in_units(r.value, g);
  report["units"] = g.units;
  std::ostringstream text;
  text << "Sato-style upper bound: " << in_units(r.value, g) << " " << g.units
       << "\n";
  text << "converged: " << (r.converged ? "yes" : "no") << "\n";
  emit(g, report, text.str());
  return r.converged ? 0 : 2;
}

int cmd_crosscheck(const std::string& file, const GlobalOpts& g) {
  CanonicalChannel ch = as_canonical(load_channel(file), g);
  CrosscheckReport r = crosscheck(ch, g.tol_gap, solver_cfg(g));
  json report = to_json(r);
  report["units"] = g.units;
  std::ostringstream text;
  text << "solver value: " << in_units(r.solver_value, g) << " " << g.units
       << "\n";
  text << "sato bound:   " << in_units(r.sato_value, g) << " " << g.units
       << "\n";
  text << "gap: " << r.gap << " nats, dominance "
       << (r.dominance ? "holds" : "VIOLATED") << "\n";
  emit(g, report, text.str());
  return r.pass ? 0 : 2;
}

int cmd_parallel(const std::string& file, const GlobalOpts& g) {
  CanonicalChannel ch = as_canonical(load_channel(file), g);
  ParallelResult r = parallel_capacity(ch);
  json report = to_json(r);
  report["value"] = in_units(r.value, g);
  report["units"] = g.units;
  std::ostringstream text;
  text << "parallel-channel capacity: " << in_units(r.value, g) << " "
       << g.units << "\n";
  text << "active subchannels:";
  for (int i : r.active_set) text << " " << i;
  text << "\n";
  emit(g, report, text.str());
  return 0;
}

int cmd_eei(const std::string& file, std::vector<std::string> checks,
            int num_inputs, const GlobalOpts& g) {
  CanonicalChannel ch = as_canonical(load_channel(file), g);
  if (!psd_leq(ch.Kr, ch.Ke, default_tol(ch.Ke))) {
    std::cerr << "eei: channel must be degraded (Kr <= Ke in the PSD order)\n";
    return 1;
  }
  CapacityResult r = maximize_rate(ch, solver_cfg(g));
  if (!r.converged) {
    std::cerr << "eei: solver did not converge on this channel\n";
    return 2;
  }
  if (checks.empty()) {
    checks = {"eei", "debruijn", "fii", "cramer-rao", "path"};
  }

  std::vector<MixtureInput> inputs;
  // input 0 is the Gaussian equality case X ~ N(0, Kx*)
  inputs.push_back(MixtureInput{
      {1.0}, {Eigen::VectorXd::Zero(ch.dim())}, r.Kx_star});
  for (int i = 1; i < num_inputs; ++i) {
    inputs.push_back(random_mixture_input(g.seed + i, ch.S));
  }

  json report;
  report["checks"] = json::object();
  std::ostringstream text;
  bool all_pass = true;
  auto run_one = [&](const std::string& name, const CheckReport& cr) {
    report["checks"][name] = to_json(cr);
    all_pass = all_pass && cr.all_pass;
    text << (cr.all_pass ? "PASS " : "FAIL ") << name << "\n";
    for (const auto& e : cr.entries) {
      text << "  " << (e.pass ? "pass" : "FAIL") << " " << e.name
           << ": statistic " << e.statistic << " vs threshold " << e.threshold
           << " (stderr " << e.stderr_ << ")\n";
    }
  };

  for (const std::string& name : checks) {
    if (name == "eei") {
      run_one("eei", eei_check(ch, r.Kx_star, inputs, g.samples, g.seed));
    } else if (name == "debruijn") {
      run_one("debruijn",
              debruijn_check(inputs.back(), SymMatrix::Identity(ch.dim()),
                             {0.5, 1.0, 2.0}, g.samples, g.seed));
    } else if (name == "fii") {
      MixtureInput gauss{
          {1.0},
          {Eigen::VectorXd::Zero(ch.dim())},
          SymMatrix(0.5 * Eigen::MatrixXd::Identity(ch.dim(), ch.dim()))};
      run_one("fii",
              fii_check(inputs.back(), gauss,
                        0.5 * Eigen::MatrixXd::Identity(ch.dim(), ch.dim()),
                        g.samples, g.seed));
    } else if (name == "cramer-rao") {
      run_one("cramer-rao", cramer_rao_check(inputs.back(), g.samples, g.seed));
    } else if (name == "path") {
      run_one("path",
              path_monotonicity_check(ch, r.Kx_star, inputs.back(),
                                      {0.0, 0.25, 0.5, 0.75, 1.0}, g.samples,
                                      g.seed));
    } else {
      std::cerr << "eei: unknown check \"" << name << "\"\n";
      return 1;
    }
  }
  report["all_pass"] = all_pass;
  emit(g, report, text.str());
  return all_pass ? 0 : 2;
}

int cmd_gen(const std::string& kind, int t, const std::string& out,
            const GlobalOpts& g) {
  InstanceKind k;
  if (kind == "general") {
    k = InstanceKind::General;
  } else if (kind == "degraded") {
    k = InstanceKind::Degraded;
  } else if (kind == "reversed") {
    k = InstanceKind::Reversed;
  } else if (kind == "diagonal") {
    k = InstanceKind::Diagonal;
  } else {
    std::cerr << "gen: unknown kind \"" << kind
              << "\" (expected general|degraded|reversed|diagonal)\n";
    return 1;
  }
  save_channel(random_instance(g.seed, t, k), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy-capacity toolbox for vector Gaussian wiretap channels"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--tol", g.tol, "certificate tolerance");
  app.add_option("--tol-gap", g.tol_gap, "crosscheck gap tolerance");
  app.add_option("--restarts", g.restarts, "solver restarts");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--units", g.units, "nats|bits")
      ->check(CLI::IsMember({"nats", "bits"}));
  app.add_option("--format", g.format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--eps-sweep", g.eps_sweep,
                 "decreasing eps schedule for general channels");
  app.add_option("--samples", g.samples, "Monte Carlo samples per estimate");

  std::string file, out, kind;
  int t = 2;
  int num_inputs = 5;
  std::vector<std::string> checks;

  auto* capacity = app.add_subcommand("capacity", "secrecy capacity of a channel file");
  capacity->add_option("file", file)->required();
  auto* verify = app.add_subcommand("verify", "run the full enhancement proof chain");
  verify->add_option("file", file)->required();
  auto* upper = app.add_subcommand("upperbound", "Sato-style min-max upper bound");
  upper->add_option("file", file)->required();
  auto* cross = app.add_subcommand("crosscheck", "solver vs upper bound");
  cross->add_option("file", file)->required();
  auto* parallel = app.add_subcommand("parallel", "closed form for diagonal channels");
  parallel->add_option("file", file)->required();
  auto* eei = app.add_subcommand("eei", "entropy-inequality test suite");
  eei->add_option("file", file)->required();
  eei->add_option("--check", checks, "subset of: eei debruijn fii cramer-rao path");
  eei->add_option("--inputs", num_inputs, "number of mixture inputs");
  auto* gen = app.add_subcommand("gen", "write a random channel file");
  gen->add_option("kind", kind, "general|degraded|reversed|diagonal")->required();
  gen->add_option("t", t, "dimension")->required();
  gen->add_option("out", out, "output path")->required();

  // global flags may appear after the subcommand
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (capacity->parsed()) return cmd_capacity(file, g);
    if (verify->parsed()) return cmd_verify(file, g);
    if (upper->parsed()) return cmd_upperbound(file, g);
    if (cross->parsed()) return cmd_crosscheck(file, g);
    if (parallel->parsed()) return cmd_parallel(file, g);
    if (eei->parsed()) return cmd_eei(file, checks, num_inputs, g);
    if (gen->parsed()) return cmd_gen(kind, t, out, g);
  } catch (const ChannelFileError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
