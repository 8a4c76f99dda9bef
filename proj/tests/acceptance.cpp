// Acceptance suite: one line per criterion, process exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wiretap/bounds.hpp"
#include "wiretap/channel.hpp"
#include "wiretap/eei.hpp"
#include "wiretap/enhance.hpp"
#include "wiretap/io.hpp"
#include "wiretap/solver.hpp"

using namespace wiretap;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail = "") {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << index << ": "
            << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

CanonicalChannel scalar_channel(double kr, double ke, double s) {
  return {SymMatrix::Diagonal(Eigen::VectorXd::Constant(1, kr)),
          SymMatrix::Diagonal(Eigen::VectorXd::Constant(1, ke)),
          SymMatrix::Diagonal(Eigen::VectorXd::Constant(1, s))};
}

// 1. scalar solver vs dense grid, 20 seeds, < 1 s
void criterion1() {
  auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CanonicalChannel ch = random_instance(seed, 1, InstanceKind::General);
    CapacityResult r = maximize_rate(ch);
    double best = 0.0;
    const double s = ch.S(0, 0);
    const double kr = ch.Kr(0, 0), ke = ch.Ke(0, 0);
    for (int i = 0; i <= 10000; ++i) {
      const double kx = s * i / 10000.0;
      best = std::max(best, 0.5 * std::log(1.0 + kx / kr) -
                                0.5 * std::log(1.0 + kx / ke));
    }
    worst = std::max(worst, std::abs(r.value - best));
    ok = ok && r.converged && std::abs(r.value - best) <= 1e-5;
  }
  double dt = seconds_since(t0);
  ok = ok && dt < 1.0;
  std::ostringstream d;
  d << "max grid gap " << worst << ", " << dt << " s";
  report(1, "scalar grid oracle on 20 seeds", ok, d.str());
}

// 2. the fully worked 2x2 crossing instance
void criterion2() {
  CanonicalChannel ch{SymMatrix::Diagonal(Eigen::Vector2d(1, 2)),
                      SymMatrix::Diagonal(Eigen::Vector2d(2, 1)),
                      SymMatrix::Identity(2)};
  const double c_exact = 0.5 * std::log(4.0 / 3.0);
  CapacityResult r = maximize_rate(ch);
  bool ok = r.converged;
  ok = ok && std::abs(r.value - c_exact) <= 1e-6;
  Eigen::MatrixXd kx_exact = Eigen::Vector2d(1, 0).asDiagonal();
  ok = ok && (r.Kx_star.mat() - kx_exact).cwiseAbs().maxCoeff() <= 1e-4;
  KktCertificate cert = kkt_certificate(r.Kx_star, ch);
  Eigen::MatrixXd m1_exact = Eigen::Vector2d(0, 0.5).asDiagonal();
  Eigen::MatrixXd m2_exact = Eigen::Vector2d(1.0 / 6.0, 0).asDiagonal();
  ok = ok && (cert.M1.mat() - m1_exact).cwiseAbs().maxCoeff() <= 1e-5;
  ok = ok && (cert.M2.mat() - m2_exact).cwiseAbs().maxCoeff() <= 1e-5;
  ChainReport chain = verify_theorem2_chain(ch, r);
  ok = ok && chain.all_pass;
  ok = ok && (chain.enhanced.Ktilde_r.mat() - Eigen::MatrixXd::Identity(2, 2))
                     .cwiseAbs()
                     .maxCoeff() <= 1e-5;
  ok = ok && std::abs(chain.degraded_value - r.value) <= 1e-6;
  report(2, "worked 2x2 instance with full proof chain", ok);
}

// shared instances for criteria 3 and 4
struct SolvedInstance {
  CanonicalChannel ch;
  CapacityResult result;
};

std::vector<SolvedInstance> solve_fifty() {
  std::vector<SolvedInstance> out;
  for (int i = 0; i < 50; ++i) {
    int t = 2 + (i % 3);
    CanonicalChannel ch =
        random_instance(1000 + static_cast<std::uint64_t>(i), t,
                        InstanceKind::General);
    CapacityResult r = maximize_rate(ch);
    out.push_back({ch, r});
  }
  return out;
}

void criterion3(const std::vector<SolvedInstance>& solved) {
  bool ok = true;
  int converged = 0;
  for (const auto& s : solved) {
    if (!s.result.converged) continue;
    ++converged;
    const KktCertificate& c = s.result.certificate;
    ok = ok && c.stationarity_residual <= 1e-6 && c.comp_slack_1 <= 1e-6 &&
         c.comp_slack_2 <= 1e-6 && c.psd_margin >= -1e-8;
  }
  ok = ok && converged == 50;
  std::ostringstream d;
  d << converged << "/50 converged";
  report(3, "valid KKT certificates on 50 seeded instances", ok, d.str());
}

void criterion4(const std::vector<SolvedInstance>& solved) {
  bool ok = true;
  for (const auto& s : solved) {
    if (!s.result.converged) {
      ok = false;
      continue;
    }
    EnhancedChannel e =
        build_enhanced(s.result.Kx_star, s.result.certificate, s.ch);
    ok = ok && e.residuals.min_eig_Kr_gap >= -1e-8;
    ok = ok && e.residuals.min_eig_Ke_gap >= -1e-8;
    ok = ok && std::abs(e.residuals.logdet_gap) <= 1e-8;
  }
  report(4, "enhancement properties on the same 50 instances", ok);
}

void criterion5() {
  bool ok = true;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CanonicalChannel ch =
        random_instance(2000 + seed, 2 + static_cast<int>(seed % 2),
                        InstanceKind::Degraded);
    CapacityResult r = maximize_rate(ch);
    ok = ok && r.converged;
    if (!r.converged) continue;
    double direct = degraded_capacity(ch, r.Kx_star);
    worst = std::max(worst, std::abs(direct - r.value));
    ok = ok && std::abs(direct - r.value) <= 1e-5;
  }
  std::ostringstream d;
  d << "max deviation " << worst;
  report(5, "degraded formula matches the solver on 20 instances", ok, d.str());
}

void criterion6() {
  auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    int t = 1 + (i % 3);
    CanonicalChannel ch = random_instance(
        3000 + static_cast<std::uint64_t>(i), t, InstanceKind::General);
    CrosscheckReport r = crosscheck(ch);
    worst = std::max(worst, std::abs(r.gap));
    ok = ok && r.dominance && std::abs(r.gap) <= 1e-3;
  }
  double dt = seconds_since(t0);
  ok = ok && dt < 30.0;
  std::ostringstream d;
  d << "max |gap| " << worst << ", " << dt << " s";
  report(6, "Sato upper bound crosscheck on 10 instances", ok, d.str());
}

void criterion7() {
  bool ok = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CanonicalChannel ch = random_instance(
        4000 + seed, 2 + static_cast<int>(seed % 3), InstanceKind::Diagonal);
    ParallelResult p = parallel_capacity(ch);
    CapacityResult r = maximize_rate(ch);
    ok = ok && r.converged && std::abs(p.value - r.value) <= 1e-6;
    std::vector<int> expected;
    for (int i = 0; i < ch.dim(); ++i) {
      if (ch.Kr(i, i) < ch.Ke(i, i)) expected.push_back(i);
    }
    ok = ok && p.active_set == expected;
  }
  report(7, "parallel closed form matches the solver on 10 instances", ok);
}

void criterion8() {
  auto t0 = Clock::now();
  const long n = 200000;
  bool ok = true;
  std::ostringstream detail;

  std::vector<CanonicalChannel> channels{
      scalar_channel(1, 2, 1),
      random_instance(5000, 2, InstanceKind::Degraded)};

  int violations = 0;
  for (size_t c = 0; c < channels.size(); ++c) {
    const CanonicalChannel& ch = channels[c];
    CapacityResult r = maximize_rate(ch);
    ok = ok && r.converged;
    if (!r.converged) continue;

    std::vector<MixtureInput> inputs;
    // equality case first, then 25 random mixtures per channel (50 total)
    inputs.push_back(MixtureInput{
        {1.0}, {Eigen::VectorXd::Zero(ch.dim())}, r.Kx_star});
    for (int i = 0; i < 25; ++i) {
      inputs.push_back(random_mixture_input(
          6000 + 100 * static_cast<std::uint64_t>(c) + i, ch.S));
    }
    CheckReport eei = eei_check(ch, r.Kx_star, inputs, n, 97);
    for (const auto& e : eei.entries) {
      if (!e.pass) ++violations;
    }
    // equality case must sit on the boundary within noise
    ok = ok && std::abs(eei.entries[0].statistic) <= 3.0 * eei.entries[0].stderr_;

    MixtureInput probe = random_mixture_input(6500 + c, ch.S);
    CheckReport db = debruijn_check(probe, SymMatrix::Identity(ch.dim()),
                                    {0.5, 1.0, 2.0}, n, 101);
    MixtureInput gauss{
        {1.0},
        {Eigen::VectorXd::Zero(ch.dim())},
        SymMatrix(0.5 * Eigen::MatrixXd::Identity(ch.dim(), ch.dim()))};
    CheckReport fii = fii_check(probe, gauss,
                                0.5 * Eigen::MatrixXd::Identity(ch.dim(), ch.dim()),
                                n, 103);
    CheckReport cr = cramer_rao_check(probe, n, 107);
    CheckReport path = path_monotonicity_check(
        ch, r.Kx_star, probe, {0.0, 0.25, 0.5, 0.75, 1.0}, n, 109);
    ok = ok && db.all_pass && fii.all_pass && cr.all_pass && path.all_pass;
  }
  ok = ok && violations == 0;
  double dt = seconds_since(t0);
  ok = ok && dt < 300.0;
  detail << violations << " violations, " << dt << " s";
  report(8, "entropy inequality suite at n=200000", ok, detail.str());
}

void criterion9() {
  bool ok = true;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    CanonicalChannel ch = random_instance(
        7000 + static_cast<std::uint64_t>(trial), 3, InstanceKind::General);
    Eigen::MatrixXd g(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = nd(rng);
    SymMatrix kx = project_box(SymMatrix(0.4 * (g + g.transpose())), ch.S);
    SymMatrix grad = rate_gradient(kx, ch);
    const double h = 1e-5;
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(3, 3);
        e(i, j) = e(j, i) = 1.0;
        auto value = [&](double s) {
          SymMatrix m(kx.mat() + s * e);
          return 0.5 * (logdet_pd(m + ch.Kr) - logdet_pd(m + ch.Ke));
        };
        double fd = (value(h) - value(-h)) / (2 * h);
        double analytic = (i == j ? 1.0 : 2.0) * grad(i, j);
        worst = std::max(worst, std::abs(fd - analytic));
        ok = ok && std::abs(fd - analytic) <= 1e-6;
      }
    }
  }
  std::ostringstream d;
  d << "max deviation " << worst;
  report(9, "analytic gradient vs central differences", ok, d.str());
}

std::string run_cli(const std::string& args, const std::string& out_path) {
  std::string cmd = std::string(WIRETAP_CLI_PATH) + " " + args + " > " +
                    out_path + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  if (rc != 0) return "";
  std::ifstream in(out_path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion10() {
  bool ok = true;
  const std::string dir = "/tmp/wiretap_acceptance";
  std::system(("mkdir -p " + dir).c_str());
  const std::string ch_file = dir + "/ch.json";
  std::string gen_cmd = std::string(WIRETAP_CLI_PATH) + " gen general 2 " +
                        ch_file + " --seed 12345";
  ok = ok && std::system(gen_cmd.c_str()) == 0;

  const char* subcommands[] = {"capacity", "verify", "crosscheck",
                               "upperbound"};
  for (const char* sub : subcommands) {
    std::string args = std::string(sub) + " " + ch_file +
                       " --format json --seed 9";
    std::string a = run_cli(args, dir + "/a.json");
    std::string b = run_cli(args, dir + "/b.json");
    ok = ok && !a.empty() && a == b;
  }
  std::string eei_args =
      "eei " + ch_file + " --format json --seed 9 --samples 20000";
  // eei needs a degraded channel
  std::string deg_file = dir + "/deg.json";
  std::string gen_deg = std::string(WIRETAP_CLI_PATH) + " gen degraded 2 " +
                        deg_file + " --seed 77";
  ok = ok && std::system(gen_deg.c_str()) == 0;
  std::string eargs = "eei " + deg_file + " --format json --seed 9 --samples 20000";
  std::string ea = run_cli(eargs, dir + "/ea.json");
  std::string eb = run_cli(eargs, dir + "/eb.json");
  ok = ok && !ea.empty() && ea == eb;
  report(10, "byte-identical JSON reports across repeated runs", ok);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  std::vector<SolvedInstance> solved = solve_fifty();
  criterion3(solved);
  criterion4(solved);
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASS"
                                : "FAILURES: " + std::to_string(g_failures))
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
