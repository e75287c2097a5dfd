// Command-line front end for the smearing engines: exact/approximate/
// empirical coverage probabilities, mapped error distributions, parameter
// selection, and the end-to-end distinguishing attack.
//
// Artifacts are CSV (default) or JSON (--json); every artifact embeds the
// fully resolved configuration, seed included, so a run can be reproduced
// exactly. Exit codes: 0 success or confident verdict, 1 usage/config error,
// 2 inconclusive attack verdict.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smearing/attack.hpp"
#include "smearing/dist.hpp"
#include "smearing/io.hpp"
#include "smearing/ring.hpp"
#include "smearing/rng.hpp"
#include "smearing/smear.hpp"

namespace {

using nlohmann::json;
using namespace smearing;

constexpr std::uint64_t kDefaultSeed = 1;

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + out_path + "'");
  f << content;
}

std::vector<Residue> parse_residues(const std::string& csv) {
  std::vector<Residue> out;
  std::stringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) {
    std::size_t pos = 0;
    out.push_back(std::stoull(field, &pos));
    if (pos != field.size()) {
      throw std::invalid_argument("'" + field + "' is not a residue");
    }
  }
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  json j;
  f >> j;
  return j;
}

// Shared ring/Gaussian option bundle for commands that need an instance.
struct InstanceOpts {
  std::uint64_t q = 0;
  std::uint64_t n = 0;
  std::int64_t gamma = -1;
  std::string f_csv;
  bool xn1 = false;
  double sigma = 0.0;
  double beta = 0.0;

  void add_ring_flags(CLI::App* cmd) {
    cmd->add_option("--q", q, "modulus q (prime)")->required();
    cmd->add_option("--n", n, "degree n of f")->required();
    cmd->add_option("--gamma", gamma, "evaluation point, a root of f mod q")->required();
    cmd->add_option("--f", f_csv, "f coefficients, ascending, comma-separated (n+1 values)");
    cmd->add_flag("--xn1", xn1, "use f(x) = x^n + 1");
  }

  void add_gaussian_flags(CLI::App* cmd) {
    cmd->add_option("--sigma", sigma, "Gaussian width sigma");
    cmd->add_option("--beta", beta, "relative Gaussian width; sigma = beta/sqrt(2*pi)*q");
  }

  bool has_gaussian() const { return sigma > 0.0 || beta > 0.0; }

  GaussianParams gaussian() const {
    if (sigma > 0.0 && beta > 0.0) {
      throw std::invalid_argument("give exactly one of --sigma and --beta");
    }
    if (sigma > 0.0) return GaussianParams::from_sigma(sigma);
    if (beta > 0.0) return GaussianParams::from_beta(beta);
    throw std::invalid_argument("one of --sigma or --beta is required here");
  }

  // Builds f, checking gamma against the roots when f was given explicitly.
  // Without --f/--xn1 the instance polynomial defaults to x^{n-1} * (x - gamma).
  RingParams ring() const {
    if (gamma < 0 || static_cast<std::uint64_t>(gamma) >= q) {
      throw std::invalid_argument("--gamma must lie in [0, q)");
    }
    const Residue g = static_cast<Residue>(gamma);
    std::vector<Residue> f;
    if (!f_csv.empty() && xn1) throw std::invalid_argument("give at most one of --f and --xn1");
    if (!f_csv.empty()) {
      f = parse_residues(f_csv);
    } else if (xn1) {
      f.assign(n + 1, 0);
      f[0] = 1;
      f[n] = 1;
    } else {
      f.assign(n + 1, 0);
      f[n] = 1;
      f[n - 1] = (q - g) % q;
    }
    if (!f_csv.empty() || xn1) {
      const auto roots = find_roots(f, q);
      if (std::find(roots.begin(), roots.end(), g) == roots.end()) {
        std::string msg = "gamma=" + std::to_string(g) + " is not a root of f mod q; roots: [";
        for (std::size_t i = 0; i < roots.size(); ++i) {
          if (i) msg += ", ";
          msg += std::to_string(roots[i]);
        }
        msg += "]";
        throw std::invalid_argument(msg);
      }
    }
    return RingParams(q, n, std::move(f), g);
  }

  json config_json() const {
    json j;
    j["q"] = q;
    j["n"] = n;
    j["gamma"] = gamma;
    if (sigma > 0.0) j["sigma"] = sigma;
    if (beta > 0.0) j["beta"] = beta;
    return j;
  }
};

std::size_t default_m_cap(std::uint64_t q) {
  const double qd = static_cast<double>(q);
  const double cap = qd * (std::log(qd > 1 ? qd : 2.0) + 8.0);
  return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(cap)));
}

// --------------------------------------------------------------------------
// prob: uniform coverage-probability curves, optional approximation, Monte
// Carlo, and exact non-uniform columns.

int run_prob(std::uint64_t q, std::uint64_t q_min, std::size_t m_max, bool approx,
             std::size_t mc_trials, const std::string& chi_path, std::uint64_t seed,
             bool as_json, const std::string& out_path) {
  if (q < 1 || q_min < 1 || q_min > q) throw std::invalid_argument("need 1 <= q-min <= q");
  if (m_max < 1) throw std::invalid_argument("--m-max must be >= 1");

  std::optional<ProbDist> chi;
  if (!chi_path.empty()) {
    chi = probdist_from_json(load_json_file(chi_path));
    if (chi->q() != q || q_min != q) {
      throw std::invalid_argument("--chi requires a single-q grid with q = chi dimension (" +
                                  std::to_string(chi->q()) + ")");
    }
  }

  json config{{"command", "prob"}, {"q", q},       {"q_min", q_min},
              {"m_max", m_max},    {"approx", approx}, {"mc_trials", mc_trials},
              {"seed", seed}};
  config["chi_file"] = chi_path.empty() ? json(nullptr) : json(chi_path);

  std::vector<std::string> columns{"m", "q", "p_exact"};
  if (approx) columns.push_back("p_approx");
  if (mc_trials > 0) columns.push_back("p_mc");
  if (chi) columns.push_back("p_chi");

  json rows = json::array();
  std::ostringstream csv;
  csv << "# config: " << config.dump() << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) csv << (i ? "," : "") << columns[i];
  csv << "\n";

  for (std::uint64_t qq = q_min; qq <= q; ++qq) {
    const SmearTable table = uniform_smear_table(qq, m_max);
    SmearTable chi_table;
    if (chi) chi_table = nonuniform_smear_table(*chi, m_max);
    for (std::size_t m = 1; m <= m_max; ++m) {
      json row = json::array({m, qq, table.values[m]});
      csv << m << ',' << qq << ',' << fmt_double(table.values[m]);
      if (approx) {
        const double a = er_approx(m, qq);
        row.push_back(a);
        csv << ',' << fmt_double(a);
      }
      if (mc_trials > 0) {
        const double est =
            mc_smear_estimate(ProbDist::uniform(qq), m, mc_trials, derive_seed(seed, qq, m));
        row.push_back(est);
        csv << ',' << fmt_double(est);
      }
      if (chi) {
        row.push_back(chi_table.values[m]);
        csv << ',' << fmt_double(chi_table.values[m]);
      }
      csv << '\n';
      rows.push_back(std::move(row));
    }
  }

  if (as_json) {
    json artifact{{"config", config}, {"columns", columns}, {"rows", rows}};
    emit(out_path, artifact.dump(2) + "\n");
  } else {
    emit(out_path, csv.str());
  }
  return 0;
}

// --------------------------------------------------------------------------
// mapdist: the distribution of e(gamma) for coefficient-wise errors.

int run_mapdist(InstanceOpts& inst, bool uniform_base, std::size_t mc_trials,
                std::uint64_t seed, bool as_json, const std::string& out_path) {
  const RingParams params = inst.ring();
  ProbDist base = uniform_base ? ProbDist::uniform(params.q)
                               : discrete_gaussian_zq(params.q, inst.gaussian());
  const ProbDist chi = mapped_error_dist(base, params);

  json config = inst.config_json();
  config["command"] = "mapdist";
  config["f_coeffs"] = params.f_coeffs;
  config["uniform_base"] = uniform_base;
  config["mc_trials"] = mc_trials;
  config["seed"] = seed;

  std::vector<double> mc_freq;
  if (mc_trials > 0) {
    const CdfSampler sampler(base);
    Rng rng(seed);
    std::vector<std::uint64_t> hist(params.q, 0);
    PolyModF e = PolyModF::zero(params.n);
    for (std::size_t t = 0; t < mc_trials; ++t) {
      for (auto& c : e.coeffs) c = sampler.draw(rng);
      ++hist[smear_map(e, params)];
    }
    mc_freq.resize(params.q);
    for (std::uint64_t k = 0; k < params.q; ++k) {
      mc_freq[k] = static_cast<double>(hist[k]) / static_cast<double>(mc_trials);
    }
  }

  if (as_json) {
    json artifact{{"config", config}, {"probs", probdist_to_json(chi)}};
    if (!mc_freq.empty()) artifact["mc_histogram"] = mc_freq;
    emit(out_path, artifact.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "# config: " << config.dump() << "\n";
    csv << (mc_freq.empty() ? "k,prob" : "k,prob,mc_freq") << "\n";
    for (std::uint64_t k = 0; k < params.q; ++k) {
      csv << k << ',' << fmt_double(chi[k]);
      if (!mc_freq.empty()) csv << ',' << fmt_double(mc_freq[k]);
      csv << '\n';
    }
    emit(out_path, csv.str());
  }
  return 0;
}

// --------------------------------------------------------------------------
// params: pick (m, N) for the smearing decision and report the predicted
// operating point.

int run_params(std::uint64_t q, InstanceOpts& inst, const std::string& chi_path, double p_u_in,
               double p_chi_in, double alpha, double beta_err, std::size_t m_cap, bool widest,
               bool as_json, const std::string& out_path) {
  json config{{"command", "params"}, {"q", q},           {"alpha", alpha},
              {"beta_err", beta_err}, {"m_cap", m_cap},   {"widest", widest}};

  std::optional<std::size_t> m;
  double p_u = p_u_in, p_chi = p_chi_in;

  if (p_u_in > 0.0 || p_chi_in > 0.0) {
    if (!(p_u_in > 0.0 && p_chi_in > 0.0)) {
      throw std::invalid_argument("--p-u and --p-chi must be given together");
    }
    config["p_u_in"] = p_u_in;
    config["p_chi_in"] = p_chi_in;
  } else {
    ProbDist chi = [&] {
      if (!chi_path.empty()) return probdist_from_json(load_json_file(chi_path));
      inst.q = q;
      return mapped_error_dist(discrete_gaussian_zq(q, inst.gaussian()), inst.ring());
    }();
    if (chi.q() != q) throw std::invalid_argument("chi dimension does not match --q");
    config["chi_file"] = chi_path.empty() ? json(nullptr) : json(chi_path);
    if (chi_path.empty()) {
      const json inst_cfg = inst.config_json();
      for (const auto& [k, v] : inst_cfg.items()) config[k] = v;
    }
    m = widest ? choose_m_widest_gap(q, chi, m_cap) : choose_m(q, chi, m_cap);
    p_u = p_uniform(*m, q);
    p_chi = p_nonuniform(*m, chi);
  }

  const std::uint64_t n_trials = choose_trials(p_u, p_chi, alpha, beta_err);
  const SuccessProbs sp = success_probs(alpha, beta_err, q);

  if (as_json) {
    json artifact{{"config", config},
                  {"m", m ? json(*m) : json(nullptr)},
                  {"n_trials", n_trials},
                  {"p_u", p_u},
                  {"p_chi", p_chi},
                  {"success_given_uniform", sp.given_uniform},
                  {"success_given_plwe", sp.given_plwe}};
    emit(out_path, artifact.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "# config: " << config.dump() << "\n";
    csv << "m,n_trials,p_u,p_chi,success_given_uniform,success_given_plwe\n";
    csv << (m ? std::to_string(*m) : "") << ',' << n_trials << ',' << fmt_double(p_u) << ','
        << fmt_double(p_chi) << ',' << fmt_double(sp.given_uniform) << ','
        << fmt_double(sp.given_plwe) << '\n';
    emit(out_path, csv.str());
  }
  return 0;
}

// --------------------------------------------------------------------------
// attack: run the full per-guess distinguishing attack.

int run_attack(const std::string& mode, InstanceOpts& inst, const std::string& secret_csv,
               std::size_t m, std::uint64_t trials, bool auto_params, double alpha,
               double beta_err, std::size_t m_cap, const std::string& samples_path,
               std::uint64_t seed, const std::string& out_path) {
  const RingParams params = inst.ring();

  json config = inst.config_json();
  config["command"] = "attack";
  config["mode"] = mode;
  config["f_coeffs"] = params.f_coeffs;
  config["alpha"] = alpha;
  config["beta_err"] = beta_err;
  config["seed"] = seed;

  if (auto_params) {
    const ProbDist chi = mapped_error_dist(discrete_gaussian_zq(params.q, inst.gaussian()), params);
    m = choose_m_widest_gap(params.q, chi, m_cap);
    trials = choose_trials(p_uniform(m, params.q), p_nonuniform(m, chi), alpha, beta_err);
    config["m_cap"] = m_cap;
  } else if (m == 0 || trials == 0) {
    throw std::invalid_argument("give --m and --trials, or --auto-params");
  }
  config["m"] = m;
  config["n_trials"] = trials;

  const DecisionParams dp(m, trials, alpha, beta_err);

  std::unique_ptr<SampleSource> source;
  if (mode == "plwe") {
    PlweInstance instance = [&] {
      if (secret_csv.empty()) {
        return PlweInstance::with_random_secret(params, inst.gaussian(),
                                                derive_seed(seed, ~std::uint64_t{0}));
      }
      return PlweInstance(params, PolyModF(parse_residues(secret_csv)), inst.gaussian());
    }();
    config["secret"] = instance.secret.coeffs;
    source = std::make_unique<PlweSampleSource>(std::move(instance));
  } else if (mode == "uniform") {
    source = std::make_unique<UniformSampleSource>(params);
  } else if (mode == "file") {
    if (samples_path.empty()) throw std::invalid_argument("--mode file requires --samples");
    std::ifstream f(samples_path);
    if (!f) throw std::runtime_error("cannot open '" + samples_path + "'");
    config["samples_file"] = samples_path;
    source = std::make_unique<FixedSampleSource>(read_samples_csv(f, params));
  } else {
    throw std::invalid_argument("--mode must be plwe, uniform, or file");
  }

  const AttackReport report = smearing_attack(*source, params, dp, seed);

  json artifact = attack_report_to_json(report);
  artifact["config"] = config;
  emit(out_path, artifact.dump(2) + "\n");
  return report.verdict == Verdict::Inconclusive ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smearing probabilities and the smearing distinguisher for PLWE-style samples"};
  app.require_subcommand(1);

  // prob
  auto* prob = app.add_subcommand("prob", "coverage probability curves P(m, q)");
  std::uint64_t prob_q = 0, prob_q_min = 0, prob_seed = kDefaultSeed;
  std::size_t prob_m_max = 0, prob_mc = 0;
  bool prob_approx = false, prob_json = false;
  std::string prob_chi, prob_out;
  prob->add_option("--q", prob_q, "largest q in the grid")->required();
  prob->add_option("--m-max", prob_m_max, "largest m")->required();
  prob->add_option("--q-min", prob_q_min, "smallest q in the grid (default: --q)");
  prob->add_flag("--approx", prob_approx, "add the exp(-q*exp(-m/q)) approximation column");
  prob->add_option("--mc", prob_mc, "add a Monte Carlo column with this many trials per row");
  prob->add_option("--chi", prob_chi, "JSON distribution file; adds exact non-uniform column");
  prob->add_option("--seed", prob_seed, "RNG seed for the Monte Carlo column");
  prob->add_flag("--json", prob_json, "emit JSON instead of CSV");
  prob->add_option("--out", prob_out, "output path (default: stdout)");

  // mapdist
  auto* mapdist = app.add_subcommand("mapdist", "mapped error distribution of e(gamma)");
  InstanceOpts md_inst;
  md_inst.add_ring_flags(mapdist);
  md_inst.add_gaussian_flags(mapdist);
  bool md_uniform = false, md_json = false;
  std::size_t md_mc = 0;
  std::uint64_t md_seed = kDefaultSeed;
  std::string md_out;
  mapdist->add_flag("--uniform-base", md_uniform, "use a uniform base distribution");
  mapdist->add_option("--mc-validate", md_mc, "Monte Carlo histogram with this many draws");
  mapdist->add_option("--seed", md_seed, "RNG seed for --mc-validate");
  mapdist->add_flag("--json", md_json, "emit JSON instead of CSV");
  mapdist->add_option("--out", md_out, "output path (default: stdout)");

  // params
  auto* pars = app.add_subcommand("params", "choose (m, N) and predict attack success");
  InstanceOpts pr_inst;
  std::uint64_t pr_q = 0;
  pars->add_option("--q", pr_q, "modulus q")->required();
  pars->add_option("--n", pr_inst.n, "degree n of f (for --sigma/--beta mode)");
  pars->add_option("--gamma", pr_inst.gamma, "root of f mod q (for --sigma/--beta mode)");
  pars->add_option("--f", pr_inst.f_csv, "f coefficients, ascending, comma-separated");
  pars->add_flag("--xn1", pr_inst.xn1, "use f(x) = x^n + 1");
  pr_inst.add_gaussian_flags(pars);
  std::string pr_chi, pr_out;
  double pr_pu = 0.0, pr_pchi = 0.0, pr_alpha = 0.05, pr_beta = 0.05;
  std::size_t pr_mcap = 0;
  bool pr_widest = false, pr_json = false;
  pars->add_option("--chi", pr_chi, "JSON distribution file for the non-uniform side");
  pars->add_option("--p-u", pr_pu, "skip m selection: uniform smearing probability");
  pars->add_option("--p-chi", pr_pchi, "skip m selection: non-uniform smearing probability");
  pars->add_option("--alpha", pr_alpha, "target type-1 error of the decision");
  pars->add_option("--beta-err", pr_beta, "target type-2 error of the decision");
  pars->add_option("--m-cap", pr_mcap, "search bound for m");
  pars->add_flag("--widest", pr_widest, "pick the m with the widest P_U - P_chi gap");
  pars->add_flag("--json", pr_json, "emit JSON instead of CSV");
  pars->add_option("--out", pr_out, "output path (default: stdout)");

  // attack
  auto* att = app.add_subcommand("attack", "run the smearing attack and emit a JSON report");
  InstanceOpts at_inst;
  at_inst.add_ring_flags(att);
  at_inst.add_gaussian_flags(att);
  std::string at_mode, at_secret, at_samples, at_out;
  std::size_t at_m = 0, at_mcap = 0;
  std::uint64_t at_trials = 0, at_seed = kDefaultSeed;
  bool at_auto = false;
  double at_alpha = 0.05, at_beta = 0.05;
  att->add_option("--mode", at_mode, "plwe | uniform | file")->required();
  att->add_option("--secret", at_secret, "secret coefficients (plwe mode; default: seeded random)");
  att->add_option("--m", at_m, "samples per trial");
  att->add_option("--trials", at_trials, "trials per guess (odd)");
  att->add_flag("--auto-params", at_auto, "derive (m, N) from the mapped error distribution");
  att->add_option("--alpha", at_alpha, "target type-1 error per decision");
  att->add_option("--beta-err", at_beta, "target type-2 error per decision");
  att->add_option("--m-cap", at_mcap, "search bound for m (auto-params)");
  att->add_option("--samples", at_samples, "sample file (file mode)");
  att->add_option("--seed", at_seed, "base RNG seed");
  att->add_option("--out", at_out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(prob)) {
      if (prob_q_min == 0) prob_q_min = prob_q;
      return run_prob(prob_q, prob_q_min, prob_m_max, prob_approx, prob_mc, prob_chi, prob_seed,
                      prob_json, prob_out);
    }
    if (app.got_subcommand(mapdist)) {
      return run_mapdist(md_inst, md_uniform, md_mc, md_seed, md_json, md_out);
    }
    if (app.got_subcommand(pars)) {
      if (pr_mcap == 0) pr_mcap = default_m_cap(pr_q);
      return run_params(pr_q, pr_inst, pr_chi, pr_pu, pr_pchi, pr_alpha, pr_beta, pr_mcap,
                        pr_widest, pr_json, pr_out);
    }
    if (app.got_subcommand(att)) {
      if (at_mcap == 0) at_mcap = default_m_cap(at_inst.q);
      return run_attack(at_mode, at_inst, at_secret, at_m, at_trials, at_auto, at_alpha, at_beta,
                        at_mcap, at_samples, at_seed, at_out);
    }
  } catch (const NoSeparatingSampleCount& e) {
    std::cerr << "error: " << e.what()
              << " (the distribution may be too close to uniform; raise --m-cap or change "
                 "parameters)\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
