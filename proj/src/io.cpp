#include "smearing/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace smearing {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Uniform:
      return "Uniform";
    case Verdict::Plwe:
      return "PLWE";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  throw std::logic_error("verdict_name: unknown verdict");
}

Verdict verdict_from_name(const std::string& name) {
  if (name == "Uniform") return Verdict::Uniform;
  if (name == "PLWE") return Verdict::Plwe;
  if (name == "Inconclusive") return Verdict::Inconclusive;
  throw std::invalid_argument("verdict_from_name: unknown verdict '" + name + "'");
}

nlohmann::json probdist_to_json(const ProbDist& dist) {
  return nlohmann::json(dist.probs());
}

ProbDist probdist_from_json(const nlohmann::json& j) {
  const nlohmann::json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("probs")) {
      throw std::invalid_argument("probdist_from_json: object has no 'probs' field");
    }
    arr = &j.at("probs");
  }
  if (!arr->is_array()) {
    throw std::invalid_argument("probdist_from_json: expected a JSON array of floats");
  }
  return ProbDist(arr->get<std::vector<double>>());
}

nlohmann::json attack_report_to_json(const AttackReport& report) {
  nlohmann::json j;
  j["verdict"] = verdict_name(report.verdict);
  j["per_guess_smear_counts"] = report.per_guess_smear_counts;
  if (report.recovered_s_gamma.has_value()) {
    j["recovered_s_gamma"] = *report.recovered_s_gamma;
  } else {
    j["recovered_s_gamma"] = nullptr;
  }
  j["params_used"] = {{"m", report.params_used.m},
                      {"n_trials", report.params_used.n_trials},
                      {"alpha_err", report.params_used.alpha_err},
                      {"beta_err", report.params_used.beta_err}};
  j["seed"] = report.seed;
  return j;
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("samples file, line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::vector<Sample> read_samples_csv(std::istream& in, const RingParams& params) {
  std::vector<Sample> out;
  std::string line;
  std::size_t line_no = 0;
  const std::size_t n = params.n;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    std::vector<Residue> values;
    values.reserve(2 * n);
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      std::size_t pos = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(field, &pos);
      } catch (const std::exception&) {
        parse_fail(line_no, "'" + field + "' is not a residue");
      }
      if (pos != field.size()) parse_fail(line_no, "'" + field + "' is not a residue");
      if (v >= params.q) {
        parse_fail(line_no, "residue " + std::to_string(v) + " out of range [0, q)");
      }
      values.push_back(v);
    }
    if (values.size() != 2 * n) {
      parse_fail(line_no, "expected " + std::to_string(2 * n) + " fields, got " +
                              std::to_string(values.size()));
    }
    Sample s;
    s.a.coeffs.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n));
    s.b.coeffs.assign(values.begin() + static_cast<std::ptrdiff_t>(n), values.end());
    out.push_back(std::move(s));
  }
  return out;
}

void write_samples_csv(std::ostream& out, std::span<const Sample> samples) {
  for (const Sample& s : samples) {
    bool first = true;
    for (const auto* poly : {&s.a, &s.b}) {
      for (Residue c : poly->coeffs) {
        if (!first) out << ',';
        out << c;
        first = false;
      }
    }
    out << '\n';
  }
}

}  // namespace smearing
