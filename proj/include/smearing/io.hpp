#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "smearing/attack.hpp"
#include "smearing/dist.hpp"
#include "smearing/ring.hpp"

namespace smearing {

std::string verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& name);

// ProbDist wire form: a JSON array of q floats.
nlohmann::json probdist_to_json(const ProbDist& dist);

// Accepts either the bare array or an object carrying it under "probs"
// (the shape emitted by the CLI, which wraps the array with its config).
ProbDist probdist_from_json(const nlohmann::json& j);

// Report fields: verdict, per_guess_smear_counts, recovered_s_gamma (null
// when absent), params_used, seed.
nlohmann::json attack_report_to_json(const AttackReport& report);

// Sample file: one sample per line, 2n comma-separated residues in [0, q)
// (the n coefficients of a, then the n coefficients of b). Blank lines and
// lines starting with '#' are skipped. Errors carry the 1-based line number.
std::vector<Sample> read_samples_csv(std::istream& in, const RingParams& params);
void write_samples_csv(std::ostream& out, std::span<const Sample> samples);

}  // namespace smearing
