#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mchit/chain.hpp"
#include "mchit/hitting.hpp"
#include "mchit/mixing.hpp"
#include "mchit/monte_carlo.hpp"
#include "mchit/record.hpp"
#include "mchit/stopping_rule.hpp"
#include "mchit/verify.hpp"

namespace mchit {

using Json = nlohmann::ordered_json;

// Chain files: {"mode": "continuous"|"discrete", "labels": [...], "matrix": [[...], ...]}.
// Parse failures raise ParseError.
ChainSpec chain_spec_from_json(const Json& j);
Json chain_to_json(const MarkovChain& chain);

/// Reads and validates a chain file; the chain is named after the file stem.
MarkovChain read_chain(const std::filesystem::path& path);

/// A distribution file is a bare array of n weights or {"weights": [...]}.
/// Weights are normalized by their sum.
Distribution distribution_from_json(const Json& j, std::size_t n);

Json rule_to_json(const MarkovChain& chain, const StoppingRule& rule);
/// Throws ChainMismatch if the stored fingerprint differs from `chain`'s.
StoppingRule rule_from_json(const MarkovChain& chain, const Json& j);

Json report_to_json(const MarkovChain& chain, const HittingReport& report);
Json profile_to_json(const MixingProfile& profile);
Json simulation_to_json(const MarkovChain& chain, const StoppingRule& rule, const RuleSimulation& sim);
Json records_to_json(const std::vector<VerifyRecord>& records);
Json constants_to_json(const std::vector<ConstantsRow>& rows);

/// One header line, then one line per record. Parameters are rendered as
/// name=value pairs joined by ';'.
void write_records_csv(std::ostream& out, const std::vector<VerifyRecord>& records);

Json read_json(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace mchit
