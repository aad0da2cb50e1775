#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mchit {

/// One certified inequality instance: lhs <= rhs, up to the record slack.
struct VerifyRecord {
  std::string claim;
  std::string chain;
  std::vector<std::pair<std::string, double>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = true;
  bool must_pass = true;
  std::string provenance;
};

VerifyRecord make_record(std::string claim, std::string chain,
                         std::vector<std::pair<std::string, double>> params, double lhs, double rhs,
                         std::string provenance, bool must_pass = true);

/// Canonical order: claim, chain, then parameter values.
void sort_records(std::vector<VerifyRecord>& records);

bool all_must_pass(const std::vector<VerifyRecord>& records);

}  // namespace mchit
