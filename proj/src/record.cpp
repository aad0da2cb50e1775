#include "mchit/record.hpp"

#include <algorithm>
#include <tuple>

#include "mchit/config.hpp"

namespace mchit {

VerifyRecord make_record(std::string claim, std::string chain,
                         std::vector<std::pair<std::string, double>> params, double lhs, double rhs,
                         std::string provenance, bool must_pass) {
  VerifyRecord r;
  r.claim = std::move(claim);
  r.chain = std::move(chain);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.pass = r.slack >= -tolerances().record_slack;
  r.must_pass = must_pass;
  r.provenance = std::move(provenance);
  return r;
}

void sort_records(std::vector<VerifyRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const VerifyRecord& a, const VerifyRecord& b) {
    return std::tie(a.claim, a.chain, a.params) < std::tie(b.claim, b.chain, b.params);
  });
}

bool all_must_pass(const std::vector<VerifyRecord>& records) {
  return std::all_of(records.begin(), records.end(),
                     [](const VerifyRecord& r) { return r.pass || !r.must_pass; });
}

}  // namespace mchit
