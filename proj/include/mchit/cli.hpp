#pragma once

#include <iosfwd>

namespace mchit {

// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailedRecord = 1;  // a must-pass verification record failed
inline constexpr int kExitUsage = 2;         // bad arguments, unreadable or invalid input

/// Entry point of the `mchit` command. Output goes to --out when given,
/// otherwise to `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mchit
