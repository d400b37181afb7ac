#pragma once

#include <cstdint>

namespace latboson::cli {

/// Runs the invariant suite, printing one PASS/FAIL line per invariant.
/// Returns the number of failures. quick shrinks sweep sizes to the
/// |Lambda| <= 3, N <= 3, ntau <= 8 scale.
int run_checks(bool quick, std::uint64_t seed, int workers);

}  // namespace latboson::cli
