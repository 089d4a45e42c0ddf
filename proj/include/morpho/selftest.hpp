#pragma once

#include <cstdint>
#include <iosfwd>

namespace morpho {

// Randomized invariant sweep across all modules; prints one line per check
// and returns false on any violation.
bool selftest(std::uint64_t seed, std::ostream& os);

}  // namespace morpho
