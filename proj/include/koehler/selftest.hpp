#pragma once

#include <iosfwd>

namespace koehler {

// Run the ten end-to-end acceptance checks, printing one PASS/FAIL line per
// criterion; returns the number of failures.
int run_acceptance(std::ostream& out);

}  // namespace koehler
