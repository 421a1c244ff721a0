#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chana/config.hpp"

namespace chana {

// Process exit classes shared by the dispatcher and the executable.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitCertificate = 4;

struct DispatchOptions {
    std::string out_dir = "out";
    int range = 60;      // exponent-certificate sweep range
    int max_order = 0;   // 0 = take N_max from the config
};

/// Runs one subcommand of {solve, picard, verify-combinatorics,
/// check-pressure, check-product, check-apriori, report}, writes its CSV
/// artifacts plus a manifest into out_dir, and returns an exit class.
/// Progress and diagnostics go to log.
int dispatch(const std::string& subcommand, const RunConfig& cfg,
             const DispatchOptions& opts, std::ostream& log);

}  // namespace chana
