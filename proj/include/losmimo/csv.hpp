// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "losmimo/harness.hpp"

namespace losmimo {

inline constexpr const char* kCsvHeader =
    "experiment,parameter,estimator,snr_db,n_antennas,p_pilots,mse,crb,mc_std_error,trials,seed";

// Header plus one LF-terminated row per record; reals use 10 significant digits.
std::string format_csv(const std::vector<MseRecord>& records);

// Writes format_csv(records) to `path`. Throws Error on I/O failure or when
// `records` is empty.
void emit_csv(const std::vector<MseRecord>& records, const std::string& path);

}  // namespace losmimo
