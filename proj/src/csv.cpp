// SPDX-License-Identifier: Apache-2.0
#include "losmimo/csv.hpp"

#include <fstream>

#include <fmt/format.h>

#include "losmimo/errors.hpp"

namespace losmimo {

std::string format_csv(const std::vector<MseRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{:.10g},{},{},{:.10g},{:.10g},{:.10g},{},{}\n", r.experiment, to_string(r.parameter),
                       r.estimator, r.snr_db, r.n_antennas, r.p_pilots, r.mse, r.crb, r.mc_std_error, r.trials, r.seed);
  }
  return out;
}

void emit_csv(const std::vector<MseRecord>& records, const std::string& path) {
  if (records.empty()) throw Error("refusing to write an empty record set");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  const std::string text = format_csv(records);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw Error("failed writing '" + path + "'");
}

}  // namespace losmimo
