// Copyright 2026 The nnmagic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace nnmagic {

/// One measured quantity at one separation r.
struct ScanRecord {
  std::string backend;
  std::size_t L = 0;
  std::optional<double> h;
  std::size_t r = 0;
  std::string axis;
  std::string measure_name;
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t n_samples = 1;
  std::uint64_t seed = 0;
  /// Not serialized; set when a value came from an ill-conditioned computation.
  bool precision_warning = false;

  // Circuit runs only.
  std::optional<double> p;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> n_traj;
  std::optional<std::size_t> n_failed;
};

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << (v == 0.0 ? 0.0 : v);
  return os.str();
}

/// CSV with a header row. circuit_columns appends p, depth, n_traj, n_failed.
inline void write_scan_csv(std::ostream& os, const std::vector<ScanRecord>& records, bool circuit_columns = false) {
  os << "backend,L,h,r,axis,measure_name,value,stderr,n_samples,seed";
  if (circuit_columns) os << ",p,depth,n_traj,n_failed";
  os << '\n';
  auto opt_num = [](const auto& o) -> std::string {
    if (!o) return "";
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(*o)>>)
      return format_number(*o);
    else
      return std::to_string(*o);
  };
  for (const auto& rec : records) {
    os << rec.backend << ',' << rec.L << ',' << opt_num(rec.h) << ',' << rec.r << ',' << rec.axis << ',' << rec.measure_name << ','
       << format_number(rec.value) << ',' << format_number(rec.stderr_) << ',' << rec.n_samples << ',' << rec.seed;
    if (circuit_columns)
      os << ',' << opt_num(rec.p) << ',' << opt_num(rec.depth) << ',' << opt_num(rec.n_traj) << ',' << opt_num(rec.n_failed);
    os << '\n';
  }
}

/// Records of one measure, in input order.
inline std::vector<ScanRecord> select_measure(const std::vector<ScanRecord>& records, const std::string& name) {
  std::vector<ScanRecord> out;
  for (const auto& r : records)
    if (r.measure_name == name) out.push_back(r);
  return out;
}

}  // namespace nnmagic
