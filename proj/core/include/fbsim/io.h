// Copyright 2026 The fbsim Authors
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

// Deterministic text output. Numbers are written in shortest round-trip
// form so identical runs give byte-identical files.

#ifndef FBSIM_IO_H_
#define FBSIM_IO_H_

#include <cstdint>
#include <string>
#include <vector>

namespace fbsim::io {

std::string cell(double v);
std::string cell(std::int64_t v);
inline std::string cell(int v) { return cell(static_cast<std::int64_t>(v)); }

// "# config: <json>" line, then the header, then rows.
class CsvTable {
 public:
  CsvTable(std::vector<std::string> columns, std::string config_json);

  void add_row(std::vector<std::string> cells);
  std::size_t n_rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::string config_;
  std::vector<std::vector<std::string>> rows_;
};

// Throws ConfigError naming the path when it cannot be written or read.
void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace fbsim::io

#endif  // FBSIM_IO_H_
