// Copyright 2026 The dpod Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPOD_CSV_HPP_
#define DPOD_CSV_HPP_

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dpod {

// Line-oriented comma splitting; the interchange formats here never quote
// fields. Tracks line numbers so parse errors can name them.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads the next line and splits it into fields. Returns false at EOF.
  // Views point into an internal buffer valid until the next call.
  bool next(std::vector<std::string_view>& fields);

  size_t line_number() const { return line_number_; }
  const std::string& raw_line() const { return line_; }

 private:
  std::istream& in_;
  std::string line_;
  size_t line_number_ = 0;
};

void split_csv(std::string_view line, std::vector<std::string_view>& out);

// Numeric field parsing that names the line on failure.
int64_t parse_i64_field(std::string_view s, size_t line, const char* what);
double parse_f64_field(std::string_view s, size_t line, const char* what);

// Writes to "<path>.tmp" and renames into place on commit, so readers
// never observe a partially written file. Abandoned writers remove the temp.
class AtomicFileWriter {
 public:
  explicit AtomicFileWriter(const std::string& path);
  ~AtomicFileWriter();

  std::ostream& stream() { return out_; }
  void commit();

 private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

// Minimal "key = value" config file: '#' starts a comment, blank lines
// ignored, keys unique.
std::map<std::string, std::string> parse_config(std::istream& in);
std::map<std::string, std::string> load_config(const std::string& path);

std::string config_get(const std::map<std::string, std::string>& cfg,
                       const std::string& key);
std::string config_get_or(const std::map<std::string, std::string>& cfg,
                          const std::string& key, const std::string& fallback);

std::vector<std::string> split_list(std::string_view s, char sep = ',');

}  // namespace dpod

#endif  // DPOD_CSV_HPP_
