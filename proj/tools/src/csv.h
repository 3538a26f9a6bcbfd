// Copyright 2026 The Afshar Simulator Authors
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


#ifndef AFSHAR_TOOLS_CSV_H
#define AFSHAR_TOOLS_CSV_H

#include <filesystem>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace afshar::cli {

/// Shortest text that parses back to the same double.
std::string format_double(double value);

class CsvWriter {
   public:
    explicit CsvWriter(std::initializer_list<std::string_view> header);

    CsvWriter &cell(std::string_view text);
    CsvWriter &cell(double value);
    CsvWriter &cell(long long value);
    CsvWriter &cell(std::size_t value) {
        return cell(static_cast<long long>(value));
    }
    CsvWriter &cell(int value) {
        return cell(static_cast<long long>(value));
    }
    /// Ends the current row; throws std::logic_error on a column-count mismatch.
    void end_row();

    const std::string &text() const {
        return text_;
    }

   private:
    std::string text_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index for `name`; throws ConfigError when absent.
    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
};

/// Reads a comma-separated file with a header row. Throws ConfigError.
CsvTable read_csv(const std::filesystem::path &path);

/// Files staged in memory and written together once every computation has
/// succeeded, so a failing command leaves nothing behind.
class OutputSet {
   public:
    void add(std::string name, std::string contents);
    void commit(const std::filesystem::path &dir) const;
    const std::map<std::string, std::string> &files() const {
        return files_;
    }

   private:
    std::map<std::string, std::string> files_;
};

}  // namespace afshar::cli

#endif  // AFSHAR_TOOLS_CSV_H
