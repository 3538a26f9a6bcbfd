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


#include "csv.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "config.h"

namespace afshar::cli {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw std::logic_error("format_double: buffer too small");
    }
    return std::string(buf, ptr);
}

CsvWriter::CsvWriter(std::initializer_list<std::string_view> header) : columns_(header.size()) {
    for (auto name : header) {
        cell(name);
    }
    end_row();
}

CsvWriter &CsvWriter::cell(std::string_view text) {
    if (text.find_first_of(",\n\"") != std::string_view::npos) {
        throw std::logic_error("CsvWriter: cell text needs quoting: " + std::string(text));
    }
    if (filled_ > 0) {
        text_ += ',';
    }
    text_ += text;
    ++filled_;
    return *this;
}

CsvWriter &CsvWriter::cell(double value) {
    return cell(std::string_view(format_double(value)));
}

CsvWriter &CsvWriter::cell(long long value) {
    return cell(std::string_view(std::to_string(value)));
}

void CsvWriter::end_row() {
    if (filled_ != columns_) {
        throw std::logic_error("CsvWriter: row has " + std::to_string(filled_) + " cells, expected " +
                               std::to_string(columns_));
    }
    text_ += '\n';
    filled_ = 0;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw ConfigError("CSV has no column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::string_view name) const {
    return parse_double(rows.at(row).at(column(name)), name);
}

CsvTable read_csv(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read '" + path.string() + "'");
    }
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (line.back() == ',') {
            cells.emplace_back();
        }
        if (first) {
            table.header = std::move(cells);
            first = false;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw ConfigError("'" + path.string() + "': row " + std::to_string(table.rows.size() + 1) +
                              " has the wrong number of cells");
        }
        table.rows.push_back(std::move(cells));
    }
    if (first) {
        throw ConfigError("'" + path.string() + "' is empty");
    }
    return table;
}

void OutputSet::add(std::string name, std::string contents) {
    files_[std::move(name)] = std::move(contents);
}

void OutputSet::commit(const std::filesystem::path &dir) const {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    for (const auto &[name, contents] : files_) {
        auto path = dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << contents;
        if (!out) {
            throw ConfigError("cannot write '" + path.string() + "'");
        }
    }
}

}  // namespace afshar::cli
