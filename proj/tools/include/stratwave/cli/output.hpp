#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace stratwave::cli {

// Comma-separated table with a header row and LF line endings. Numbers are
// written with 17 significant digits.
class Csv {
public:
    explicit Csv(std::vector<std::string> header);

    Csv& cell(double v);
    Csv& cell(long long v);
    Csv& cell(const std::string& v);
    Csv& empty();
    void end_row();

    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return rows_; }
    const std::string& text() const noexcept { return text_; }

private:
    std::vector<std::string> header_;
    std::string text_;
    std::size_t rows_ = 0;
    std::size_t column_ = 0;
    void separator();
};

std::string format_double(double v);

// SHA-1 of "blob <size>\0<content>", as git hashes file contents.
std::string git_blob_sha1(const std::string& content);

// Writes the CSV and a manifest next to it. The manifest records the command,
// library version, parameters, grid, seed, results and the CSV's blob hash.
struct RunRecord {
    std::string command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    nlohmann::ordered_json grid = nlohmann::ordered_json::object();
    nlohmann::ordered_json seed;  // null when the run is not seeded
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
};

void write_outputs(const Csv& csv, const RunRecord& record, const std::string& csv_path,
                   const std::string& manifest_path);

// "out.csv" -> "out.json"; other names get ".json" appended.
std::string default_manifest_path(const std::string& csv_path);

}  // namespace stratwave::cli
