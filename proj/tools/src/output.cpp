#include "stratwave/cli/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "stratwave/version.hpp"

namespace stratwave::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) text_ += ',';
        text_ += header_[i];
    }
    text_ += '\n';
}

void Csv::separator() {
    if (column_ >= header_.size()) throw std::logic_error("CSV row has more cells than columns");
    if (column_++) text_ += ',';
}

Csv& Csv::cell(double v) {
    separator();
    text_ += format_double(v);
    return *this;
}

Csv& Csv::cell(long long v) {
    separator();
    text_ += std::to_string(v);
    return *this;
}

Csv& Csv::cell(const std::string& v) {
    separator();
    text_ += v;
    return *this;
}

Csv& Csv::empty() {
    separator();
    return *this;
}

void Csv::end_row() {
    if (column_ != header_.size()) throw std::logic_error("CSV row has fewer cells than columns");
    text_ += '\n';
    column_ = 0;
    ++rows_;
}

std::string git_blob_sha1(const std::string& content) {
    const std::string data = "blob " + std::to_string(content.size()) + '\0' + content;
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha1(), nullptr) != 1)
        throw std::runtime_error("SHA-1 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

std::string default_manifest_path(const std::string& csv_path) {
    const std::string ext = ".csv";
    if (csv_path.size() > ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0)
        return csv_path.substr(0, csv_path.size() - ext.size()) + ".json";
    return csv_path + ".json";
}

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void write_outputs(const Csv& csv, const RunRecord& r, const std::string& csv_path,
                   const std::string& manifest_path) {
    nlohmann::ordered_json m;
    m["tool"] = "stratwave";
    m["version"] = kVersion;
    m["command"] = r.command;
    m["params"] = r.params;
    m["grid"] = r.grid;
    m["seed"] = r.seed;
    m["results"] = r.results;
    nlohmann::ordered_json out;
    out["path"] = csv_path;
    out["columns"] = csv.header();
    out["rows"] = csv.rows();
    out["sha1"] = git_blob_sha1(csv.text());
    m["output"] = out;
    write_file(csv_path, csv.text());
    write_file(manifest_path, m.dump(2) + "\n");
}

}  // namespace stratwave::cli
