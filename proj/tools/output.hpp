#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace rydsim {

inline constexpr const char* kArtifactVersion = "1.0.0";

// Shortest round-trip representation, '.' separator, "nan"/"inf" for specials.
std::string format_number(double v);

using Cell = std::variant<double, std::string>;

struct CsvTable {
    std::vector<std::string> comments;  // emitted as "# ..." lines
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
    std::string str() const;
};

// Columns become arrays keyed by header; non-finite numbers become null.
nlohmann::json table_to_json(const CsvTable& table);

std::string dump_json(const nlohmann::json& j);

std::string sha256_hex(const std::string& data);

struct OutputFile {
    std::string name;
    std::string content;
};

// Writes files into dir plus manifest.json; returns the manifest.
nlohmann::json write_outputs(const std::string& dir, const std::string& subcommand,
                             const nlohmann::json& parameters, unsigned long long seed,
                             const std::vector<OutputFile>& files);

}  // namespace rydsim
