#include "output.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace rydsim {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string quote_field(const std::string& f) {
    if (f.find_first_of(",\"\n") == std::string::npos) return f;
    std::string q = "\"";
    for (char c : f) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

}  // namespace

std::string CsvTable::str() const {
    std::string s;
    for (const auto& c : comments) s += "# " + c + "\n";
    for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ",";
            if (const auto* d = std::get_if<double>(&row[i]))
                s += format_number(*d);
            else
                s += quote_field(std::get<std::string>(row[i]));
        }
        s += "\n";
    }
    return s;
}

nlohmann::json table_to_json(const CsvTable& table) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        auto col = nlohmann::json::array();
        for (const auto& row : table.rows) {
            if (c >= row.size()) {
                col.push_back(nullptr);
            } else if (const auto* d = std::get_if<double>(&row[c])) {
                if (std::isfinite(*d))
                    col.push_back(*d);
                else
                    col.push_back(nullptr);
            } else {
                col.push_back(std::get<std::string>(row[c]));
            }
        }
        j[table.header[c]] = std::move(col);
    }
    if (!table.comments.empty()) j["comments"] = table.comments;
    return j;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

nlohmann::json write_outputs(const std::string& dir, const std::string& subcommand,
                             const nlohmann::json& parameters, unsigned long long seed,
                             const std::vector<OutputFile>& files) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["subcommand"] = subcommand;
    manifest["parameters"] = parameters;
    manifest["seed"] = seed;
    manifest["version"] = kArtifactVersion;
    manifest["timestamp"] = utc_timestamp();
    auto digests = nlohmann::json::array();
    for (const auto& f : files) {
        const fs::path p = fs::path(dir) / f.name;
        std::ofstream os(p, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + p.string());
        os << f.content;
        digests.push_back({{"file", f.name}, {"sha256", sha256_hex(f.content)}});
    }
    manifest["outputs"] = digests;
    std::ofstream ms(fs::path(dir) / "manifest.json", std::ios::binary);
    if (!ms) throw std::runtime_error("cannot write manifest in " + dir);
    ms << dump_json(manifest);
    return manifest;
}

}  // namespace rydsim
