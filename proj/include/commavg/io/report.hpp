#ifndef COMMAVG_IO_REPORT_HPP
#define COMMAVG_IO_REPORT_HPP

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "../errors.hpp"

namespace commavg::io {

using json = nlohmann::json;

/// Lowercase hex SHA-256 of `data`.
inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error("sha256: cannot allocate digest context");
  bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
            EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 && EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("sha256: digest failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

/// A named table; each row holds one JSON scalar per column.
struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

/**
 * Output of one CLI command. Everything except `timings` is a function of the
 * inputs and the seed.
 */
struct RunReport {
  std::string command;
  std::string inputs_digest;
  std::optional<std::uint64_t> seed;
  json parameters = json::object();
  std::vector<ReportTable> tables;
  json limits = json::object();
  json bounds = json::array();
  json summary = json::object();
  std::vector<std::pair<std::string, double>> timings;

  ReportTable& table(const std::string& name, std::vector<std::string> columns) {
    tables.push_back({name, std::move(columns), {}});
    return tables.back();
  }

  json to_json(bool with_timings = true) const {
    json j;
    j["command"] = command;
    j["inputs_digest"] = inputs_digest;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["parameters"] = parameters;
    json tabs = json::object();
    for (const auto& t : tables) {
      json rows = json::array();
      for (const auto& r : t.rows) {
        json row = json::object();
        for (std::size_t c = 0; c < t.columns.size() && c < r.size(); ++c) row[t.columns[c]] = r[c];
        rows.push_back(std::move(row));
      }
      tabs[t.name] = std::move(rows);
    }
    j["tables"] = std::move(tabs);
    j["limits"] = limits;
    j["bounds"] = bounds;
    j["summary"] = summary;
    if (with_timings) {
      json tj = json::object();
      for (const auto& [k, v] : timings) tj[k] = v;
      j["timings"] = std::move(tj);
    }
    return j;
  }

  /// Tables as CSV blocks separated by blank lines, each preceded by "# name".
  std::string to_csv() const {
    std::ostringstream out;
    bool first = true;
    auto cell = [](const json& v) {
      std::string s = v.is_string() ? v.get<std::string>() : v.dump();
      if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
      }
      return s;
    };
    for (const auto& t : tables) {
      if (!first) out << '\n';
      first = false;
      out << "# " << t.name << '\n';
      for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
      out << '\n';
      for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << cell(r[c]);
        out << '\n';
      }
    }
    return out.str();
  }
};

} // namespace commavg::io

#endif // COMMAVG_IO_REPORT_HPP
