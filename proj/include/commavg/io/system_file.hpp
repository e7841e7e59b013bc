#ifndef COMMAVG_IO_SYSTEM_FILE_HPP
#define COMMAVG_IO_SYSTEM_FILE_HPP

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "../actions.hpp"
#include "../errors.hpp"
#include "../groups.hpp"
#include "../scalar.hpp"
#include "../spaces.hpp"

namespace commavg::io {

using json = nlohmann::json;

inline constexpr const char* kSystemFormat = "commavg-system";
inline constexpr int kSystemVersion = 1;

/**
 * Everything a run needs: the commuting pair (space, group, T, S), the two
 * Folner schedules, and named observables.
 */
template <class R, class V = R> struct SystemFile {
  CommutingPair<R> pair;
  FolnerSequence phi;
  FolnerSequence psi;
  std::map<std::string, Observable<V>> observables;

  friend bool operator==(const SystemFile&, const SystemFile&) = default;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

inline const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

inline std::size_t as_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

inline std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

// Shortest round-trip decimal, so 0.1 reads as 1/10 in exact mode.
inline Rational rational_from_double(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

template <class R> R parse_real(const json& j, const std::string& path) {
  try {
    if constexpr (is_exact_v<R>) {
      if (j.is_number_integer()) return Rational(j.get<long long>());
      if (j.is_number_float()) return rational_from_double(j.get<double>());
      if (j.is_string()) return parse_rational(j.get<std::string>());
    } else {
      if (j.is_number()) return j.get<double>();
      if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
    }
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
  fail(path, "expected a number, a decimal string, or \"p/q\"");
}

template <class V> V parse_value(const json& j, const std::string& path) {
  if constexpr (is_complex<V>::value) {
    if (j.is_array()) {
      if (j.size() != 2) fail(path, "complex values are [re, im]");
      return V(parse_real<double>(j[0], path + "[0]"), parse_real<double>(j[1], path + "[1]"));
    }
    return V(parse_real<double>(j, path), 0.0);
  } else {
    if (j.is_array()) fail(path, "complex value in a real-valued run");
    return parse_real<V>(j, path);
  }
}

template <class R> json emit_real(const R& r) {
  if constexpr (is_exact_v<R>) {
    return rational_to_string(r);
  } else {
    return to_double(r);
  }
}

template <class V> json emit_value(const V& v) {
  if constexpr (is_complex<V>::value) {
    return json::array({v.real(), v.imag()});
  } else {
    return emit_real(v);
  }
}

inline GroupSpec parse_group(const json& j, const std::string& path) {
  const auto& kind = member(j, "kind", path);
  if (!kind.is_string()) fail(path + ".kind", "expected a string");
  if (kind == "free_abelian") return GroupSpec::free_abelian(as_index(member(j, "rank", path), path + ".rank"));
  if (kind == "finite_table") {
    FiniteTable t;
    const auto& table = member(j, "table", path);
    if (!table.is_array()) fail(path + ".table", "expected an array of rows");
    for (std::size_t a = 0; a < table.size(); ++a) {
      if (!table[a].is_array()) fail(path + ".table[" + std::to_string(a) + "]", "expected an array");
      std::vector<std::size_t> row;
      for (std::size_t b = 0; b < table[a].size(); ++b)
        row.push_back(as_index(table[a][b], path + ".table[" + std::to_string(a) + "][" + std::to_string(b) + "]"));
      t.table.push_back(std::move(row));
    }
    t.identity = as_index(member(j, "identity", path), path + ".identity");
    if (j.contains("inverse")) {
      const auto& inv = j["inverse"];
      if (!inv.is_array()) fail(path + ".inverse", "expected an array");
      for (std::size_t a = 0; a < inv.size(); ++a)
        t.inverse.push_back(as_index(inv[a], path + ".inverse[" + std::to_string(a) + "]"));
    } else {
      t.inverse.assign(t.table.size(), t.table.size());
      for (std::size_t a = 0; a < t.table.size(); ++a)
        for (std::size_t b = 0; b < t.table.size(); ++b)
          if (t.table[a].size() == t.table.size() && t.table[a][b] == t.identity) t.inverse[a] = b;
    }
    try {
      return GroupSpec::finite_table(std::move(t));
    } catch (const ValidationError& e) {
      fail(path, e.what());
    }
  }
  fail(path + ".kind", "unknown group kind '" + kind.get<std::string>() + "'");
}

inline json emit_group(const GroupSpec& g) {
  if (g.is_free_abelian()) return {{"kind", "free_abelian"}, {"rank", g.rank()}};
  return {{"kind", "finite_table"},
          {"table", g.table().table},
          {"identity", g.table().identity},
          {"inverse", g.table().inverse}};
}

inline std::vector<Permutation> parse_maps(const json& j, const std::string& path) {
  const auto& gens = member(j, "generators", path);
  if (!gens.is_array()) fail(path + ".generators", "expected an array of permutations");
  std::vector<Permutation> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    auto p = path + ".generators[" + std::to_string(i) + "]";
    if (!gens[i].is_array()) fail(p, "expected an array");
    Permutation m;
    for (std::size_t x = 0; x < gens[i].size(); ++x) m.push_back(as_index(gens[i][x], p + "[" + std::to_string(x) + "]"));
    out.push_back(std::move(m));
  }
  return out;
}

inline FolnerSequence parse_folner(const json& j, const GroupSpec& g, const std::string& path) {
  if (g.is_finite()) {
    if (j.contains("kind") && j["kind"] != "full_group") fail(path + ".kind", "finite groups use 'full_group'");
    return FolnerSequence::full_group(g);
  }
  auto bounds = [&](const char* key) {
    const auto& arr = member(j, key, path);
    if (!arr.is_array()) fail(path + "." + key, "expected an array of [offset, slope]");
    std::vector<AffineBound> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      auto p = path + "." + key + "[" + std::to_string(i) + "]";
      if (!arr[i].is_array() || arr[i].size() != 2) fail(p, "expected [offset, slope]");
      out.push_back({as_int(arr[i][0], p + "[0]"), as_int(arr[i][1], p + "[1]")});
    }
    return out;
  };
  try {
    return FolnerSequence::boxes(g, bounds("lo"), bounds("hi"));
  } catch (const ValidationError& e) {
    fail(path, e.what());
  } catch (const DimensionError& e) {
    fail(path, e.what());
  }
}

inline json emit_folner(const FolnerSequence& s) {
  if (s.group().is_finite()) return {{"kind", "full_group"}};
  auto arr = [](const std::vector<AffineBound>& b) {
    json out = json::array();
    for (const auto& a : b) out.push_back(json::array({a.offset, a.slope}));
    return out;
  };
  return {{"lo", arr(s.lower())}, {"hi", arr(s.upper())}};
}

} // namespace detail

/// True when some observable entry is written as [re, im].
inline bool has_complex_observables(const json& j) {
  if (!j.is_object() || !j.contains("observables") || !j["observables"].is_object()) return false;
  for (const auto& [name, values] : j["observables"].items()) {
    if (!values.is_array()) continue;
    for (const auto& v : values)
      if (v.is_array()) return true;
  }
  return false;
}

template <class R, class V = R> SystemFile<R, V> parse_system(const json& j) {
  using detail::fail;
  using detail::member;
  if (!j.is_object()) fail("$", "system file must be a JSON object");
  if (j.contains("format") && j["format"] != kSystemFormat) fail("format", "expected \"" + std::string(kSystemFormat) + "\"");
  if (j.contains("version") && j["version"] != kSystemVersion) fail("version", "unsupported version");

  const auto& ws = member(member(j, "space", "$"), "weights", "space");
  if (!ws.is_array()) fail("space.weights", "expected an array");
  std::vector<R> weights;
  for (std::size_t i = 0; i < ws.size(); ++i)
    weights.push_back(detail::parse_real<R>(ws[i], "space.weights[" + std::to_string(i) + "]"));
  FiniteSpace<R> space;
  try {
    space = FiniteSpace<R>(std::move(weights));
  } catch (const ValidationError& e) {
    fail("space.weights", e.what());
  }

  auto group = detail::parse_group(member(j, "group", "$"), "group");
  const auto& actions = member(j, "actions", "$");
  auto build = [&](const char* name) {
    std::string path = std::string("actions.") + name;
    try {
      return action_from_generators(group, space, detail::parse_maps(member(actions, name, "actions"), path));
    } catch (const ValidationError& e) {
      fail(path, e.what());
    } catch (const DimensionError& e) {
      fail(path, e.what());
    }
  };
  Action t = build("T");
  Action s = build("S");

  SystemFile<R, V> out;
  try {
    out.pair = CommutingPair<R>(space, std::move(t), std::move(s));
  } catch (const ValidationError& e) {
    fail("actions", e.what());
  }

  out.phi = FolnerSequence::standard(group);
  out.psi = FolnerSequence::standard(group);
  if (j.contains("folner")) {
    const auto& f = j["folner"];
    if (!f.is_object()) fail("folner", "expected an object");
    if (f.contains("Phi")) out.phi = detail::parse_folner(f["Phi"], group, "folner.Phi");
    if (f.contains("Psi")) out.psi = detail::parse_folner(f["Psi"], group, "folner.Psi");
  }

  if (j.contains("observables")) {
    const auto& obs = j["observables"];
    if (!obs.is_object()) fail("observables", "expected an object of name -> values");
    for (const auto& [name, values] : obs.items()) {
      std::string path = "observables." + name;
      if (!values.is_array()) fail(path, "expected an array");
      if (values.size() != space.size())
        fail(path, "has " + std::to_string(values.size()) + " entries, space has " + std::to_string(space.size()));
      std::vector<V> vals;
      for (std::size_t i = 0; i < values.size(); ++i)
        vals.push_back(detail::parse_value<V>(values[i], path + "[" + std::to_string(i) + "]"));
      out.observables.emplace(name, Observable<V>(std::move(vals)));
    }
  }
  return out;
}

template <class R, class V = R> SystemFile<R, V> parse_system_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("JSON parse error: ") + e.what());
  }
  return parse_system<R, V>(j);
}

template <class R, class V> json to_json(const SystemFile<R, V>& sys) {
  json weights = json::array();
  for (const auto& w : sys.pair.space().weights()) weights.push_back(detail::emit_real(w));
  json obs = json::object();
  for (const auto& [name, f] : sys.observables) {
    json vals = json::array();
    for (const auto& v : f.values()) vals.push_back(detail::emit_value(v));
    obs[name] = std::move(vals);
  }
  return {{"format", kSystemFormat},
          {"version", kSystemVersion},
          {"space", {{"weights", std::move(weights)}}},
          {"group", detail::emit_group(sys.pair.group())},
          {"actions", {{"T", {{"generators", sys.pair.T().maps()}}}, {"S", {{"generators", sys.pair.S().maps()}}}}},
          {"folner", {{"Phi", detail::emit_folner(sys.phi)}, {"Psi", detail::emit_folner(sys.psi)}}},
          {"observables", std::move(obs)}};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace commavg::io

#endif // COMMAVG_IO_SYSTEM_FILE_HPP
