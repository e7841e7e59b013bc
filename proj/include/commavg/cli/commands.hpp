#ifndef COMMAVG_CLI_COMMANDS_HPP
#define COMMAVG_CLI_COMMANDS_HPP

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "../actions.hpp"
#include "../averages.hpp"
#include "../checks.hpp"
#include "../combinatorics.hpp"
#include "../errors.hpp"
#include "../io/grid_file.hpp"
#include "../io/report.hpp"
#include "../io/system_file.hpp"

namespace commavg::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kValidation = 2, kBoundViolation = 3 };

struct Options {
  std::string input;
  std::string f1, f2, f3, f;
  std::string stages;
  std::uint64_t seed = 0;
  int trials = 8;
  double epsilon = 1e-3;
  std::string range;
  std::string sub;
  std::string format = "json";
  bool exact = false;
  bool omit_timings = false;
  std::string output;
  std::size_t max_shift = 0;
  std::size_t p = 2, q = 2, r = 2;
  std::string tau, sigma;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

inline std::vector<std::int64_t> parse_int_list(const std::string& text, const char* what) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + ": bad integer '" + tok + "'");
    }
  }
  return out;
}

inline Box2 parse_box(const std::string& text, const char* what) {
  auto v = parse_int_list(text, what);
  if (v.size() != 4) throw ValidationError(std::string(what) + " expects x0,y0,x1,y1");
  return {v[0], v[1], v[2], v[3]};
}

inline json box_json(const Box2& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

template <class V> const Observable<V>& lookup(const std::map<std::string, Observable<V>>& obs, const std::string& name) {
  auto it = obs.find(name);
  if (it == obs.end()) throw ValidationError("unknown observable '" + name + "'");
  return it->second;
}

template <class V> json values_json(const Observable<V>& f) {
  json out = json::array();
  for (const auto& v : f.values()) out.push_back(io::detail::emit_value(v));
  return out;
}

/// Runs fn.template operator()<R, V>() for the arithmetic the system file and flags call for.
template <class F> void dispatch_mode(const json& system, bool exact, F&& fn) {
  bool complex = io::has_complex_observables(system);
  if (exact && complex) throw ValidationError("exact mode does not support complex observables");
  if (exact) {
    fn.template operator()<Rational, Rational>();
  } else if (complex) {
    fn.template operator()<double, Complex>();
  } else {
    fn.template operator()<double, double>();
  }
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("JSON parse error: ") + e.what());
  }
}

inline void set_mode(io::RunReport& rep, bool exact) { rep.parameters["mode"] = exact ? "exact" : "double"; }

} // namespace detail

inline int cmd_average(const Options& o, io::RunReport& rep) {
  auto t0 = detail::Clock::now();
  auto text = io::read_file(o.input);
  rep.inputs_digest = io::sha256_hex(text);
  auto j = detail::parse_json_text(text);
  detail::set_mode(rep, o.exact);
  detail::dispatch_mode(j, o.exact, [&]<class R, class V>() {
    auto sys = io::parse_system<R, V>(j);
    const auto& f1 = detail::lookup(sys.observables, o.f1);
    const auto& f2 = detail::lookup(sys.observables, o.f2);
    const auto& f3 = detail::lookup(sys.observables, o.f3);
    std::vector<std::int64_t> stages =
        o.stages.empty() ? std::vector<std::int64_t>{1, 2, 4, 8, 16} : detail::parse_int_list(o.stages, "--stages");
    rep.parameters["observables"] = {o.f1, o.f2, o.f3};
    rep.parameters["stages"] = stages;
    auto report = average_report(sys.pair, f1, f2, f3, sys.phi, sys.psi, stages);
    auto& table = rep.table("stages", {"n", "phi_size", "psi_size", "deviation"});
    for (const auto& s : report.stages)
      table.rows.push_back({s.n, sys.phi.cardinality(s.n), sys.psi.cardinality(s.n), s.deviation});
    rep.limits["L"] = detail::values_json(report.limit);
    auto& lt = rep.table("limit", {"x", "L"});
    for (std::size_t x = 0; x < report.limit.size(); ++x) lt.rows.push_back({x, io::detail::emit_value(report.limit[x])});

    if (auto stage = period_stage(sys.pair)) {
      auto window = period_schedules(sys.pair.group()).front();
      auto a = multi_average(sys.pair, f1, f2, f3, window, window, *stage);
      rep.summary["full_period"] = *stage;
      rep.summary["full_period_deviation"] = distance_l2(sys.pair.space(), a, report.limit);
    } else {
      rep.summary["full_period"] = nullptr;
    }
  });
  rep.timings.emplace_back("total_ms", detail::ms_since(t0));
  return kOk;
}

inline int cmd_bounds(const Options& o, io::RunReport& rep) {
  auto t0 = detail::Clock::now();
  auto text = io::read_file(o.input);
  rep.inputs_digest = io::sha256_hex(text);
  auto j = detail::parse_json_text(text);
  if (io::has_complex_observables(j)) throw ValidationError("recurrence bounds need real observables");
  detail::set_mode(rep, o.exact);
  int code = kOk;
  auto run = [&]<class R, class V>() {
    if constexpr (!is_complex<V>::value) {
      auto sys = io::parse_system<R, V>(j);
      const auto& f = detail::lookup(sys.observables, o.f);
      rep.parameters["observable"] = o.f;
      auto& table = rep.table("bounds", {"bound", "left", "right", "holds"});
      auto add = [&](const char* name, const BoundComparison<V>& b) {
        bool ok = b.holds();
        if (!ok) code = kBoundViolation;
        json left = io::detail::emit_value(b.left), right = io::detail::emit_value(b.right);
        table.rows.push_back({name, left, right, ok});
        rep.bounds.push_back({{"bound", name}, {"left", left}, {"right", right}, {"holds", ok}});
      };
      add("four_term", four_term_bound(sys.pair, f));
      add("khintchine_T", khintchine_bound(sys.pair.space(), sys.pair.T(), f));
      add("khintchine_S", khintchine_bound(sys.pair.space(), sys.pair.S(), f));
      rep.summary["all_hold"] = code == kOk;
    }
  };
  if (o.exact) {
    run.template operator()<Rational, Rational>();
  } else {
    run.template operator()<double, double>();
  }
  rep.timings.emplace_back("total_ms", detail::ms_since(t0));
  return code;
}

inline int cmd_scan(const Options& o, io::RunReport& rep) {
  auto t0 = detail::Clock::now();
  auto text = io::read_file(o.input);
  rep.inputs_digest = io::sha256_hex(text);
  std::istringstream in(text);
  auto grid = io::read_grid(in);
  const auto& w = grid.window();

  Box2 range;
  if (o.range.empty()) {
    auto a = w.width() / 4, b = w.height() / 4;
    range = {-a, -b, a + 1, b + 1};
  } else {
    range = detail::parse_box(o.range, "--range");
  }
  Box2 sub;
  if (o.sub.empty()) {
    auto lo = [](std::int64_t v) { return std::max<std::int64_t>(0, -v); };
    auto hi = [](std::int64_t v) { return std::max<std::int64_t>(0, v); };
    sub = {lo(range.x0), lo(range.y0), w.x1 - hi(range.x1 - 1), w.y1 - hi(range.y1 - 1)};
  } else {
    sub = detail::parse_box(o.sub, "--sub");
  }
  rep.parameters["window"] = detail::box_json(w);
  rep.parameters["sub"] = detail::box_json(sub);
  rep.parameters["range"] = detail::box_json(range);
  rep.parameters["epsilon"] = o.epsilon;

  auto scan = good_pair_set(grid, o.epsilon, sub, range);
  auto& table = rep.table("shifts", {"g", "h", "density", "good"});
  const auto cols = static_cast<std::size_t>(range.height());
  for (auto g = range.x0; g < range.x1; ++g)
    for (auto h = range.y0; h < range.y1; ++h) {
      auto i = static_cast<std::size_t>(g - range.x0) * cols + static_cast<std::size_t>(h - range.y0);
      table.rows.push_back({g, h, scan.densities[i], scan.good.contains(g, h)});
    }
  auto l = syndeticity_estimate(scan.good);
  rep.summary["delta"] = scan.delta;
  rep.summary["threshold"] = scan.threshold;
  rep.summary["good_count"] = scan.good.count();
  rep.summary["shift_count"] = static_cast<std::size_t>(range.area());
  rep.summary["syndeticity"] = l ? json(*l) : json(nullptr);
  rep.timings.emplace_back("total_ms", detail::ms_since(t0));
  return kOk;
}

inline int cmd_partition(const Options& o, io::RunReport& rep) {
  auto t0 = detail::Clock::now();
  auto text = io::read_file(o.input);
  rep.inputs_digest = io::sha256_hex(text);
  std::istringstream in(text);
  auto coloring = io::read_coloring(in);
  std::size_t max_shift = o.max_shift == 0 ? (coloring.side() > 0 ? coloring.side() - 1 : 0) : o.max_shift;
  rep.parameters["side"] = coloring.side();
  rep.parameters["colors"] = coloring.colors();
  rep.parameters["max_shift"] = max_shift;
  auto hit = parallelepiped_search(coloring, max_shift);
  auto& table = rep.table("hit", {"color", "a1", "a2", "a3", "g", "h", "k"});
  int code = kOk;
  rep.summary["found"] = hit.has_value();
  if (hit) {
    bool ok = verify_parallelepiped(coloring, hit->color, hit->base, hit->shifts);
    if (!ok) code = kBoundViolation;
    table.rows.push_back({hit->color, hit->base[0], hit->base[1], hit->base[2], hit->shifts[0], hit->shifts[1],
                          hit->shifts[2]});
    rep.summary["color"] = hit->color;
    rep.summary["base"] = hit->base;
    rep.summary["shifts"] = hit->shifts;
    rep.summary["verified"] = ok;
  }
  rep.timings.emplace_back("total_ms", detail::ms_since(t0));
  return code;
}

inline int cmd_check(const Options& o, io::RunReport& rep) {
  auto t0 = detail::Clock::now();
  auto text = io::read_file(o.input);
  rep.inputs_digest = io::sha256_hex(text);
  auto j = detail::parse_json_text(text);
  detail::set_mode(rep, o.exact);
  rep.seed = o.seed;
  rep.parameters["trials"] = o.trials;
  int code = kOk;
  detail::dispatch_mode(j, o.exact, [&]<class R, class V>() {
    auto sys = io::parse_system<R, V>(j);
    auto results = property_suite<R, V>(sys.pair, o.seed, o.trials);
    auto& table = rep.table("checks", {"check", "value", "tolerance", "pass", "detail"});
    std::size_t failed = 0;
    for (const auto& c : results) {
      table.rows.push_back({c.name, c.value, c.tolerance, c.pass, c.detail});
      if (!c.pass) ++failed;
    }
    rep.summary["checks"] = results.size();
    rep.summary["failed"] = failed;
    if (failed > 0) code = kBoundViolation;
  });
  rep.timings.emplace_back("total_ms", detail::ms_since(t0));
  return code;
}

/// The SystemFile for the skew product example, as written by `commavg example`.
inline io::SystemFile<Rational> example_system(const Options& o) {
  auto to_sizes = [](const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    for (auto v : detail::parse_int_list(text, what)) {
      if (v < 0) throw ValidationError(std::string(what) + ": negative entry");
      out.push_back(static_cast<std::size_t>(v));
    }
    return out;
  };
  auto tau = o.tau.empty() ? std::vector<std::size_t>(o.p, 0) : to_sizes(o.tau, "--tau");
  auto sigma = o.sigma.empty() ? std::vector<std::size_t>(o.q, 0) : to_sizes(o.sigma, "--sigma");
  auto pair = skew_product_example<Rational>(o.p, o.q, o.r, tau, sigma);
  const std::size_t n = pair.points();
  auto seq = FolnerSequence::standard(pair.group());
  return {pair, seq, seq,
          {{"one", Observable<Rational>::constant(n, Rational(1))}, {"delta0", Observable<Rational>::point_mass(n, 0)}}};
}

inline int cmd_example(const Options& o, std::ostream& out) {
  auto sys = example_system(o);
  auto text = io::to_json(sys).dump(2) + "\n";
  if (!(io::parse_system_text<Rational>(text) == sys)) throw Error("example system failed to round-trip");
  if (o.output.empty()) {
    out << text;
  } else {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + o.output + "'");
    f << text;
  }
  return kOk;
}

inline void emit_report(const Options& o, const io::RunReport& rep, std::ostream& out) {
  std::string body = o.format == "csv" ? rep.to_csv() : rep.to_json(!o.omit_timings).dump(2) + "\n";
  if (o.output.empty()) {
    out << body;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + o.output + "'");
  f << body;
}

/// Parses argv-style arguments (args[0] is the program name) and runs one command.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiple ergodic averages for commuting actions on finite systems"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("-o,--output", o.output, "Write the report to a file");
    sub->add_flag("--omit-timings", o.omit_timings, "Leave out the timings block");
  };

  auto* average = app.add_subcommand("average", "Finite-stage averages against the exact limit");
  average->add_option("system", o.input, "System file")->required();
  average->add_option("--f1", o.f1, "First observable")->required();
  average->add_option("--f2", o.f2, "Second observable")->required();
  average->add_option("--f3", o.f3, "Third observable")->required();
  average->add_option("--stages", o.stages, "Comma-separated stages n");
  average->add_flag("--exact", o.exact, "Exact rational arithmetic");
  add_common(average);

  auto* bounds = app.add_subcommand("bounds", "Recurrence lower bounds for a nonnegative observable");
  bounds->add_option("system", o.input, "System file")->required();
  bounds->add_option("--f", o.f, "Observable")->required();
  bounds->add_flag("--exact", o.exact, "Exact rational arithmetic");
  add_common(bounds);

  auto* scan = app.add_subcommand("scan", "Four-fold intersection densities over a shift range");
  scan->add_option("grid", o.input, "Grid file")->required();
  scan->add_option("--epsilon", o.epsilon, "Slack below delta^4");
  scan->add_option("--sub", o.sub, "Sub-box x0,y0,x1,y1 (half-open)");
  scan->add_option("--range", o.range, "Shift range g0,h0,g1,h1 (half-open)");
  add_common(scan);

  auto* partition = app.add_subcommand("partition", "Monochromatic parallelepiped search");
  partition->add_option("coloring", o.input, "Coloring file")->required();
  partition->add_option("--range", o.max_shift, "Largest shift g, h, k (default N-1)");
  add_common(partition);

  auto* example = app.add_subcommand("example", "Write the skew product example as a system file");
  example->add_option("--p", o.p, "Base size of the T coordinate");
  example->add_option("--q", o.q, "Base size of the S coordinate");
  example->add_option("--r", o.r, "Fiber group Z_r");
  example->add_option("--tau", o.tau, "Cocycle tau, p comma-separated values in Z_r");
  example->add_option("--sigma", o.sigma, "Cocycle sigma, q comma-separated values in Z_r");
  example->add_option("-o,--output", o.output, "Output path");

  auto* check = app.add_subcommand("check", "Run the property suite on a system file");
  check->add_option("system", o.input, "System file")->required();
  check->add_option("--seed", o.seed, "Seed for random observables");
  check->add_option("--trials", o.trials, "Random observable triples")->check(CLI::PositiveNumber);
  check->add_flag("--exact", o.exact, "Exact rational arithmetic");
  add_common(check);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (example->parsed()) return cmd_example(o, out);
    io::RunReport rep;
    int code = kOk;
    if (average->parsed()) {
      rep.command = "average";
      code = cmd_average(o, rep);
    } else if (bounds->parsed()) {
      rep.command = "bounds";
      code = cmd_bounds(o, rep);
    } else if (scan->parsed()) {
      rep.command = "scan";
      code = cmd_scan(o, rep);
    } else if (partition->parsed()) {
      rep.command = "partition";
      code = cmd_partition(o, rep);
    } else if (check->parsed()) {
      rep.command = "check";
      code = cmd_check(o, rep);
    }
    emit_report(o, rep, out);
    if (code == kBoundViolation) err << "error: a guaranteed inequality failed; see report\n";
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
}

} // namespace commavg::cli

#endif // COMMAVG_CLI_COMMANDS_HPP
