#ifndef COMMAVG_IO_GRID_FILE_HPP
#define COMMAVG_IO_GRID_FILE_HPP

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "../combinatorics.hpp"
#include "../errors.hpp"

namespace commavg::io {

/*
 * Grid file:
 *   CAGRID 1 <W1> <W2> dense|rle
 * followed by W1 rows, row x listing membership of (x, 0..W2-1).
 *   dense: one line of W2 characters '0'/'1' per row
 *   rle:   one line per row of run tokens "<len>:<bit>", lengths summing to W2
 *
 * Coloring file:
 *   CACOLOR 1 <N> <r>\n
 * followed by N^3 raw bytes, cell (a1, a2, a3) at offset (a1*N + a2)*N + a3,
 * each in 1..r.
 */

enum class GridEncoding { dense, rle };

namespace detail {

[[noreturn]] inline void grid_fail(std::size_t line, const std::string& what) {
  throw ValidationError("line " + std::to_string(line) + ": " + what);
}

inline std::int64_t parse_dim(const std::string& tok, std::size_t line, const char* name) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    grid_fail(line, std::string("bad ") + name + " '" + tok + "'");
  }
}

} // namespace detail

inline GridSet read_grid(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) detail::grid_fail(1, "empty grid file");
  std::istringstream hs(header);
  std::string magic, version, w1s, w2s, enc, extra;
  hs >> magic >> version >> w1s >> w2s >> enc;
  if (magic != "CAGRID") detail::grid_fail(1, "expected magic 'CAGRID'");
  if (version != "1") detail::grid_fail(1, "unsupported grid version '" + version + "'");
  if (hs >> extra) detail::grid_fail(1, "trailing header field '" + extra + "'");
  const auto w1 = detail::parse_dim(w1s, 1, "width W1");
  const auto w2 = detail::parse_dim(w2s, 1, "width W2");
  if (enc != "dense" && enc != "rle") detail::grid_fail(1, "unknown encoding '" + enc + "'");

  GridSet g(w1, w2);
  std::string row;
  for (std::int64_t x = 0; x < w1; ++x) {
    const std::size_t line = static_cast<std::size_t>(x) + 2;
    if (!std::getline(in, row)) detail::grid_fail(line, "missing row " + std::to_string(x));
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (enc == "dense") {
      if (static_cast<std::int64_t>(row.size()) != w2)
        detail::grid_fail(line, "row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(w2));
      for (std::int64_t y = 0; y < w2; ++y) {
        char c = row[static_cast<std::size_t>(y)];
        if (c != '0' && c != '1') detail::grid_fail(line, std::string("invalid cell '") + c + "'");
        if (c == '1') g.set(x, y);
      }
    } else {
      std::istringstream rs(row);
      std::string tok;
      std::int64_t y = 0;
      while (rs >> tok) {
        auto colon = tok.find(':');
        if (colon == std::string::npos || colon + 2 != tok.size()) detail::grid_fail(line, "bad run '" + tok + "'");
        auto len = detail::parse_dim(tok.substr(0, colon), line, "run length");
        char bit = tok[colon + 1];
        if (bit != '0' && bit != '1') detail::grid_fail(line, "bad run bit in '" + tok + "'");
        if (y + len > w2) detail::grid_fail(line, "runs exceed row width " + std::to_string(w2));
        if (bit == '1')
          for (std::int64_t k = 0; k < len; ++k) g.set(x, y + k);
        y += len;
      }
      if (y != w2) detail::grid_fail(line, "runs cover " + std::to_string(y) + " of " + std::to_string(w2) + " cells");
    }
  }
  return g;
}

/// Writes a grid anchored at the origin; the set's window must start at (0, 0).
inline void write_grid(std::ostream& out, const GridSet& g, GridEncoding enc = GridEncoding::dense) {
  const auto& w = g.window();
  if (w.x0 != 0 || w.y0 != 0) throw DomainError("grid files describe windows anchored at the origin");
  out << "CAGRID 1 " << w.x1 << ' ' << w.y1 << ' ' << (enc == GridEncoding::dense ? "dense" : "rle") << '\n';
  for (std::int64_t x = 0; x < w.x1; ++x) {
    if (enc == GridEncoding::dense) {
      for (std::int64_t y = 0; y < w.y1; ++y) out << (g.contains(x, y) ? '1' : '0');
    } else {
      std::int64_t y = 0;
      bool first = true;
      while (y < w.y1) {
        bool bit = g.contains(x, y);
        std::int64_t len = 0;
        while (y + len < w.y1 && g.contains(x, y + len) == bit) ++len;
        out << (first ? "" : " ") << len << ':' << (bit ? '1' : '0');
        first = false;
        y += len;
      }
    }
    out << '\n';
  }
}

inline Coloring3 read_coloring(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) detail::grid_fail(1, "empty coloring file");
  std::istringstream hs(header);
  std::string magic, version, ns, rs, extra;
  hs >> magic >> version >> ns >> rs;
  if (magic != "CACOLOR") detail::grid_fail(1, "expected magic 'CACOLOR'");
  if (version != "1") detail::grid_fail(1, "unsupported coloring version '" + version + "'");
  if (hs >> extra) detail::grid_fail(1, "trailing header field '" + extra + "'");
  const auto n = static_cast<std::size_t>(detail::parse_dim(ns, 1, "side N"));
  const auto r = detail::parse_dim(rs, 1, "color count r");
  if (r < 1 || r > 255) detail::grid_fail(1, "color count must be in 1..255");
  std::vector<std::uint8_t> cells(n * n * n);
  in.read(reinterpret_cast<char*>(cells.data()), static_cast<std::streamsize>(cells.size()));
  if (static_cast<std::size_t>(in.gcount()) != cells.size())
    detail::grid_fail(2, "expected " + std::to_string(cells.size()) + " cell bytes, found " + std::to_string(in.gcount()));
  try {
    return Coloring3(n, static_cast<std::uint8_t>(r), std::move(cells));
  } catch (const ValidationError& e) {
    detail::grid_fail(2, e.what());
  }
}

inline void write_coloring(std::ostream& out, const Coloring3& c) {
  out << "CACOLOR 1 " << c.side() << ' ' << static_cast<int>(c.colors()) << '\n';
  out.write(reinterpret_cast<const char*>(c.cells().data()), static_cast<std::streamsize>(c.cells().size()));
}

} // namespace commavg::io

#endif // COMMAVG_IO_GRID_FILE_HPP
