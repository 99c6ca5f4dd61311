#pragma once

// File formats:
//  - CMX1: binary complex matrix. Magic "CMX1", then rows and cols as
//    u64 little-endian, then row-major float64 little-endian (re, im)
//    pairs. Entries must be finite.
//  - Complex CSV: one row per line, cells "re+imj" (both parts always
//    signed where needed, full round-trip precision).
//  - PGM: 16-bit binary (P5, maxval 65535, big-endian samples) holding
//    linearly max-normalized magnitudes.
//  - Phases CSV: "index,radians" header plus one pulse per line.
//  - Diagnostics: JSON lines, one object per solver iteration.

#include "lrsar/common.hpp"
#include "lrsar/solver.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace lrsar {

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_u64le(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline std::uint64_t read_u64le(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace detail

inline void write_cmx(const std::filesystem::path& path, const CMatrix& m) {
  require_finite(m, "write_cmx: " + path.string());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("write_cmx: cannot open " + path.string());
  os.write("CMX1", 4);
  detail::write_u64le(os, static_cast<std::uint64_t>(m.rows()));
  detail::write_u64le(os, static_cast<std::uint64_t>(m.cols()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      const double re = m(r, c).real(), im = m(r, c).imag();
      os.write(reinterpret_cast<const char*>(&re), sizeof(re));
      os.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
  if (!os) throw Error("write_cmx: write failed for " + path.string());
}

inline CMatrix read_cmx(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("read_cmx: cannot open " + path.string());
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CMX1", 4) != 0)
    throw Error("read_cmx: bad magic in " + path.string());
  const std::uint64_t rows = detail::read_u64le(is);
  const std::uint64_t cols = detail::read_u64le(is);
  if (!is) throw Error("read_cmx: truncated header in " + path.string());
  constexpr std::uint64_t kMaxEntries = 1ull << 28;
  if (rows == 0 || cols == 0 || rows > kMaxEntries || cols > kMaxEntries ||
      rows * cols > kMaxEntries)
    throw Error("read_cmx: unreasonable dimensions in " + path.string());
  CMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      double re = 0, im = 0;
      is.read(reinterpret_cast<char*>(&re), sizeof(re));
      is.read(reinterpret_cast<char*>(&im), sizeof(im));
      m(r, c) = cxd(re, im);
    }
  if (!is) throw Error("read_cmx: truncated data in " + path.string());
  is.peek();
  if (!is.eof()) throw Error("read_cmx: trailing bytes in " + path.string());
  require_finite(m, "read_cmx: " + path.string());
  return m;
}

inline std::string complex_csv_cell(const cxd& z) {
  char buf[140];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

inline void write_complex_csv(const std::filesystem::path& path, const CMatrix& m) {
  require_finite(m, "write_complex_csv: " + path.string());
  std::ofstream os(path);
  if (!os) throw Error("write_complex_csv: cannot open " + path.string());
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) os << ',';
      os << complex_csv_cell(m(r, c));
    }
    os << '\n';
  }
  if (!os) throw Error("write_complex_csv: write failed for " + path.string());
}

inline cxd parse_complex_cell(const std::string& cell) {
  const char* s = cell.c_str();
  char* end = nullptr;
  const double re = std::strtod(s, &end);
  if (end == s) throw Error("parse_complex_cell: bad cell '" + cell + "'");
  const char* s2 = end;
  const double im = std::strtod(s2, &end);
  if (end == s2 || *end != 'j' || *(end + 1) != '\0')
    throw Error("parse_complex_cell: bad cell '" + cell + "'");
  return cxd(re, im);
}

inline CMatrix read_complex_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("read_complex_csv: cannot open " + path.string());
  std::vector<std::vector<cxd>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<cxd> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_complex_cell(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error("read_complex_csv: ragged rows in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("read_complex_csv: empty file " + path.string());
  CMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  require_finite(m, "read_complex_csv: " + path.string());
  return m;
}

// Magnitude image, linearly scaled so the peak maps to 65535. An
// all-zero image writes as all black.
inline void write_pgm16(const std::filesystem::path& path, const CMatrix& m) {
  require_finite(m, "write_pgm16: " + path.string());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("write_pgm16: cannot open " + path.string());
  os << "P5\n" << m.cols() << ' ' << m.rows() << "\n65535\n";
  const double peak = m.cwiseAbs().maxCoeff();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      const double mag = std::abs(m(r, c));
      const double scaled = peak > 0.0 ? 65535.0 * mag / peak : 0.0;
      const auto v = static_cast<std::uint16_t>(std::lround(scaled));
      const char bytes[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xff)};
      os.write(bytes, 2);
    }
  if (!os) throw Error("write_pgm16: write failed for " + path.string());
}

inline void write_phases_csv(const std::filesystem::path& path, const RVector& phases) {
  require_finite(phases, "write_phases_csv: " + path.string());
  std::ofstream os(path);
  if (!os) throw Error("write_phases_csv: cannot open " + path.string());
  os << "index,radians\n";
  for (Index i = 0; i < phases.size(); ++i)
    os << i << ',' << detail::format_double(phases(i)) << '\n';
  if (!os) throw Error("write_phases_csv: write failed for " + path.string());
}

inline RVector read_phases_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("read_phases_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != "index,radians")
    throw Error("read_phases_csv: missing header in " + path.string());
  std::vector<double> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error("read_phases_csv: bad line in " + path.string());
    const long idx = std::stol(line.substr(0, comma));
    if (idx != static_cast<long>(vals.size()))
      throw Error("read_phases_csv: non-contiguous indices in " + path.string());
    vals.push_back(std::stod(line.substr(comma + 1)));
  }
  require(!vals.empty(), "read_phases_csv: no data in " + path.string());
  RVector v(static_cast<Index>(vals.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = vals[static_cast<std::size_t>(i)];
  require_finite(v, "read_phases_csv: " + path.string());
  return v;
}

// One JSON object per iteration; phase_mse appears only when known.
inline void write_diagnostics_jsonl(const std::filesystem::path& path,
                                    const std::vector<IterationStats>& history) {
  std::ofstream os(path);
  if (!os) throw Error("write_diagnostics_jsonl: cannot open " + path.string());
  for (const IterationStats& st : history) {
    os << "{\"iter\":" << st.iter << ",\"rel_change\":" << detail::format_double(st.rel_change)
       << ",\"objective\":" << detail::format_double(st.objective)
       << ",\"entropy\":" << detail::format_double(st.entropy);
    if (std::isfinite(st.phase_mse))
      os << ",\"phase_mse\":" << detail::format_double(st.phase_mse);
    os << ",\"elapsed_ms\":" << detail::format_double(st.elapsed_ms) << "}\n";
  }
  if (!os) throw Error("write_diagnostics_jsonl: write failed for " + path.string());
}

}  // namespace lrsar
