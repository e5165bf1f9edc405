#pragma once

// Text format for Kraus families:
//
//   # comment
//   name: aklt
//   gauge: real
//   d: 3
//   k: 2
//   kraus 1
//   (0.816496580927726, 0) (0, 0)
//   ...
//   rho                      (optional)
//   (0.5, 0) (0, 0)
//   ...
//
// Matrices are row-major, one row per line. Numbers are printed in the
// shortest form that reads back to the same double.

#include <charconv>
#include <fstream>
#include <sstream>

#include "fcs/fcs_core.hpp"

namespace fcs {

class ParseError : public InvalidArgument {
 public:
  ParseError(int line, const std::string& what)
      : InvalidArgument("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct KrausFile {
  std::string name;
  std::string gauge;
  KrausFamily kraus;
  std::optional<Mat> rho;
};

namespace io {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string format_complex(cplx z) {
  return "(" + format_double(z.real()) + ", " + format_double(z.imag()) + ")";
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(std::string_view s, int line) {
  const std::string t = trim(s);
  double x = 0.0;
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  const auto res = std::from_chars(first, t.data() + t.size(), x);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
    throw ParseError(line, "invalid number '" + t + "'");
  if (!std::isfinite(x)) throw ParseError(line, "non-finite number '" + t + "'");
  return x;
}

/// One matrix row of "(re, im)" pairs.
inline std::vector<cplx> parse_row(const std::string& text, int line) {
  std::vector<cplx> out;
  std::size_t pos = 0;
  while (true) {
    pos = text.find_first_not_of(" \t\r", pos);
    if (pos == std::string::npos) break;
    if (text[pos] != '(') throw ParseError(line, "expected '(' at column " + std::to_string(pos + 1));
    const auto close = text.find(')', pos);
    if (close == std::string::npos) throw ParseError(line, "unterminated complex entry");
    const std::string body = text.substr(pos + 1, close - pos - 1);
    const auto comma = body.find(',');
    if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos)
      throw ParseError(line, "complex entry must be (re, im)");
    out.emplace_back(parse_double(std::string_view(body).substr(0, comma), line),
                     parse_double(std::string_view(body).substr(comma + 1), line));
    pos = close + 1;
  }
  return out;
}

inline int parse_int(const std::string& s, int line, const std::string& what) {
  const std::string t = trim(s);
  int x = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty())
    throw ParseError(line, what + " must be an integer, got '" + t + "'");
  return x;
}

}  // namespace io

inline std::string write_kraus(const KrausFile& f) {
  std::ostringstream os;
  if (!f.name.empty()) os << "name: " << f.name << "\n";
  if (!f.gauge.empty()) os << "gauge: " << f.gauge << "\n";
  os << "d: " << f.kraus.d << "\n";
  os << "k: " << f.kraus.k << "\n";
  auto put = [&](const Mat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        os << (c ? " " : "") << io::format_complex(m(r, c));
      os << "\n";
    }
  };
  for (int i = 0; i < f.kraus.d; ++i) {
    os << "kraus " << i + 1 << "\n";
    put(f.kraus.v[i]);
  }
  if (f.rho) {
    os << "rho\n";
    put(*f.rho);
  }
  return os.str();
}

/// Parses and validates (sum v v^* = I within tol); every failure names a line.
inline KrausFile read_kraus(std::istream& in, double tol = 1e-9) {
  KrausFile f;
  int d = -1, k = -1;
  int d_line = 0;
  std::vector<Mat> mats;
  std::vector<bool> seen;
  Mat* current = nullptr;
  int row = 0;
  std::string block_name;
  std::string raw;
  int line = 0;

  auto finish_block = [&](int at) {
    if (current && row != k)
      throw ParseError(at, block_name + " has " + std::to_string(row) + " rows, expected " +
                               std::to_string(k));
    current = nullptr;
  };
  auto need_header = [&](int at) {
    if (d < 1 || k < 1) throw ParseError(at, "d and k must be given before matrix blocks");
    if (mats.empty()) {
      mats.assign(d, Mat::Zero(k, k));
      seen.assign(d, false);
    }
  };

  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
    text = io::trim(text);
    if (text.empty()) continue;
    if (text.front() == '(') {
      if (!current) throw ParseError(line, "matrix row outside a kraus or rho block");
      if (row >= k) throw ParseError(line, block_name + " has more than " + std::to_string(k) + " rows");
      const auto entries = io::parse_row(text, line);
      if (static_cast<int>(entries.size()) != k)
        throw ParseError(line, "row has " + std::to_string(entries.size()) + " entries, expected " +
                                   std::to_string(k));
      for (int c = 0; c < k; ++c) (*current)(row, c) = entries[c];
      ++row;
      continue;
    }
    finish_block(line);
    if (text.rfind("kraus", 0) == 0) {
      need_header(line);
      const int idx = io::parse_int(text.substr(5), line, "kraus index");
      if (idx < 1 || idx > d)
        throw ParseError(line, "kraus index " + std::to_string(idx) + " outside 1.." + std::to_string(d));
      if (seen[idx - 1]) throw ParseError(line, "kraus " + std::to_string(idx) + " given twice");
      seen[idx - 1] = true;
      current = &mats[idx - 1];
      block_name = "kraus " + std::to_string(idx);
      row = 0;
    } else if (text == "rho") {
      need_header(line);
      if (f.rho) throw ParseError(line, "rho given twice");
      f.rho = Mat::Zero(k, k);
      current = &*f.rho;
      block_name = "rho";
      row = 0;
    } else {
      const auto colon = text.find(':');
      if (colon == std::string::npos) throw ParseError(line, "unrecognized line '" + text + "'");
      const std::string key = io::trim(text.substr(0, colon));
      const std::string value = io::trim(text.substr(colon + 1));
      if (key == "name") {
        f.name = value;
      } else if (key == "gauge") {
        f.gauge = value;
      } else if (key == "d" || key == "k") {
        if (!mats.empty()) throw ParseError(line, key + " must precede the matrix blocks");
        const int x = io::parse_int(value, line, key);
        if (x < 1) throw ParseError(line, key + " must be positive");
        if (key == "d") {
          d = x;
          d_line = line;
        } else {
          k = x;
        }
      } else {
        throw ParseError(line, "unknown key '" + key + "'");
      }
    }
  }
  finish_block(line + 1);
  if (d < 1 || k < 1) throw ParseError(std::max(line, 1), "missing d or k");
  if (mats.empty()) throw ParseError(std::max(line, 1), "no kraus blocks");
  for (int i = 0; i < d; ++i)
    if (!seen[i]) throw ParseError(d_line, "kraus " + std::to_string(i + 1) + " is missing");
  f.kraus = KrausFamily(mats);
  const auto report = validate(f.kraus, tol);
  if (!report.pass)
    throw ParseError(d_line, "Kraus family is not unital: max |sum v v^* - I| = " +
                                 io::format_double(report.defect));
  return f;
}

inline KrausFile read_kraus_string(const std::string& text, double tol = 1e-9) {
  std::istringstream in(text);
  return read_kraus(in, tol);
}

inline KrausFile read_kraus_file(const std::string& path, double tol = 1e-9) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_kraus(in, tol);
}

/// State from a parsed file: the stored rho when present, else the fixed point.
inline FcsState state_from_file(const KrausFile& f) {
  return f.rho ? make_state(f.kraus, *f.rho) : fixed_point(f.kraus);
}

}  // namespace fcs
