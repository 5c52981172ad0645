#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "pipeline.hpp"

namespace polydist {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& field, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", field '" + field +
                           "': " + message),
        line_(line),
        field_(field) {}
  ParseError(const std::string& field, const std::string& message)
      : std::runtime_error("field '" + field + "': " + message), line_(0), field_(field) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

// Shortest representation that parses back to the identical double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_vec(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v(i));
  }
  out += "]";
  return out;
}

inline std::string format_mat(const Mat& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += ",";
    out += format_vec(m.row(i));
  }
  out += "]";
  return out;
}

// One solvable problem as a flat text document: `key value` lines, vectors
// and matrices in bracket literals, `#` comments. Unknown keys are rejected
// so typos surface instead of silently applying defaults.
struct InstanceDoc {
  Eigen::Index dimension = 0;
  HPolytope P;
  Vec C;
  double R_circ = 0.0;
  Vec C0;
  double rho = 0.0;
  std::optional<double> tol;
  std::optional<double> tol_feas;
  std::optional<int> max_iters;
  std::optional<int> max_generations;
  std::optional<std::pair<double, double>> bracket;

  CircumscribedFrame frame() const { return CircumscribedFrame{C, R_circ, C0, rho}; }

  SolveOptions options() const {
    SolveOptions opts;
    if (tol) opts.solver.tol_obj = *tol;
    if (tol_feas) opts.solver.tol_feas = *tol_feas;
    if (max_iters) opts.solver.max_iters = *max_iters;
    if (max_generations) opts.max_generations = *max_generations;
    if (bracket) opts.bracket = *bracket;
    return opts;
  }
};

namespace detail {

inline double parse_number(const std::string& tok, int line, const std::string& field) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, field, "not a number: '" + tok + "'");
  }
}

// Splits "[a,b,c]" at top-level commas; nested brackets stay intact.
inline std::vector<std::string> split_bracket_list(const std::string& text, int line,
                                                   const std::string& field) {
  std::string s = text;
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos || s[first] != '[' || s[last] != ']')
    throw ParseError(line, field, "expected a bracketed list");
  s = s.substr(first + 1, last - first - 1);
  std::vector<std::string> items;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (depth != 0) throw ParseError(line, field, "unbalanced brackets");
  const bool only_space = cur.find_first_not_of(" \t") == std::string::npos;
  if (!only_space || !items.empty()) items.push_back(cur);
  return items;
}

inline Vec parse_vec(const std::string& text, int line, const std::string& field) {
  const std::vector<std::string> items = split_bracket_list(text, line, field);
  Vec v(static_cast<Eigen::Index>(items.size()));
  for (size_t i = 0; i < items.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = parse_number(items[i], line, field);
  return v;
}

inline Mat parse_mat(const std::string& text, int line, const std::string& field) {
  const std::vector<std::string> rows = split_bracket_list(text, line, field);
  if (rows.empty()) throw ParseError(line, field, "matrix needs at least one row");
  std::vector<Vec> parsed;
  parsed.reserve(rows.size());
  for (const std::string& r : rows) parsed.push_back(parse_vec(r, line, field));
  Mat m(static_cast<Eigen::Index>(parsed.size()), parsed.front().size());
  for (size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].size() != m.cols())
      throw ParseError(line, field, "ragged matrix rows");
    m.row(static_cast<Eigen::Index>(i)) = parsed[i];
  }
  return m;
}

}  // namespace detail

inline InstanceDoc parse_instance(const std::string& text) {
  InstanceDoc doc;
  std::optional<Mat> A;
  std::optional<Vec> b, C, C0;
  std::optional<double> dimension, R_circ, rho;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto sep = line.find_first_of(" \t", start);
    const std::string key = line.substr(start, sep == std::string::npos ? line.size() - start
                                                                        : sep - start);
    std::string rest = sep == std::string::npos ? "" : line.substr(sep + 1);
    if (!rest.empty() && rest.back() == '\r') rest.pop_back();
    if (rest.find_first_not_of(" \t") == std::string::npos)
      throw ParseError(lineno, key, "missing value");

    if (key == "dimension") dimension = detail::parse_number(rest, lineno, key);
    else if (key == "A") A = detail::parse_mat(rest, lineno, key);
    else if (key == "b") b = detail::parse_vec(rest, lineno, key);
    else if (key == "C") C = detail::parse_vec(rest, lineno, key);
    else if (key == "C0") C0 = detail::parse_vec(rest, lineno, key);
    else if (key == "R_circ") R_circ = detail::parse_number(rest, lineno, key);
    else if (key == "rho") rho = detail::parse_number(rest, lineno, key);
    else if (key == "tol") doc.tol = detail::parse_number(rest, lineno, key);
    else if (key == "tol_feas") doc.tol_feas = detail::parse_number(rest, lineno, key);
    else if (key == "max_iters")
      doc.max_iters = static_cast<int>(detail::parse_number(rest, lineno, key));
    else if (key == "max_generations")
      doc.max_generations = static_cast<int>(detail::parse_number(rest, lineno, key));
    else if (key == "bracket") {
      const Vec v = detail::parse_vec(rest, lineno, key);
      if (v.size() != 2) throw ParseError(lineno, key, "bracket needs exactly two values");
      doc.bracket = std::make_pair(v(0), v(1));
    } else {
      throw ParseError(lineno, key, "unknown field");
    }
  }

  if (!dimension) throw ParseError("dimension", "missing field");
  if (!A) throw ParseError("A", "missing field");
  if (!b) throw ParseError("b", "missing field");
  if (!C) throw ParseError("C", "missing field");
  if (!C0) throw ParseError("C0", "missing field");
  if (!R_circ) throw ParseError("R_circ", "missing field");
  if (!rho) throw ParseError("rho", "missing field");

  doc.dimension = static_cast<Eigen::Index>(*dimension);
  if (doc.dimension <= 0) throw ParseError("dimension", "must be a positive integer");
  if (A->cols() != doc.dimension) throw ParseError("A", "column count differs from dimension");
  if (b->size() != A->rows()) throw ParseError("b", "length differs from A row count");
  if (C->size() != doc.dimension) throw ParseError("C", "length differs from dimension");
  if (C0->size() != doc.dimension) throw ParseError("C0", "length differs from dimension");
  try {
    doc.P = HPolytope{*A, *b};
  } catch (const std::invalid_argument& e) {
    throw ParseError("A", e.what());
  }
  doc.C = *C;
  doc.C0 = *C0;
  doc.R_circ = *R_circ;
  doc.rho = *rho;
  try {
    doc.frame().validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError("R_circ", e.what());
  }
  return doc;
}

inline std::string serialize_instance(const InstanceDoc& doc) {
  std::string out;
  out += "dimension " + std::to_string(doc.dimension) + "\n";
  out += "A " + format_mat(doc.P.A) + "\n";
  out += "b " + format_vec(doc.P.b) + "\n";
  out += "C " + format_vec(doc.C) + "\n";
  out += "R_circ " + format_double(doc.R_circ) + "\n";
  out += "C0 " + format_vec(doc.C0) + "\n";
  out += "rho " + format_double(doc.rho) + "\n";
  if (doc.tol) out += "tol " + format_double(*doc.tol) + "\n";
  if (doc.tol_feas) out += "tol_feas " + format_double(*doc.tol_feas) + "\n";
  if (doc.max_iters) out += "max_iters " + std::to_string(*doc.max_iters) + "\n";
  if (doc.max_generations)
    out += "max_generations " + std::to_string(*doc.max_generations) + "\n";
  if (doc.bracket)
    out += "bracket [" + format_double(doc.bracket->first) + "," +
           format_double(doc.bracket->second) + "]\n";
  return out;
}

inline InstanceDoc load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

// Writes via a temporary in the same directory plus rename, so readers never
// observe a half-written file.
inline void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

inline std::string render_report(const BoundsReport& report, double wall_ms) {
  std::string out;
  out += "upper_bound " + format_double(report.upper_bound) + "\n";
  out += "lower_bound " + format_double(report.lower_bound) + "\n";
  out += "y_star " + (report.y_star.size() ? format_vec(report.y_star) : std::string("[]")) + "\n";
  out += "x_lb " + (report.x_lb.size() ? format_vec(report.x_lb) : std::string("[]")) + "\n";
  out += std::string("on_sphere ") + (report.on_sphere ? "true" : "false") + "\n";
  out += "generations_used " + std::to_string(report.generations_used) + "\n";
  out += "exit_generation " +
         (report.chain_exited ? std::to_string(report.generations_used) : std::string("none")) +
         "\n";
  out += std::string("chain_exited ") + (report.chain_exited ? "true" : "false") + "\n";
  out += std::string("indeterminate ") + (report.indeterminate ? "true" : "false") + "\n";
  out += std::string("collinearity_flagged ") + (report.collinearity_flagged ? "true" : "false") +
         "\n";
  out += std::string("containment_verified ") + (report.containment_verified ? "true" : "false") +
         "\n";
  out += "fixed_point_residual " + format_double(report.fixed_point_residual) + "\n";
  out += "feasibility_probes " + std::to_string(report.feasibility_probes) + "\n";
  if (!report.notes.empty()) out += "notes " + report.notes + "\n";
  out += "wall_ms " + format_double(wall_ms) + "\n";
  return out;
}

// `key value` configuration text; doubles as the config-file reader.
inline std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto sep = line.find_first_of(" \t=", start);
    if (sep == std::string::npos) continue;
    const std::string key = line.substr(start, sep - start);
    auto vstart = line.find_first_not_of(" \t=", sep);
    if (vstart == std::string::npos) continue;
    std::string value = line.substr(vstart);
    const auto vend = value.find_last_not_of(" \t\r");
    value = value.substr(0, vend + 1);
    out[key] = value;
  }
  return out;
}

}  // namespace polydist
