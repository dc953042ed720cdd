#pragma once

// Matrix dump format:
//   out_modes,m0,m1,...
//   in_modes,n0,n1,...
//   one row per output mode, entries as re+imi separated by commas

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "circleop/literal.hpp"
#include "circleop/operator.hpp"

namespace circleop {

namespace detail {

inline void write_modes(std::ostream& os, const char* label, ModeWindow w) {
  os << label;
  for (int m = w.lo; m <= w.hi; ++m) os << ',' << m;
  os << '\n';
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline ModeWindow read_modes(std::istream& is, const char* label) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(std::string("missing ") + label + " row", 0);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto cells = split_csv(line);
  if (cells.empty() || cells[0] != label) throw ParseError(std::string("expected ") + label + " header", 0);
  if (cells.size() == 1) return {0, -1};
  ModeWindow w{std::stoi(cells[1]), std::stoi(cells.back())};
  if (w.size() != static_cast<int>(cells.size()) - 1) throw ParseError(std::string(label) + " not contiguous", 0);
  for (int k = 1; k < static_cast<int>(cells.size()); ++k)
    if (std::stoi(cells[k]) != w.lo + k - 1) throw ParseError(std::string(label) + " not contiguous", 0);
  return w;
}

}  // namespace detail

inline void write_matrix_csv(std::ostream& os, const OperatorMatrix& T) {
  detail::write_modes(os, "out_modes", T.out_window);
  detail::write_modes(os, "in_modes", T.in_window);
  for (int r = 0; r < T.entries.rows(); ++r) {
    for (int c = 0; c < T.entries.cols(); ++c) {
      if (c) os << ',';
      os << format_complex(T.entries(r, c));
    }
    os << '\n';
  }
}

inline OperatorMatrix read_matrix_csv(std::istream& is) {
  OperatorMatrix T;
  T.out_window = detail::read_modes(is, "out_modes");
  T.in_window = detail::read_modes(is, "in_modes");
  T.entries = Eigen::MatrixXcd::Zero(T.out_window.size(), T.in_window.size());
  std::string line;
  for (int r = 0; r < T.out_window.size(); ++r) {
    if (!std::getline(is, line)) throw ParseError("missing matrix row " + std::to_string(r), 0);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cells = detail::split_csv(line);
    if (static_cast<int>(cells.size()) != T.in_window.size())
      throw ParseError("row " + std::to_string(r) + " has wrong column count", 0);
    for (int c = 0; c < T.in_window.size(); ++c) T.entries(r, c) = parse_complex(cells[c]);
  }
  return T;
}

}  // namespace circleop
