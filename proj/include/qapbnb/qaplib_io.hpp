#ifndef QAPBNB_QAPLIB_IO_HPP_
#define QAPBNB_QAPLIB_IO_HPP_

#include <cctype>
#include <charconv>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "qapbnb/common.hpp"
#include "qapbnb/model.hpp"

namespace qapbnb {

namespace detail {

inline std::vector<double> tokenize_numbers(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(ParseError::Kind::NonNumeric, "non-numeric token '" + tok + "'");
    }
  }
  return out;
}

inline void check_symmetric(const Matrix& m, const char* label) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < i; ++j)
      if (m(i, j) != m(j, i))
        throw ParseError(ParseError::Kind::Asymmetric,
                         std::string("matrix ") + label + " asymmetric at (" +
                             std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
}

}  // namespace detail

/// Parse a QAPLIB .dat file: n, then n*n entries of A, n*n of B, and an
/// optional third n*n block read as C (zero when absent).
inline QapInstance parse_instance(const std::string& text, const std::string& name = "") {
  std::vector<double> tok = detail::tokenize_numbers(text);
  if (tok.empty()) throw ParseError(ParseError::Kind::TokenCount, "empty input");
  double n_raw = tok[0];
  if (!nearly_integral(n_raw) || n_raw < 2 || n_raw > 10000)
    throw ParseError(ParseError::Kind::SizeOutOfRange,
                     "instance size out of range: " + std::to_string(n_raw));
  const int n = static_cast<int>(std::llround(n_raw));
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  const std::size_t rest = tok.size() - 1;
  if (rest != 2 * nn && rest != 3 * nn)
    throw ParseError(ParseError::Kind::TokenCount,
                     "expected " + std::to_string(2 * nn) + " or " + std::to_string(3 * nn) +
                         " matrix entries, got " + std::to_string(rest));

  auto read_block = [&](std::size_t offset) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = tok[1 + offset + static_cast<std::size_t>(i) * n + j];
    return m;
  };
  QapInstance inst;
  inst.n = n;
  inst.A = read_block(0);
  inst.B = read_block(nn);
  inst.C = rest == 3 * nn ? read_block(2 * nn) : Matrix::Zero(n, n);
  inst.name = name;
  detail::check_symmetric(inst.A, "A");
  detail::check_symmetric(inst.B, "B");
  return inst;
}

inline QapInstance parse_instance(std::istream& in, const std::string& name = "") {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), name);
}

/// Emit a QAPLIB .sln file: "n value" header, then the permutation
/// (1-based).  The value is re-checked against the objective.
inline std::string write_solution(const QapInstance& inst, double value,
                                  const std::vector<int>& perm) {
  double actual = objective(inst, perm);
  if (actual != value)
    throw ParseError(ParseError::Kind::ValueMismatch,
                     "solution value " + std::to_string(value) + " does not match objective " +
                         std::to_string(actual));
  std::ostringstream out;
  auto put_num = [&out](double v) {
    if (nearly_integral(v))
      out << static_cast<long long>(std::llround(v));
    else
      out << v;
  };
  out << inst.n << " ";
  put_num(value);
  out << "\n";
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (i) out << " ";
    out << perm[i] + 1;
  }
  return out.str();
}

/// Parse a .sln-style permutation (1-based entries; an optional leading
/// "n value" header is accepted and skipped).
inline std::vector<int> parse_permutation(const std::string& text, int n) {
  std::vector<double> tok = detail::tokenize_numbers(text);
  std::size_t offset = 0;
  if (tok.size() == static_cast<std::size_t>(n) + 2) offset = 2;  // header line
  if (tok.size() - offset != static_cast<std::size_t>(n))
    throw ParseError(ParseError::Kind::TokenCount,
                     "expected a permutation of length " + std::to_string(n));
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) {
    double v = tok[offset + i];
    if (!nearly_integral(v)) throw ParseError(ParseError::Kind::NonNumeric, "fractional entry");
    perm[i] = static_cast<int>(std::llround(v)) - 1;
  }
  if (!is_permutation(perm, n))
    throw ParseError(ParseError::Kind::NonNumeric, "not a permutation of 1..n");
  return perm;
}

}  // namespace qapbnb

#endif  // QAPBNB_QAPLIB_IO_HPP_
