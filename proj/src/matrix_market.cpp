#include "smash/matrix_market.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "smash/error.hpp"

namespace smash {

namespace {

enum class Field { real, integer, pattern };
enum class Symmetry { general, symmetric, skew };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}


// Splits on blanks.
std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

Index parse_count(std::string_view tok, std::size_t line, const char* what) {
  Index v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  }
  return v;
}

double parse_value(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "bad value '" + std::string(tok) + "'");
  }
  return v;
}

struct Pending {
  Entry entry;
  std::size_t line;
};

}  // namespace

CoordinateMatrix load_matrix_market(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;

  if (!std::getline(in, text)) throw ParseError(1, "empty input");
  ++line_no;
  auto header = split(text);
  if (header.size() != 5 || header[0] != "%%MatrixMarket") {
    throw ParseError(line_no, "missing %%MatrixMarket header");
  }
  if (lower(std::string(header[1])) != "matrix" || lower(std::string(header[2])) != "coordinate") {
    throw ParseError(line_no, "only 'matrix coordinate' files are supported");
  }
  Field field;
  std::string f = lower(std::string(header[3]));
  if (f == "real" || f == "double") {
    field = Field::real;
  } else if (f == "integer") {
    field = Field::integer;
  } else if (f == "pattern") {
    field = Field::pattern;
  } else {
    throw ParseError(line_no, "unsupported field '" + f + "'");
  }
  Symmetry sym;
  std::string s = lower(std::string(header[4]));
  if (s == "general") {
    sym = Symmetry::general;
  } else if (s == "symmetric") {
    sym = Symmetry::symmetric;
  } else if (s == "skew-symmetric") {
    sym = Symmetry::skew;
  } else {
    throw ParseError(line_no, "unsupported symmetry '" + s + "'");
  }

  // Size line: first non-comment, non-blank line.
  std::vector<std::string_view> toks;
  while (true) {
    if (!std::getline(in, text)) throw ParseError(line_no + 1, "missing size line");
    ++line_no;
    if (!text.empty() && text[0] == '%') continue;
    toks = split(text);
    if (!toks.empty()) break;
  }
  if (toks.size() != 3) throw ParseError(line_no, "size line needs 'rows cols nnz'");
  const Index rows = parse_count(toks[0], line_no, "row count");
  const Index cols = parse_count(toks[1], line_no, "column count");
  const Index declared = parse_count(toks[2], line_no, "entry count");
  if (sym != Symmetry::general && rows != cols) {
    throw ParseError(line_no, "symmetric storage requires a square matrix");
  }

  const std::size_t expected_tokens = field == Field::pattern ? 2 : 3;
  std::vector<Pending> pending;
  pending.reserve(sym == Symmetry::general ? declared : 2 * declared);
  Index seen = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text[0] == '%') continue;
    toks = split(text);
    if (toks.empty()) continue;
    if (toks.size() != expected_tokens) {
      throw ParseError(line_no, "expected " + std::to_string(expected_tokens) + " fields");
    }
    if (seen == declared) throw ParseError(line_no, "more entries than declared");
    ++seen;
    const Index r = parse_count(toks[0], line_no, "row index");
    const Index c = parse_count(toks[1], line_no, "column index");
    if (r < 1 || r > rows || c < 1 || c > cols) {
      throw ParseError(line_no, "index (" + std::string(toks[0]) + ", " + std::string(toks[1]) +
                                    ") out of range");
    }
    const double v = field == Field::pattern ? 1.0 : parse_value(toks[2], line_no);
    if (sym != Symmetry::general && c > r) {
      throw ParseError(line_no, "symmetric storage must list the lower triangle only");
    }
    if (sym == Symmetry::skew && r == c) {
      throw ParseError(line_no, "skew-symmetric matrix has a diagonal entry");
    }
    pending.push_back({{r - 1, c - 1, v}, line_no});
    if (sym != Symmetry::general && r != c) {
      pending.push_back({{c - 1, r - 1, sym == Symmetry::skew ? -v : v}, line_no});
    }
  }
  if (seen != declared) {
    throw ParseError(line_no, "declared " + std::to_string(declared) + " entries, found " +
                                  std::to_string(seen));
  }

  std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    return a.entry.row != b.entry.row ? a.entry.row < b.entry.row : a.entry.col < b.entry.col;
  });
  for (std::size_t i = 1; i < pending.size(); ++i) {
    if (pending[i].entry.row == pending[i - 1].entry.row &&
        pending[i].entry.col == pending[i - 1].entry.col) {
      const std::size_t at = std::max(pending[i].line, pending[i - 1].line);
      throw ParseError(at, "duplicate coordinate (" + std::to_string(pending[i].entry.row + 1) +
                               ", " + std::to_string(pending[i].entry.col + 1) + ")");
    }
  }

  std::vector<Entry> entries;
  entries.reserve(pending.size());
  for (const Pending& p : pending) entries.push_back(p.entry);
  return CoordinateMatrix(rows, cols, std::move(entries));
}

CoordinateMatrix load_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  return load_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CoordinateMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  std::array<char, 64> buf;
  for (const Entry& e : m.entries()) {
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), e.value);
    out << e.row + 1 << ' ' << e.col + 1 << ' ' << std::string_view(buf.data(), ptr - buf.data())
        << '\n';
  }
}

void write_matrix_market_file(const std::string& path, const CoordinateMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  write_matrix_market(out, m);
}

}  // namespace smash
