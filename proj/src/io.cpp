// Copyright 2026 The twistlab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "twistlab/io.hpp"

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "twistlab/errors.hpp"

namespace twistlab {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

bool is_integer_text(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

int significant_digits(std::string_view s) {
  int digits = 0;
  bool leading = true;
  for (char c : s) {
    if (c == 'e' || c == 'E') break;
    if (!std::isdigit(static_cast<unsigned char>(c))) continue;
    if (leading && c == '0') continue;
    leading = false;
    ++digits;
  }
  return digits;
}

long double parse_float(std::string_view text, const std::string& where) {
  std::string buf(text);
  char* end = nullptr;
  long double v = std::strtold(buf.c_str(), &end);
  if (buf.empty() || *end != '\0' || !std::isfinite(v)) throw UsageError(where + ": cannot parse '" + buf + "'");
  return v;
}

struct Cell {
  std::string text;
  std::size_t line;
  std::size_t column;
};

enum class Kind { Integer, Exact, Float };

Kind classify_entry(const Cell& c) {
  if (is_integer_text(c.text)) return Kind::Integer;
  if (c.text.find('/') != std::string::npos) return Kind::Exact;
  return Kind::Float;
}

std::string at(const Cell& c) { return "line " + std::to_string(c.line) + ", column " + std::to_string(c.column); }

MatrixSpec build_matrix(std::size_t n, std::size_t m, const std::vector<Cell>& cells) {
  const Cell* first_exact = nullptr;
  const Cell* first_float = nullptr;
  for (const auto& c : cells) {
    Kind k = classify_entry(c);
    if (k == Kind::Exact && !first_exact) first_exact = &c;
    if (k == Kind::Float && !first_float) first_float = &c;
  }
  if (first_exact && first_float) {
    const Cell* later = first_exact->line > first_float->line ||
                                (first_exact->line == first_float->line && first_exact->column > first_float->column)
                            ? first_exact
                            : first_float;
    throw UsageError("mixed exact and float entries in one matrix at " + at(*later) + " ('" + later->text + "')");
  }
  if (!first_float) {
    std::vector<Rational> entries;
    for (const auto& c : cells) {
      auto r = Rational::parse(c.text);
      if (!r) throw UsageError("cannot parse entry '" + c.text + "' at " + at(c));
      entries.push_back(*r);
    }
    return MatrixSpec::exact(n, m, std::move(entries));
  }
  std::vector<long double> entries;
  std::vector<std::string> source;
  int digits = 1 << 20;
  for (const auto& c : cells) {
    entries.push_back(parse_float(c.text, at(c)));
    source.push_back(c.text);
    if (classify_entry(c) == Kind::Float) digits = std::min(digits, significant_digits(c.text));
  }
  return MatrixSpec::floating(n, m, std::move(entries), digits, std::move(source));
}

MatrixSpec float_preset(std::size_t n, std::size_t m, std::vector<std::string> texts) {
  std::vector<long double> v;
  int digits = 1 << 20;
  for (const auto& t : texts) {
    v.push_back(std::strtold(t.c_str(), nullptr));
    digits = std::min(digits, significant_digits(t));
  }
  return MatrixSpec::floating(n, m, std::move(v), digits, std::move(texts));
}

MatrixSpec random_rational(std::string_view args) {
  auto parts = split(args, ',');
  if (parts.size() != 4) throw UsageError("rand-rational expects (seed,n,m,den)");
  std::uint64_t seed = 0;
  std::int64_t vals[3];
  try {
    seed = std::stoull(std::string(parts[0]));
    for (int i = 0; i < 3; ++i) vals[i] = std::stoll(std::string(parts[i + 1]));
  } catch (const std::exception&) {
    throw UsageError("rand-rational arguments must be integers");
  }
  if (vals[0] < 1 || vals[1] < 1 || vals[2] < 1) throw UsageError("rand-rational needs n, m, den >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Rational> e;
  for (std::int64_t k = 0; k < vals[0] * vals[1]; ++k) {
    auto num = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(vals[2]));
    e.emplace_back(num, vals[2]);
  }
  return MatrixSpec::exact(static_cast<std::size_t>(vals[0]), static_cast<std::size_t>(vals[1]), std::move(e));
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"golden", "sqrt2", "sqrt2-sqrt3-row", "liouville-like", "rand-rational(seed,n,m,den)"};
}

MatrixSpec preset_matrix(std::string_view name) {
  name = trim(name);
  if (name == "golden") return float_preset(1, 1, {kGoldenRatioText});
  if (name == "sqrt2") return float_preset(1, 1, {kSqrt2Text});
  if (name == "sqrt2-sqrt3-row") return float_preset(1, 2, {kSqrt2Text, kSqrt3Text});
  if (name == "liouville-like") return float_preset(1, 1, {kLiouvilleText});
  constexpr std::string_view kRand = "rand-rational(";
  if (name.substr(0, kRand.size()) == kRand && name.back() == ')') {
    return random_rational(name.substr(kRand.size(), name.size() - kRand.size() - 1));
  }
  throw UsageError("unknown matrix preset '" + std::string(name) + "'");
}

MatrixSpec parse_matrix_text(std::string_view text) {
  std::vector<std::vector<Cell>> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Cell> cells;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) cells.push_back({std::string(line.substr(start, i - start)), line_no, start + 1});
    }
    if (!cells.empty()) lines.push_back(std::move(cells));
    pos = nl + 1;
  }
  if (lines.empty()) throw UsageError("matrix text is empty (line 1, column 1)");
  const auto& header = lines.front();
  if (header.size() != 2 || !is_integer_text(header[0].text) || !is_integer_text(header[1].text)) {
    throw UsageError("first line must be 'n m' at line " + std::to_string(header.front().line) + ", column 1");
  }
  const long long n = std::stoll(header[0].text);
  const long long m = std::stoll(header[1].text);
  if (n < 1 || m < 1) throw UsageError("matrix shape must be positive at line " + std::to_string(header[0].line));
  if (static_cast<long long>(lines.size()) - 1 != n) {
    throw UsageError("expected " + std::to_string(n) + " matrix rows, found " + std::to_string(lines.size() - 1));
  }
  std::vector<Cell> cells;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (static_cast<long long>(lines[r].size()) != m) {
      throw UsageError("expected " + std::to_string(m) + " entries at line " + std::to_string(lines[r].front().line) +
                       ", column 1, found " + std::to_string(lines[r].size()));
    }
    for (auto& c : lines[r]) cells.push_back(c);
  }
  return build_matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(m), cells);
}

MatrixSpec load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open matrix file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_matrix_text(ss.str());
}

MatrixSpec load_matrix(std::string_view source) {
  source = trim(source);
  if (source.substr(0, 5) == "file:") return load_matrix_file(std::string(source.substr(5)));
  if (!source.empty() && (std::isdigit(static_cast<unsigned char>(source.front())) || source.front() == '-' ||
                          source.front() == '+' || source.front() == '.')) {
    auto rows = split(source, ';');
    std::vector<Cell> cells;
    std::size_t m = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto entries = split(rows[r], ',');
      if (r == 0) m = entries.size();
      if (entries.size() != m) throw UsageError("inline matrix row " + std::to_string(r + 1) + " has wrong length");
      for (std::size_t c = 0; c < entries.size(); ++c) cells.push_back({std::string(entries[c]), r + 1, c + 1});
    }
    return build_matrix(rows.size(), m, cells);
  }
  return preset_matrix(source);
}

std::vector<Scalar> parse_scalar_list(std::string_view text) {
  std::vector<Scalar> out;
  for (auto part : split(text, ',')) {
    auto s = Scalar::parse(part);
    if (!s) throw UsageError("cannot parse number '" + std::string(part) + "'");
    out.push_back(*s);
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& s : parse_scalar_list(text)) out.push_back(static_cast<double>(s.value()));
  return out;
}

WeightVector parse_weights(std::string_view text) { return WeightVector(parse_scalar_list(text)); }

ApproxTuple parse_psi(std::string_view text, std::size_t n) {
  std::vector<ApproxFunction> fns;
  for (auto part : split(text, ';')) {
    if (part.substr(0, 4) == "pow:") {
      auto v = parse_scalar_list(part.substr(4));
      if (v.size() != 2) throw UsageError("pow: expects 'pow:c,tau'");
      fns.emplace_back(PowerLaw{v[0].value(), v[1].value()});
    } else if (part.substr(0, 4) == "tab:") {
      Tabulated t;
      for (auto sample : split(part.substr(4), ',')) {
        auto eq = sample.find('=');
        if (eq == std::string_view::npos) throw UsageError("tab: samples are 'r=y'");
        auto r = Scalar::parse(sample.substr(0, eq));
        auto y = Scalar::parse(sample.substr(eq + 1));
        if (!r || !y) throw UsageError("cannot parse tabulated sample '" + std::string(sample) + "'");
        t.samples.emplace_back(r->value(), y->value());
      }
      fns.emplace_back(std::move(t));
    } else if (part.substr(0, 6) == "const:") {
      auto v = Scalar::parse(part.substr(6));
      if (!v) throw UsageError("const: expects a number");
      fns.emplace_back(Tabulated{{{1.0L, v->value()}}});
    } else {
      throw UsageError("psi function '" + std::string(part) + "' must start with pow:, tab: or const:");
    }
  }
  if (fns.size() == 1 && n > 1) fns.assign(n, fns.front());
  if (fns.size() != n) {
    throw UsageError("psi has " + std::to_string(fns.size()) + " functions, matrix has " + std::to_string(n) + " rows");
  }
  return ApproxTuple(std::move(fns));
}

}  // namespace twistlab
