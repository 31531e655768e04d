#include "poiseiv/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "poiseiv/errors.hpp"

namespace poiseiv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t lineno, const std::string& what) {
  throw ParseError("csv line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

Dataset::Dataset(std::vector<std::int64_t> counts, std::vector<double> covariate)
    : y_(std::move(counts)), w_(std::move(covariate)) {
  if (y_.size() != w_.size())
    throw std::invalid_argument("y and w must have the same length");
  if (y_.size() < 2) throw std::invalid_argument("need at least two observations");
  for (const auto v : y_)
    if (v < 0) throw std::invalid_argument("counts must be non-negative");
  bool distinct = false;
  for (const auto v : w_) {
    if (!std::isfinite(v)) throw std::invalid_argument("covariate values must be finite");
    if (v != w_.front()) distinct = true;
  }
  if (!distinct)
    throw std::invalid_argument("covariate must take at least two distinct values");
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError("empty input: expected a 'y,w' header");
  if (trim(line) != "y,w") fail(lineno, "expected header 'y,w'");

  std::vector<std::int64_t> y;
  std::vector<double> w;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const std::size_t comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
      fail(lineno, "expected exactly two comma-separated fields");

    const std::string_view ytok = trim(row.substr(0, comma));
    const std::string_view wtok = trim(row.substr(comma + 1));

    std::int64_t yv = 0;
    auto [yp, yec] = std::from_chars(ytok.data(), ytok.data() + ytok.size(), yv);
    if (yec != std::errc() || yp != ytok.data() + ytok.size() || ytok.empty())
      fail(lineno, "'" + std::string(ytok) + "' is not an integer count");
    if (yv < 0) fail(lineno, "counts must be non-negative");

    double wv = 0.0;
    auto [wp, wec] = std::from_chars(wtok.data(), wtok.data() + wtok.size(), wv);
    if (wec != std::errc() || wp != wtok.data() + wtok.size() || wtok.empty())
      fail(lineno, "'" + std::string(wtok) + "' is not a real number");

    y.push_back(yv);
    w.push_back(wv);
  }
  return Dataset(std::move(y), std::move(w));
}

Dataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  out << "y,w\n";
  char buf[64];
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g\n", static_cast<long long>(data.y()[i]),
                  data.w()[i]);
    out << buf;
  }
}

}  // namespace poiseiv
