#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace poiseiv {

/// Paired observations: non-negative counts y and covariate values w.
/// Construction enforces equal lengths, at least two observations and a
/// covariate with at least two distinct values (a constant covariate makes
/// the score Jacobian singular).
class Dataset {
 public:
  Dataset(std::vector<std::int64_t> counts, std::vector<double> covariate);

  const std::vector<std::int64_t>& y() const { return y_; }
  const std::vector<double>& w() const { return w_; }
  std::size_t size() const { return y_.size(); }

 private:
  std::vector<std::int64_t> y_;
  std::vector<double> w_;
};

/// CSV exchange format: header "y,w", one observation per line, LF or CRLF.
/// Counts must be plain base-10 integers. Throws ParseError with the
/// offending line number.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv_file(const std::string& path);
void write_dataset_csv(std::ostream& out, const Dataset& data);

}  // namespace poiseiv
