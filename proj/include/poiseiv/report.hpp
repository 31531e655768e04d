#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "poiseiv/sim_harness.hpp"

namespace poiseiv {

/// 17 significant digits; round-trips doubles exactly. Used for every
/// floating-point value in machine-readable output.
std::string format_full(double v);

/// 4 significant digits for human-facing tables.
std::string format_brief(double v);

/// Minimal JSON emitter with caller-controlled key order and format_full
/// number formatting. Non-finite doubles become null.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(double v);
  JsonWriter& value(bool v);
  JsonWriter& value(int v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }

  const std::string& str() const { return out_; }

 private:
  void before_item();
  void append_escaped(std::string_view s);

  struct Level {
    bool first = true;
  };

  std::string out_;
  std::vector<Level> levels_;
  bool pending_value_ = false;
};

struct LabeledRows {
  std::string label;
  std::vector<TheoryRow> rows;
};

/// CSV of theory-versus-simulation rows, full precision. The output is a
/// pure function of the rows, so a fixed scenario and seed give the same
/// bytes regardless of how many workers produced them.
std::string theory_table_csv(const std::vector<LabeledRows>& cases);

}  // namespace poiseiv
