#include "poiseiv/report.hpp"

#include <cmath>
#include <cstdio>

namespace poiseiv {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_brief(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void JsonWriter::before_item() {
  if (pending_value_) {
    pending_value_ = false;
    return;
  }
  if (!levels_.empty()) {
    if (!levels_.back().first) out_ += ',';
    levels_.back().first = false;
  }
}

void JsonWriter::append_escaped(std::string_view s) {
  out_ += '"';
  for (const char c : s) {
    switch (c) {
      case '"':
        out_ += "\\\"";
        break;
      case '\\':
        out_ += "\\\\";
        break;
      case '\n':
        out_ += "\\n";
        break;
      case '\t':
        out_ += "\\t";
        break;
      case '\r':
        out_ += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
}

JsonWriter& JsonWriter::begin_object() {
  before_item();
  out_ += '{';
  levels_.push_back({});
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  levels_.pop_back();
  out_ += '}';
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  before_item();
  out_ += '[';
  levels_.push_back({});
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  levels_.pop_back();
  out_ += ']';
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
  if (!levels_.back().first) out_ += ',';
  levels_.back().first = false;
  append_escaped(name);
  out_ += ':';
  pending_value_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  before_item();
  out_ += std::isfinite(v) ? format_full(v) : "null";
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  before_item();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(int v) { return value(static_cast<std::int64_t>(v)); }

JsonWriter& JsonWriter::value(std::int64_t v) {
  before_item();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  before_item();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  before_item();
  append_escaped(v);
  return *this;
}

std::string theory_table_csv(const std::vector<LabeledRows>& cases) {
  std::string out =
      "case,estimator,"
      "asy_bias_beta0,mc_bias_beta0,asy_bias_beta1,mc_bias_beta1,"
      "asy_mse_beta0,mc_mse_beta0,asy_mse_beta1,mc_mse_beta1,"
      "mc_se_beta0,mc_se_beta1,successful,failed\n";
  for (const auto& c : cases) {
    for (const auto& row : c.rows) {
      out += c.label;
      out += ',';
      out += row.estimator;
      out += ',';
      out += format_full(row.asy_bias.c0);
      out += ',';
      out += format_full(row.mc_bias.c0);
      out += ',';
      out += format_full(row.asy_bias.c1);
      out += ',';
      out += format_full(row.mc_bias.c1);
      out += ',';
      out += format_full(row.asy_mse.c0);
      out += ',';
      out += format_full(row.mc_mse.c0);
      out += ',';
      out += format_full(row.asy_mse.c1);
      out += ',';
      out += format_full(row.mc_mse.c1);
      out += ',';
      out += format_full(row.mc_se.c0);
      out += ',';
      out += format_full(row.mc_se.c1);
      out += ',';
      out += std::to_string(row.successful);
      out += ',';
      out += std::to_string(row.failed);
      out += '\n';
    }
  }
  return out;
}

}  // namespace poiseiv
