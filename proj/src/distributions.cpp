#include "poiseiv/distributions.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "poiseiv/errors.hpp"

namespace poiseiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_domain(const DistSpec& spec, double t) {
  const MgfDomain dom = mgf_domain(spec);
  if (!dom.contains(t)) {
    throw DomainError("mgf argument " + fmt_g(t) + " outside the domain (" + fmt_g(dom.lo) +
                      ", " + fmt_g(dom.hi) + ") of " + format_dist_spec(spec));
  }
}

double parse_number(std::string_view token, std::string_view full) {
  double out = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end || token.empty()) {
    throw ParseError("bad law spec '" + std::string(full) + "': '" + std::string(token) +
                     "' is not a number");
  }
  return out;
}

}  // namespace

DistSpec DistSpec::gamma(double shape, double rate) {
  if (!(std::isfinite(shape) && shape > 0.0))
    throw std::invalid_argument("gamma shape must be finite and positive");
  if (!(std::isfinite(rate) && rate > 0.0))
    throw std::invalid_argument("gamma rate must be finite and positive");
  return DistSpec(DistKind::gamma, shape, rate);
}

DistSpec DistSpec::normal(double mean, double variance) {
  if (!std::isfinite(mean)) throw std::invalid_argument("normal mean must be finite");
  if (!(std::isfinite(variance) && variance >= 0.0))
    throw std::invalid_argument("normal variance must be finite and non-negative");
  return DistSpec(DistKind::normal, mean, variance);
}

DistSpec DistSpec::degenerate_zero() { return DistSpec(DistKind::degenerate_zero, 0.0, 0.0); }

double DistSpec::gamma_shape() const {
  assert(kind_ == DistKind::gamma);
  return a_;
}

double DistSpec::gamma_rate() const {
  assert(kind_ == DistKind::gamma);
  return b_;
}

double DistSpec::normal_mean() const {
  assert(kind_ == DistKind::normal);
  return a_;
}

double DistSpec::normal_variance() const {
  assert(kind_ == DistKind::normal);
  return b_;
}

MgfDomain MgfDomain::intersect(const MgfDomain& other) const {
  return {std::max(lo, other.lo), std::min(hi, other.hi)};
}

MgfDomain mgf_domain(const DistSpec& spec) {
  if (spec.kind() == DistKind::gamma) return {-kInf, spec.gamma_rate()};
  return {-kInf, kInf};
}

double cgf(const DistSpec& spec, double t) {
  check_domain(spec, t);
  switch (spec.kind()) {
    case DistKind::gamma:
      return -spec.gamma_shape() * std::log1p(-t / spec.gamma_rate());
    case DistKind::normal:
      return spec.normal_mean() * t + 0.5 * spec.normal_variance() * t * t;
    case DistKind::degenerate_zero:
      return 0.0;
  }
  return 0.0;
}

double mgf(const DistSpec& spec, double t) { return std::exp(cgf(spec, t)); }

double cgf_prime(const DistSpec& spec, double t) {
  check_domain(spec, t);
  switch (spec.kind()) {
    case DistKind::gamma:
      return spec.gamma_shape() / (spec.gamma_rate() - t);
    case DistKind::normal:
      return spec.normal_mean() + spec.normal_variance() * t;
    case DistKind::degenerate_zero:
      return 0.0;
  }
  return 0.0;
}

double cgf_double_prime(const DistSpec& spec, double t) {
  check_domain(spec, t);
  switch (spec.kind()) {
    case DistKind::gamma: {
      const double gap = spec.gamma_rate() - t;
      return spec.gamma_shape() / (gap * gap);
    }
    case DistKind::normal:
      return spec.normal_variance();
    case DistKind::degenerate_zero:
      return 0.0;
  }
  return 0.0;
}

double mean(const DistSpec& spec) {
  switch (spec.kind()) {
    case DistKind::gamma:
      return spec.gamma_shape() / spec.gamma_rate();
    case DistKind::normal:
      return spec.normal_mean();
    case DistKind::degenerate_zero:
      return 0.0;
  }
  return 0.0;
}

double variance(const DistSpec& spec) {
  switch (spec.kind()) {
    case DistKind::gamma: {
      const double rate = spec.gamma_rate();
      return spec.gamma_shape() / (rate * rate);
    }
    case DistKind::normal:
      return spec.normal_variance();
    case DistKind::degenerate_zero:
      return 0.0;
  }
  return 0.0;
}

MgfDomain mgf_domain(const SumLaw& law) {
  return mgf_domain(law.first).intersect(mgf_domain(law.second));
}

double mgf(const SumLaw& law, double t) { return std::exp(cgf(law, t)); }

double cgf(const SumLaw& law, double t) { return cgf(law.first, t) + cgf(law.second, t); }

double cgf_prime(const SumLaw& law, double t) {
  return cgf_prime(law.first, t) + cgf_prime(law.second, t);
}

double cgf_double_prime(const SumLaw& law, double t) {
  return cgf_double_prime(law.first, t) + cgf_double_prime(law.second, t);
}

double mean(const SumLaw& law) { return mean(law.first) + mean(law.second); }

double variance(const SumLaw& law) { return variance(law.first) + variance(law.second); }

std::vector<double> sample(const DistSpec& spec, RngEngine& engine, std::size_t n) {
  std::vector<double> out(n);
  switch (spec.kind()) {
    case DistKind::gamma: {
      std::gamma_distribution<double> dist(spec.gamma_shape(), 1.0 / spec.gamma_rate());
      for (auto& v : out) v = dist(engine);
      break;
    }
    case DistKind::normal: {
      const double sigma2 = spec.normal_variance();
      if (sigma2 == 0.0) {
        std::fill(out.begin(), out.end(), spec.normal_mean());
      } else {
        std::normal_distribution<double> dist(spec.normal_mean(), std::sqrt(sigma2));
        for (auto& v : out) v = dist(engine);
      }
      break;
    }
    case DistKind::degenerate_zero:
      std::fill(out.begin(), out.end(), 0.0);
      break;
  }
  return out;
}

double draw(const DistSpec& spec, RngEngine& engine) {
  switch (spec.kind()) {
    case DistKind::gamma:
      return std::gamma_distribution<double>(spec.gamma_shape(), 1.0 / spec.gamma_rate())(engine);
    case DistKind::normal: {
      const double sigma2 = spec.normal_variance();
      if (sigma2 == 0.0) return spec.normal_mean();
      return std::normal_distribution<double>(spec.normal_mean(), std::sqrt(sigma2))(engine);
    }
    case DistKind::degenerate_zero:
      return 0.0;
  }
  return 0.0;
}

RngEngine make_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32)};
  return RngEngine(seq);
}

DistSpec parse_dist_spec(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(':', start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }

  const std::string_view family = parts[0];
  if (family == "degenerate") {
    if (parts.size() != 1)
      throw ParseError("bad law spec '" + std::string(text) + "': degenerate takes no parameters");
    return DistSpec::degenerate_zero();
  }
  if (family == "gamma") {
    if (parts.size() != 3)
      throw ParseError("bad law spec '" + std::string(text) + "': expected gamma:<shape>:<rate>");
    return DistSpec::gamma(parse_number(parts[1], text), parse_number(parts[2], text));
  }
  if (family == "normal") {
    if (parts.size() != 3)
      throw ParseError("bad law spec '" + std::string(text) +
                       "': expected normal:<mean>:<variance>");
    return DistSpec::normal(parse_number(parts[1], text), parse_number(parts[2], text));
  }
  throw ParseError("bad law spec '" + std::string(text) +
                   "': unknown family (expected gamma, normal or degenerate)");
}

std::string format_dist_spec(const DistSpec& spec) {
  switch (spec.kind()) {
    case DistKind::gamma:
      return "gamma:" + fmt_g(spec.gamma_shape()) + ":" + fmt_g(spec.gamma_rate());
    case DistKind::normal:
      return "normal:" + fmt_g(spec.normal_mean()) + ":" + fmt_g(spec.normal_variance());
    case DistKind::degenerate_zero:
      return "degenerate";
  }
  return "";
}

}  // namespace poiseiv
