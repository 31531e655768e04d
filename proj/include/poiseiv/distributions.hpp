#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace poiseiv {

using RngEngine = std::mt19937_64;

enum class DistKind { gamma, normal, degenerate_zero };

/// Parametric law of a covariate or of a measurement error.
///
/// Three families are supported: Gamma(shape, rate), Normal(mean, variance)
/// and the point mass at zero. Construction validates the parameters, so a
/// DistSpec value is always usable.
class DistSpec {
 public:
  static DistSpec gamma(double shape, double rate);
  /// variance 0 is allowed and degenerates to the point mass at mean.
  static DistSpec normal(double mean, double variance);
  static DistSpec degenerate_zero();

  DistKind kind() const { return kind_; }

  double gamma_shape() const;
  double gamma_rate() const;
  double normal_mean() const;
  double normal_variance() const;

 private:
  DistSpec(DistKind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

  DistKind kind_;
  double a_;
  double b_;
};

/// Open interval of arguments for which the moment generating function is
/// finite. Contains zero by construction.
struct MgfDomain {
  double lo;
  double hi;

  bool contains(double t) const { return lo < t && t < hi; }
  MgfDomain intersect(const MgfDomain& other) const;
};

MgfDomain mgf_domain(const DistSpec& spec);

/// M(t) = E[exp(tV)]. Throws DomainError outside mgf_domain(spec).
double mgf(const DistSpec& spec, double t);
/// K(t) = log M(t).
double cgf(const DistSpec& spec, double t);
/// K'(t); equals the mean at t = 0.
double cgf_prime(const DistSpec& spec, double t);
/// K''(t); equals the variance at t = 0.
double cgf_double_prime(const DistSpec& spec, double t);

double mean(const DistSpec& spec);
double variance(const DistSpec& spec);

/// Law of the sum of two independent variables (the observed covariate
/// W = X + U). MGF quantities factor through the parts; the domain is the
/// intersection of the part domains.
struct SumLaw {
  DistSpec first;
  DistSpec second;
};

MgfDomain mgf_domain(const SumLaw& law);
double mgf(const SumLaw& law, double t);
double cgf(const SumLaw& law, double t);
double cgf_prime(const SumLaw& law, double t);
double cgf_double_prime(const SumLaw& law, double t);
double mean(const SumLaw& law);
double variance(const SumLaw& law);

/// n i.i.d. draws; the output is fully determined by (spec, engine state).
std::vector<double> sample(const DistSpec& spec, RngEngine& engine, std::size_t n);
double draw(const DistSpec& spec, RngEngine& engine);

/// Independent replication stream derived from a master seed and a stream
/// index. Equal inputs give equal streams regardless of creation order, so
/// parallel consumers stay reproducible.
RngEngine make_stream(std::uint64_t master_seed, std::uint64_t stream_index);

/// Law strings: "gamma:<shape>:<rate>", "normal:<mean>:<variance>",
/// "degenerate". parse throws ParseError on malformed text; parameter
/// validation errors surface as std::invalid_argument.
DistSpec parse_dist_spec(std::string_view text);
std::string format_dist_spec(const DistSpec& spec);

}  // namespace poiseiv
