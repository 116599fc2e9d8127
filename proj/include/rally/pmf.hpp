#pragma once

#include <span>
#include <vector>

namespace rally {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Probability mass function of a rally count on {offset, offset+1, ...}.
///
/// Masses may be sub-stochastic: `truncation_bound` is an upper bound on
/// the probability mass that was cut off beyond the stored support, and
/// sub-distributions (joint masses of a duration and some event) are also
/// represented with this type while being accumulated.
class DurationPMF {
 public:
  DurationPMF() = default;
  DurationPMF(int offset, std::vector<double> masses, double truncation_bound = 0.0);

  static DurationPMF point_mass(int d);

  bool empty() const { return masses_.empty(); }
  int offset() const { return offset_; }
  /// Largest stored duration (offset - 1 when empty).
  int last() const { return offset_ + static_cast<int>(masses_.size()) - 1; }
  std::span<const double> masses() const { return masses_; }
  double truncation_bound() const { return truncation_bound_; }

  double mass(int d) const;
  double cdf(int d) const;
  double total_mass() const;

  /// Moments of the stored masses, renormalized by total_mass().
  double mean() const;
  double variance() const;
  Moments moments() const { return {mean(), variance()}; }

  /// True when every positive mass sits on durations of a single parity.
  bool single_parity() const;

  /// this += weight * other, including the truncation bound.
  void add_scaled(const DurationPMF& other, double weight);
  DurationPMF scaled(double weight) const;
  /// Distribution of the sum of two independent durations.
  DurationPMF convolve(const DurationPMF& other) const;

 private:
  void trim();

  int offset_ = 0;
  std::vector<double> masses_;
  double truncation_bound_ = 0.0;
};

/// Total-variation distance over the union of both supports.
double total_variation(const DurationPMF& a, const DurationPMF& b);

}  // namespace rally
