#include "rally/pmf.hpp"

#include <algorithm>
#include <cmath>

namespace rally {

DurationPMF::DurationPMF(int offset, std::vector<double> masses, double truncation_bound)
    : offset_(offset), masses_(std::move(masses)), truncation_bound_(truncation_bound) {
  trim();
}

DurationPMF DurationPMF::point_mass(int d) { return DurationPMF(d, {1.0}, 0.0); }

void DurationPMF::trim() {
  std::size_t lo = 0;
  while (lo < masses_.size() && masses_[lo] == 0.0) ++lo;
  if (lo == masses_.size()) {
    masses_.clear();
    return;
  }
  std::size_t hi = masses_.size();
  while (hi > lo && masses_[hi - 1] == 0.0) --hi;
  masses_ = std::vector<double>(masses_.begin() + static_cast<std::ptrdiff_t>(lo),
                                masses_.begin() + static_cast<std::ptrdiff_t>(hi));
  offset_ += static_cast<int>(lo);
}

double DurationPMF::mass(int d) const {
  if (d < offset_ || d > last()) return 0.0;
  return masses_[static_cast<std::size_t>(d - offset_)];
}

double DurationPMF::cdf(int d) const {
  double acc = 0.0;
  for (int x = offset_; x <= std::min(d, last()); ++x) acc += masses_[static_cast<std::size_t>(x - offset_)];
  return acc;
}

double DurationPMF::total_mass() const {
  double acc = 0.0;
  for (double m : masses_) acc += m;
  return acc;
}

double DurationPMF::mean() const {
  double total = 0.0, first = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    total += masses_[i];
    first += masses_[i] * static_cast<double>(offset_ + static_cast<int>(i));
  }
  return total > 0.0 ? first / total : 0.0;
}

double DurationPMF::variance() const {
  const double mu = mean();
  double total = 0.0, second = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    const double dev = static_cast<double>(offset_ + static_cast<int>(i)) - mu;
    total += masses_[i];
    second += masses_[i] * dev * dev;
  }
  return total > 0.0 ? second / total : 0.0;
}

bool DurationPMF::single_parity() const {
  bool seen[2] = {false, false};
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (masses_[i] > 0.0) seen[(offset_ + static_cast<int>(i)) & 1] = true;
  }
  return !(seen[0] && seen[1]);
}

void DurationPMF::add_scaled(const DurationPMF& other, double weight) {
  truncation_bound_ += weight * other.truncation_bound_;
  if (other.masses_.empty() || weight == 0.0) return;
  if (masses_.empty()) {
    offset_ = other.offset_;
    masses_.assign(other.masses_.size(), 0.0);
  }
  const int lo = std::min(offset_, other.offset_);
  const int hi = std::max(last(), other.last());
  if (lo < offset_ || hi > last()) {
    std::vector<double> grown(static_cast<std::size_t>(hi - lo + 1), 0.0);
    std::copy(masses_.begin(), masses_.end(), grown.begin() + (offset_ - lo));
    masses_ = std::move(grown);
    offset_ = lo;
  }
  for (std::size_t i = 0; i < other.masses_.size(); ++i) {
    masses_[static_cast<std::size_t>(other.offset_ - offset_) + i] += weight * other.masses_[i];
  }
}

DurationPMF DurationPMF::scaled(double weight) const {
  DurationPMF out;
  out.add_scaled(*this, weight);
  return out;
}

DurationPMF DurationPMF::convolve(const DurationPMF& other) const {
  const double bound = truncation_bound_ + total_mass() * other.truncation_bound_;
  if (masses_.empty() || other.masses_.empty()) return DurationPMF(0, {}, bound);
  std::vector<double> out(masses_.size() + other.masses_.size() - 1, 0.0);
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (masses_[i] == 0.0) continue;
    for (std::size_t j = 0; j < other.masses_.size(); ++j) out[i + j] += masses_[i] * other.masses_[j];
  }
  return DurationPMF(offset_ + other.offset_, std::move(out), bound);
}

double total_variation(const DurationPMF& a, const DurationPMF& b) {
  if (a.empty() && b.empty()) return 0.0;
  int lo = a.empty() ? b.offset() : (b.empty() ? a.offset() : std::min(a.offset(), b.offset()));
  int hi = std::max(a.last(), b.last());
  double acc = 0.0;
  for (int d = lo; d <= hi; ++d) acc += std::abs(a.mass(d) - b.mass(d));
  return 0.5 * acc;
}

}  // namespace rally
