#pragma once

#include <cmath>
#include <limits>

namespace orbitlink {

/// Running log(sum exp(x_i)).  Empty accumulators report -inf.
class LogSumExp {
 public:
  void add(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
    ++count_;
  }
  void merge(const LogSumExp& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    if (other.max_ <= max_) {
      sum_ += other.sum_ * std::exp(other.max_ - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
      max_ = other.max_;
    }
    count_ += other.count_;
  }
  double value() const {
    return count_ == 0 ? -std::numeric_limits<double>::infinity() : max_ + std::log(sum_);
  }
  long long count() const { return count_; }
  bool empty() const { return count_ == 0; }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  long long count_ = 0;
};

/// Sum of value_i * exp(logw_i) kept relative to a moving scale; values may
/// have either sign.  Pairs with a LogSumExp of the same weights to form means.
class ScaledSum {
 public:
  void add(double logw, double value) {
    if (logw > scale_) {
      sum_ = (scale_ == -std::numeric_limits<double>::infinity()) ? 0.0 : sum_ * std::exp(scale_ - logw);
      scale_ = logw;
    }
    sum_ += value * std::exp(logw - scale_);
  }
  void merge(const ScaledSum& other) {
    if (other.scale_ == -std::numeric_limits<double>::infinity()) return;
    if (other.scale_ > scale_) {
      sum_ = (scale_ == -std::numeric_limits<double>::infinity()) ? 0.0 : sum_ * std::exp(scale_ - other.scale_);
      scale_ = other.scale_;
    }
    sum_ += other.sum_ * std::exp(other.scale_ - scale_);
  }
  /// Returns sum / exp(log_norm).
  double relative_to(double log_norm) const {
    if (scale_ == -std::numeric_limits<double>::infinity()) return 0.0;
    return sum_ * std::exp(scale_ - log_norm);
  }

 private:
  double scale_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace orbitlink
