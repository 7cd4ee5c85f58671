// Copyright 2026 The topicteach Authors.
//
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

#ifndef TOPICTEACH_LOG_MATH_HPP
#define TOPICTEACH_LOG_MATH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace topicteach {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Running log-sum-exp over a stream of log values.
/**
 * Keeps the sum relative to the running maximum, rescaling when a larger value arrives, and uses
 * compensated (Neumaier) summation for the shifted terms. Two accumulators can be merged, so
 * partial sums over disjoint ranges combine into the total.
 */
class LogSumAccumulator {
 public:
  void add(double log_value) noexcept {
    if (log_value == kNegInf) {
      return;
    }
    if (max_ == kNegInf) {
      max_ = log_value;
      sum_ = 1.0;
      compensation_ = 0.0;
      return;
    }
    if (log_value > max_) {
      const double scale = std::exp(max_ - log_value);
      sum_ *= scale;
      compensation_ *= scale;
      max_ = log_value;
      accumulate(1.0);
    } else {
      accumulate(std::exp(log_value - max_));
    }
  }

  void merge(const LogSumAccumulator& other) noexcept {
    if (other.max_ == kNegInf) {
      return;
    }
    if (max_ == kNegInf) {
      *this = other;
      return;
    }
    if (other.max_ > max_) {
      const double scale = std::exp(max_ - other.max_);
      const double mine = (sum_ + compensation_) * scale;
      *this = other;
      accumulate(mine);
    } else {
      accumulate((other.sum_ + other.compensation_) * std::exp(other.max_ - max_));
    }
  }

  [[nodiscard]] double value() const noexcept {
    if (max_ == kNegInf) {
      return kNegInf;
    }
    return max_ + std::log(sum_ + compensation_);
  }

 private:
  void accumulate(double term) noexcept {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      compensation_ += (sum_ - t) + term;
    } else {
      compensation_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  double max_ = kNegInf;
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// log(sum(exp(values))), or -inf for an empty range or all -inf entries.
inline double log_sum_exp(std::span<const double> values) noexcept {
  const auto it = std::max_element(values.begin(), values.end());
  if (it == values.end() || *it == kNegInf) {
    return kNegInf;
  }
  const double max = *it;
  double sum = 0.0;
  for (double v : values) {
    sum += std::exp(v - max);
  }
  return max + std::log(sum);
}

/// log(mean(exp(values))).
inline double log_mean_exp(std::span<const double> values) noexcept {
  if (values.empty()) {
    return kNegInf;
  }
  return log_sum_exp(values) - std::log(static_cast<double>(values.size()));
}

/// Exponentiate after shifting by the maximum and normalize to sum 1.
/**
 * All -inf entries yield an all-zero vector.
 */
inline std::vector<double> normalize_log(std::span<const double> log_values) {
  std::vector<double> out(log_values.size(), 0.0);
  const double total = log_sum_exp(log_values);
  if (total == kNegInf) {
    return out;
  }
  for (std::size_t i = 0; i < log_values.size(); ++i) {
    out[i] = std::exp(log_values[i] - total);
  }
  return out;
}

}  // namespace topicteach

#endif  // TOPICTEACH_LOG_MATH_HPP
