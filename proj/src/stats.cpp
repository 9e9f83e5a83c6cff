// Copyright 2026 The toksim Authors
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

#include "toksim/stats.hpp"

#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "toksim/errors.hpp"

namespace toksim {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw UsageError("mean of an empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double t_quantile(double p, double dof) {
  if (!(p > 0.0) || !(p < 1.0) || !(dof > 0.0)) {
    throw UsageError("t quantile needs p in (0,1) and dof > 0");
  }
  return boost::math::quantile(boost::math::students_t(dof), p);
}

double ci_half_width(std::span<const double> xs, double confidence) {
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw UsageError("confidence level must be in (0,1)");
  }
  if (xs.size() < 2) return 0.0;
  const double t =
      t_quantile(0.5 + confidence / 2.0, static_cast<double>(xs.size() - 1));
  return t * sample_sd(xs) / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace toksim
