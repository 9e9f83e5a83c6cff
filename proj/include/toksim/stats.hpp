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

#ifndef TOKSIM_STATS_HPP_
#define TOKSIM_STATS_HPP_

#include <span>

namespace toksim {

double mean(std::span<const double> xs);

// Unbiased sample standard deviation; 0 for fewer than two samples.
double sample_sd(std::span<const double> xs);

// Student t quantile at probability p with dof degrees of freedom.
double t_quantile(double p, double dof);

// Symmetric confidence interval half width for the mean of xs at the given
// confidence level, using the t distribution with |xs| - 1 degrees of
// freedom. Zero for fewer than two samples.
double ci_half_width(std::span<const double> xs, double confidence);

}  // namespace toksim

#endif  // TOKSIM_STATS_HPP_
