// Copyright 2026 The PrefixHH Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PREFIXHH_STATS_HPP
#define PREFIXHH_STATS_HPP

namespace prefixhh {

// Standard normal CDF.
double std_normal_cdf(double x);

// Upper tail 1 - Phi(x), accurate for large x.
double std_normal_sf(double x);

// Quantile z_p with Phi(z_p) = p, p in (0, 1). Rational initial guess
// refined by Halley steps; absolute error below 1e-12 across the usable
// range (p down to ~1e-300).
double std_normal_quantile(double p);

}  // namespace prefixhh

#endif  // PREFIXHH_STATS_HPP
