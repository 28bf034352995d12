// Copyright 2026 The qrisk Authors
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

#include <boost/math/special_functions/beta.hpp>

#include "qrisk/estimation.hpp"

namespace qrisk {

std::pair<double, double> clopper_pearson(double ones, double shots, double alpha) {
    if (!(shots > 0.0) || ones < 0.0 || ones > shots) throw EstimationError("bad binomial counts");
    const double lo = ones <= 0.0 ? 0.0 : boost::math::ibeta_inv(ones, shots - ones + 1.0, alpha / 2.0);
    const double hi = ones >= shots ? 1.0 : boost::math::ibeta_inv(ones + 1.0, shots - ones, 1.0 - alpha / 2.0);
    return {lo, hi};
}

}  // namespace qrisk
