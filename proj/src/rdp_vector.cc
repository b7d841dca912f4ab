// Copyright 2026 The privplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privplan/rdp_vector.h"

#include <cmath>

namespace privplan {

AlphaGrid::AlphaGrid(std::vector<double> orders) {
  if (orders.empty()) throw ParameterError("alpha grid must be non-empty");
  for (size_t i = 0; i < orders.size(); ++i) {
    if (!(orders[i] > 1.0) || !std::isfinite(orders[i])) {
      throw ParameterError("alpha orders must be finite and > 1");
    }
    if (i > 0 && !(orders[i] > orders[i - 1])) {
      throw ParameterError("alpha orders must be strictly increasing");
    }
  }
  orders_ = Eigen::Map<const Eigen::ArrayXd>(orders.data(),
                                             Eigen::Index(orders.size()));
}

std::shared_ptr<const AlphaGrid> AlphaGrid::Make(std::vector<double> orders) {
  return std::make_shared<const AlphaGrid>(std::move(orders));
}

std::shared_ptr<const AlphaGrid> AlphaGrid::Default() {
  static const GridPtr kDefault =
      Make({1.5, 1.75, 2, 2.5, 3, 4, 5, 6, 8, 16, 32, 64, 1e6, 1e10});
  return kDefault;
}

std::vector<double> AlphaGrid::ToVector() const {
  return std::vector<double>(orders_.data(), orders_.data() + orders_.size());
}

bool AlphaGrid::operator==(const AlphaGrid& other) const {
  return orders_.size() == other.orders_.size() &&
         (orders_ == other.orders_).all();
}

}  // namespace privplan
