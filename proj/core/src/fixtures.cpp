// Copyright 2026 The beliefagg Authors.
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

#include "beliefagg/fixtures.hpp"

#include "beliefagg/error.hpp"

namespace beliefagg::fixtures {

Matrix ThreeStatePosterior() {
  Matrix q(3, 3);
  // clang-format off
  q << 0.40, 0.21, 0.39,
       0.45, 0.54, 0.01,
       0.44, 0.06, 0.50;
  // clang-format on
  return q;
}

Matrix ThreeStateLikelihood() {
  Matrix m(3, 3);
  // clang-format off
  m << 0.310, 0.259, 0.433,
       0.349, 0.667, 0.011,
       0.341, 0.074, 0.556;
  // clang-format on
  return m;
}

InfoStructure ThreeStateExample() {
  return InfoStructure(StateSpace({"w1", "w2", "w3"}), {"s1", "s2", "s3"},
                       Vector::Constant(3, 1.0 / 3.0), ThreeStateLikelihood(),
                       ThreeStatePosterior());
}

Matrix ThreeStatePublishedMeans() {
  Matrix e(3, 3);
  // clang-format off
  e << 0.431, 0.436, 0.422,
       0.274, 0.419, 0.130,
       0.295, 0.145, 0.447;
  // clang-format on
  return e;
}

Matrix ThreeStatePublishedAlpha() {
  Matrix a(3, 3);
  // clang-format off
  a << 0.429, 0.434, 0.427,
       0.248, 0.351, 0.211,
       0.323, 0.215, 0.362;
  // clang-format on
  return a;
}

std::vector<std::vector<PublishedSpCell>> ThreeStatePublishedSpGrid() {
  const PublishedSpCell first_two{{0, 1}, 1};
  const PublishedSpCell third{{2}, std::nullopt};
  return {{first_two, first_two, third},
          {third, first_two, third},
          {first_two, first_two, third}};
}

InfoStructure BinarySymmetric(double accuracy) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
    throw Error("accuracy must lie in [0, 1]");
  }
  Matrix likelihood(2, 2);
  likelihood << accuracy, 1.0 - accuracy, 1.0 - accuracy, accuracy;
  return InfoStructure(StateSpace({"w1", "w2"}), {"s1", "s2"},
                       Vector::Constant(2, 0.5), likelihood);
}

}  // namespace beliefagg::fixtures
