// Copyright 2026 The fairaudit Authors
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

// Audits a hand-written confusion matrix (46 female, 54 male students, pass
// is the positive class) and prints the JSON report.

#include <iostream>

#include "fairaudit.hpp"

int main() {
  using namespace fairaudit;
  GroupedConfusion c;
  c.prot = {.tp = 32, .fp = 4, .fn = 4, .tn = 6};
  c.non = {.tp = 38, .fp = 5, .fn = 6, .tn = 5};
  const FairnessReport report = report_from_confusion(c, FairnessPolicy(0.05));
  std::cout << to_json(report).dump(2) << "\n";
  return 0;
}
