/*
 Copyright 2026 The dualmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// Prints one line per acceptance criterion. Exit status 1 when any fails.
//   acceptance            all criteria
//   acceptance 3 7 12     a subset

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "dualmpc/error.hpp"
#include "dualmpc/verify.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const long v = std::strtol(argv[i], &end, 10);
    if (*end != '\0' || v < 1 || v > dualmpc::verify::kNumCriteria) {
      std::fprintf(stderr, "usage: %s [criterion 1..%d ...]\n", argv[0], dualmpc::verify::kNumCriteria);
      return 2;
    }
    ids.push_back(static_cast<int>(v));
  }
  int failed = 0;
  for (const auto& r : dualmpc::verify::run_all(ids)) {
    std::printf("%s\n", dualmpc::verify::format(r).c_str());
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
