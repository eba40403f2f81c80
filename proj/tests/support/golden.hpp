#pragma once

#include <string>
#include <vector>

namespace door::testing {

struct GoldenOutcome {
  int exchanges = 0;
  std::vector<std::string> mismatches;
  // Actual responses in file order, handy when authoring a new file.
  std::vector<std::string> transcript;
};

// Replays a conformance file against a fresh FaceService behind FaceHttpServer
// on a manual clock. Each step is either {"advance_ms": n} or
// {"request": {method, path, [auth], [body | body_json | body_file]},
//  "response": {status, body}}. `${name}` in an expected body captures an id
// ([A-Za-z0-9-]+) on first use and must repeat exactly afterwards; in a
// request it substitutes the captured value.
GoldenOutcome replay_golden(const std::string& path);

}  // namespace door::testing
