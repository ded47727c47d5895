// Copyright 2026 The Declearn Authors
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

#ifndef DECLEARN_TESTS_SUPPORT_FIXTURES_H_
#define DECLEARN_TESTS_SUPPORT_FIXTURES_H_

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "declearn/error.h"

namespace declearn::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(DECLEARN_DATA_DIR) + "/" + name;
}

inline std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string ReadData(const std::string& name) {
  return ReadText(DataPath(name));
}

inline void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
}

// Fresh directory under the system temp dir.
inline std::string MakeTempDir() {
  std::string pattern =
      (std::filesystem::temp_directory_path() / "declearn_XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) {
    throw Error(ErrorCode::kIoError, "mkdtemp failed");
  }
  return pattern;
}

// Two phrases in one sentence, both ordered pairs, all labels set.
inline constexpr const char* kEmrSentence = R"({
  "nodes": [
    {"id": "s1", "concept": "sentence"},
    {"id": "p1", "concept": "phrase", "features": [1.0, 0.0, 0.2],
     "labels": {"people": 1, "organization": 0, "location": 0}},
    {"id": "p2", "concept": "phrase", "features": [0.1, 1.0, 0.0],
     "labels": {"people": 0, "organization": 1, "location": 0}},
    {"id": "r12", "concept": "pair", "labels": {"work_for": 1}},
    {"id": "r21", "concept": "pair", "labels": {"work_for": 0}}
  ],
  "contains": [["s1", "p1"], ["s1", "p2"]],
  "has_a": [["r12", "arg1", "p1"], ["r12", "arg2", "p2"],
            ["r21", "arg1", "p2"], ["r21", "arg2", "p1"]]
})";

}  // namespace declearn::testing

#endif  // DECLEARN_TESTS_SUPPORT_FIXTURES_H_
