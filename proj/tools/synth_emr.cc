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

// Writes the synthetic entity/relation task: <dir>/emr_synth.dk plus seeded
// train and test instance files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "declearn/synth.h"

// Generated files carry the project license as a comment block.
constexpr char kLicenseHeader[] =
    "# Copyright 2026 The Declearn Authors\n"
    "# Licensed under the Apache License, Version 2.0 (the \"License\");\n"
    "# you may not use this file except in compliance with the License.\n"
    "# You may obtain a copy of the License at\n"
    "#\n"
    "#     http://www.apache.org/licenses/LICENSE-2.0\n"
    "#\n"
    "# Unless required by applicable law or agreed to in writing, software\n"
    "# distributed under the License is distributed on an \"AS IS\" BASIS,\n"
    "# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.\n"
    "# See the License for the specific language governing permissions and\n"
    "# limitations under the License.\n"
    "\n";

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic entity/relation dataset",
               "synth_emr"};
  std::string dir = ".";
  declearn::SynthOptions train;
  int test_samples = 50;
  double test_ambiguous = 0.15;
  app.add_option("--dir", dir, "Output directory");
  app.add_option("--train", train.samples, "Training sentences");
  app.add_option("--test", test_samples, "Test sentences");
  app.add_option("--noise", train.label_noise, "Label noise rate");
  app.add_option("--ambiguous", test_ambiguous,
                 "Ambiguous phrase rate in the test split");
  app.add_option("--seed", train.seed, "Seed");
  CLI11_PARSE(app, argc, argv);

  declearn::SynthOptions test = train;
  test.samples = test_samples;
  test.ambiguous = test_ambiguous;
  test.seed = train.seed + 1;

  const std::filesystem::path out(dir);
  std::filesystem::create_directories(out);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(out / name, std::ios::binary);
    f << text;
    if (!f) {
      std::cerr << "cannot write " << (out / name).string() << "\n";
      return false;
    }
    return true;
  };
  const bool ok =
      write("emr_synth.dk", kLicenseHeader + declearn::SynthEmrDsl()) &&
      write("emr_train.json", declearn::SynthEmrData(train).dump() + "\n") &&
      write("emr_test.json", declearn::SynthEmrData(test).dump() + "\n");
  return ok ? 0 : 1;
}
