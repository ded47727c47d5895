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

// Seeded generator for a small entity/relation task: sentences of phrases
// typed people/organization/location and a work_for relation over ordered
// phrase pairs.

#ifndef DECLEARN_SYNTH_H_
#define DECLEARN_SYNTH_H_

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace declearn {

struct SynthOptions {
  int samples = 200;
  int phrases = 3;            // per sentence
  double label_noise = 0.1;   // chance a phrase label is flipped
  double ambiguous = 0.0;     // chance a phrase mixes two type signals
  double feature_noise = 0.3; // stddev of per-dimension Gaussian noise
  std::uint64_t seed = 1;
};

// Graph plus two constraints: the three phrase types are mutually exclusive,
// and work_for links a person (arg1) to an organization (arg2).
std::string SynthEmrDsl();

// {"samples": [...]} in the instance format LoadSamples reads. Phrase
// features are a scaled one-hot of the true type plus noise; pairs carry no
// features of their own. Labels are always constraint-consistent.
nlohmann::json SynthEmrData(const SynthOptions& options);

}  // namespace declearn

#endif  // DECLEARN_SYNTH_H_
