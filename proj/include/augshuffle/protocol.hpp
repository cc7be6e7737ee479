// Copyright 2026 The augshuffle Authors
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

#ifndef AUGSHUFFLE_PROTOCOL_H_
#define AUGSHUFFLE_PROTOCOL_H_

#include <string>

namespace augshuffle {

// Every frequency-estimation protocol the harness can run. The first three
// are the local-noise-free protocols (all randomness on the shuffler side);
// the next four shuffle a single locally randomized message per user; the
// last three are multi-message shuffle protocols.
enum class ProtocolKind {
  kSBin,
  kSAGeo,
  kS1Geo,
  kGrrShuffle,
  kOueShuffle,
  kOlhShuffle,
  kRapporShuffle,
  kBc20,
  kCm22,
  kLwy22,
};

inline bool IsProposed(ProtocolKind kind) {
  return kind == ProtocolKind::kSBin || kind == ProtocolKind::kSAGeo ||
         kind == ProtocolKind::kS1Geo;
}

inline bool IsSingleMessage(ProtocolKind kind) {
  return kind == ProtocolKind::kGrrShuffle || kind == ProtocolKind::kOueShuffle ||
         kind == ProtocolKind::kOlhShuffle ||
         kind == ProtocolKind::kRapporShuffle;
}

inline bool IsMultiMessage(ProtocolKind kind) {
  return kind == ProtocolKind::kBc20 || kind == ProtocolKind::kCm22 ||
         kind == ProtocolKind::kLwy22;
}

std::string ProtocolName(ProtocolKind kind);
ProtocolKind ParseProtocol(const std::string& name);

}  // namespace augshuffle

#endif  // AUGSHUFFLE_PROTOCOL_H_
