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

#include "augshuffle/protocol.hpp"

#include <stdexcept>

namespace augshuffle {

std::string ProtocolName(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::kSBin:
      return "sbin";
    case ProtocolKind::kSAGeo:
      return "sageo";
    case ProtocolKind::kS1Geo:
      return "s1geo";
    case ProtocolKind::kGrrShuffle:
      return "grr";
    case ProtocolKind::kOueShuffle:
      return "oue";
    case ProtocolKind::kOlhShuffle:
      return "olh";
    case ProtocolKind::kRapporShuffle:
      return "rappor";
    case ProtocolKind::kBc20:
      return "bc20";
    case ProtocolKind::kCm22:
      return "cm22";
    case ProtocolKind::kLwy22:
      return "lwy22";
  }
  throw std::invalid_argument("ProtocolName: unknown kind");
}

ProtocolKind ParseProtocol(const std::string& name) {
  if (name == "sbin") return ProtocolKind::kSBin;
  if (name == "sageo") return ProtocolKind::kSAGeo;
  if (name == "s1geo") return ProtocolKind::kS1Geo;
  if (name == "grr") return ProtocolKind::kGrrShuffle;
  if (name == "oue") return ProtocolKind::kOueShuffle;
  if (name == "olh") return ProtocolKind::kOlhShuffle;
  if (name == "rappor") return ProtocolKind::kRapporShuffle;
  if (name == "bc20") return ProtocolKind::kBc20;
  if (name == "cm22") return ProtocolKind::kCm22;
  if (name == "lwy22") return ProtocolKind::kLwy22;
  throw std::invalid_argument("unknown protocol: " + name);
}

}  // namespace augshuffle
