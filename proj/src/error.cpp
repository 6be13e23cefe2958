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

#include "dualmpc/error.hpp"

namespace dualmpc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateOrientation: return "DegenerateOrientation";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonPositiveHeight: return "NonPositiveHeight";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::RankDeficientEqualities: return "RankDeficientEqualities";
    case ErrorCode::BodyGroundPenetration: return "BodyGroundPenetration";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::EpisodeFell: return "EpisodeFell";
    case ErrorCode::MismatchedScenarios: return "MismatchedScenarios";
  }
  return "Unknown";
}

}  // namespace dualmpc
