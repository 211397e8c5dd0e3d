/*
 * Copyright 2026 The shardcache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shardcache {

enum class ErrorCode {
  NonIntegerExpectedLoad,
  BadIntensities,
  BadBudget,
  BadConfig,
  WorstCaseNeedsEnoughFiles,
  SizeExceedsCaches,
  EnumerationTooLarge,
  TooManyUsersForRound,
  FormulaMismatch,
  PayloadTooSmall,
  MissingSideInformation,
  IncompleteDelivery,
  ConfigParse,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonIntegerExpectedLoad: return "NonIntegerExpectedLoad";
    case ErrorCode::BadIntensities: return "BadIntensities";
    case ErrorCode::BadBudget: return "BadBudget";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::WorstCaseNeedsEnoughFiles: return "WorstCaseNeedsEnoughFiles";
    case ErrorCode::SizeExceedsCaches: return "SizeExceedsCaches";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::TooManyUsersForRound: return "TooManyUsersForRound";
    case ErrorCode::FormulaMismatch: return "FormulaMismatch";
    case ErrorCode::PayloadTooSmall: return "PayloadTooSmall";
    case ErrorCode::MissingSideInformation: return "MissingSideInformation";
    case ErrorCode::IncompleteDelivery: return "IncompleteDelivery";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shardcache
