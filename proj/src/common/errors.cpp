// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/common/errors.hpp"

namespace dada {

RuleStarvedError::RuleStarvedError(std::string rule)
    : DataError("rule starved: '" + rule + "' never fired on the corpus"),
      rule_(std::move(rule)) {}

CheckpointError::CheckpointError(Kind kind, const std::string& detail)
    : Error(std::string(kind_name(kind)) + ": " + detail), kind_(kind) {}

const char* CheckpointError::kind_name(Kind kind) {
  switch (kind) {
    case Kind::kIo:
      return "checkpoint io error";
    case Kind::kBadMagic:
      return "bad magic";
    case Kind::kVersionMismatch:
      return "version mismatch";
    case Kind::kMalformedHeader:
      return "malformed header";
    case Kind::kTruncatedPayload:
      return "truncated payload";
    case Kind::kShapeMismatch:
      return "shape mismatch";
  }
  return "checkpoint error";
}

}  // namespace dada
