// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dada {

// Root of every error the library throws. The CLI maps subclasses onto exit
// codes, so new error types must derive from one of the families below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A public operation was called with an argument outside its domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An internal or caller contract was violated (shape mismatch, non-scalar
// loss, non-deterministic loss function, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Input sequence longer than the model's max_len. Truncation is never done.
class LengthError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Malformed or inconsistent configuration (config files, profile tables,
// rule pattern tables).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Bad input data: non-SAE records where SAE is required, tokens outside the
// vocabulary, empty corpora.
class DataError : public Error {
 public:
  using Error::Error;
};

// A feature dataset came out empty because its rule never fired.
class RuleStarvedError : public DataError {
 public:
  explicit RuleStarvedError(std::string rule);
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

// Checkpoints whose lineage does not line up (adapters trained against a
// different backbone, config mismatch).
class CompositionError : public DataError {
 public:
  using DataError::DataError;
};

// Operation requires a different checkpoint mode (e.g. analysis on a
// non-fusion checkpoint).
class ModeError : public DataError {
 public:
  using DataError::DataError;
};

// Offset analysis asked to condition on a rule that never applied.
class ConditioningError : public DataError {
 public:
  using DataError::DataError;
};

// NaN or Inf surfaced during training or evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

class CheckpointError : public Error {
 public:
  enum class Kind {
    kIo,
    kBadMagic,
    kVersionMismatch,
    kMalformedHeader,
    kTruncatedPayload,
    kShapeMismatch,
  };

  CheckpointError(Kind kind, const std::string& detail);
  Kind kind() const noexcept { return kind_; }

  static const char* kind_name(Kind kind);

 private:
  Kind kind_;
};

}  // namespace dada
