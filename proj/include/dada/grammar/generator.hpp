// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "dada/grammar/corpus.hpp"

namespace dada::grammar {

struct CorpusSplits {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// One sentence as a pure function of (seed, id).
TaggedSentence generate_sentence(std::uint64_t seed, std::int64_t id);

// Ids run consecutively train, then dev, then test, so splits never share an
// id. Sizes must be >= 1 (ArgumentError).
CorpusSplits generate_corpus(std::uint64_t seed, int n_train, int n_dev, int n_test);

inline constexpr int kMaxSentenceLength = 16;

}  // namespace dada::grammar
