// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/grammar/generator.hpp"

#include <string>

#include "dada/common/errors.hpp"
#include "dada/common/rng.hpp"

namespace dada::grammar {

namespace {

enum class Frame {
  kProgressive,  // she is (not) buying a good camera
  kSimple,       // she buys a good camera / she does not buy ...
  kModal,        // she can (not) buy a good camera
  kPerfect,      // she has (not) bought a good camera
  kPossession,   // she has a good camera / does not have a / has no
  kCopula,       // the camera is (not) good
  kExistential,  // there is (not) a good camera / there is no good camera
  kNobody,       // nobody can (not) buy / is (not) buying / has a|no ...
};

// Cumulative frame mix; chosen so that every rule's precondition holds for
// well over 5% of sentences.
constexpr double kFrameWeights[] = {0.17, 0.13, 0.12, 0.14, 0.12, 0.11, 0.08, 0.13};

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(rng.below(items.size()))];
}

class Builder {
 public:
  explicit Builder(Rng& rng) : rng_(rng) {}

  void add(std::string_view surface, Tag tag, std::string_view lemma) {
    tokens_.push_back(TaggedToken{std::string(surface), tag, std::string(lemma)});
  }
  void add(std::string_view surface, Tag tag) { add(surface, tag, surface); }

  struct Subject {
    bool third_singular = true;
    bool first_singular = false;
  };

  Subject person_subject() {
    const double r = rng_.uniform();
    if (r < 0.5) {
      const Person& p = pick(rng_, lexicon::pronouns());
      add(p.surface, Tag::kSubjPron);
      return {p.third_singular, p.first_singular};
    }
    if (r < 0.78) {
      add(rng_.bernoulli(0.5) ? "the" : "my", Tag::kDet);
      add(pick(rng_, lexicon::person_nouns()), Tag::kNoun);
      return {};
    }
    possessive(lexicon::person_nouns());
    return {};
  }

  void thing_subject() {
    if (rng_.bernoulli(0.7)) {
      add(rng_.bernoulli(0.5) ? "the" : "my", Tag::kDet);
      add(pick(rng_, lexicon::thing_nouns()), Tag::kNoun);
    } else {
      possessive(lexicon::thing_nouns());
    }
  }

  // my friend 's car
  void possessive(const std::vector<std::string_view>& heads) {
    add("my", Tag::kDet);
    add(pick(rng_, lexicon::person_nouns()), Tag::kNoun);
    add("'s", Tag::kPoss);
    add(pick(rng_, heads), Tag::kNoun);
  }

  // Content lexeme: an evaluative adjective, or none for a neutral sentence.
  std::optional<std::string_view> adjective(bool allow_neutral) {
    const double r = rng_.uniform();
    if (allow_neutral && r < 1.0 / 3.0) return std::nullopt;
    const bool positive = allow_neutral ? r < 2.0 / 3.0 : r < 0.5;
    return positive ? pick(rng_, lexicon::positive_adjectives())
                    : pick(rng_, lexicon::negative_adjectives());
  }

  void add_adjective(std::string_view adj) {
    const bool positive = lexicon::adjective_sentiment(adj) == Sentiment::kPositive;
    add(adj, positive ? Tag::kAdjPos : Tag::kAdjNeg);
  }

  // [a|an|no] [ADV] [ADJ] NOUN [that PRON VERB]
  void object(bool det_no) {
    const auto adj = adjective(true);
    const bool adverb = adj && rng_.bernoulli(0.15);
    const std::string_view adv = adverb ? pick(rng_, lexicon::adverbs()) : std::string_view{};
    const std::string_view noun = pick(rng_, lexicon::thing_nouns());
    if (det_no) {
      add("no", Tag::kDet);
    } else {
      const std::string_view next = adverb ? adv : adj ? *adj : noun;
      add(lexicon::takes_an(next) ? "an" : "a", Tag::kDet, "a");
    }
    if (adverb) add(adv, Tag::kAdv);
    if (adj) add_adjective(*adj);
    add(noun, Tag::kNoun);
    if (rng_.bernoulli(0.2)) {
      add("that", Tag::kRelPron);
      const Person& p = pick(rng_, lexicon::pronouns());
      add(p.surface, Tag::kSubjPron);
      const VerbForms& v = pick(rng_, lexicon::relative_verbs());
      add(p.third_singular ? v.third : v.base, Tag::kVerb, v.base);
    }
  }

  void be(const Subject& s, Tag tag) {
    add(s.first_singular ? "am" : s.third_singular ? "is" : "are", tag, "be");
  }

  void negation() { add("not", Tag::kNeg); }

  void final_adverb() {
    if (rng_.bernoulli(0.15)) add(pick(rng_, lexicon::final_adverbs()), Tag::kAdv);
  }

  std::vector<TaggedToken> take() { return std::move(tokens_); }

 private:
  Rng& rng_;
  std::vector<TaggedToken> tokens_;
};

Frame pick_frame(Rng& rng) {
  double r = rng.uniform();
  for (int i = 0; i < 8; ++i) {
    if (r < kFrameWeights[i]) return static_cast<Frame>(i);
    r -= kFrameWeights[i];
  }
  return Frame::kNobody;
}

std::vector<TaggedToken> build(Rng& rng) {
  Builder b(rng);
  const Frame frame = pick_frame(rng);
  const bool negated = rng.bernoulli(0.5);
  switch (frame) {
    case Frame::kProgressive: {
      const auto s = b.person_subject();
      b.be(s, Tag::kAux);
      if (negated) b.negation();
      const VerbForms& v = pick(rng, lexicon::verbs());
      b.add(v.progressive, Tag::kVerb, v.base);
      b.object(false);
      break;
    }
    case Frame::kSimple: {
      const auto s = b.person_subject();
      const VerbForms& v = pick(rng, lexicon::verbs());
      if (negated) {
        b.add(s.third_singular ? "does" : "do", Tag::kAux, "do");
        b.negation();
        b.add(v.base, Tag::kVerb);
      } else {
        b.add(s.third_singular ? v.third : v.base, Tag::kVerb, v.base);
      }
      b.object(false);
      break;
    }
    case Frame::kModal: {
      b.person_subject();
      b.add(pick(rng, lexicon::modals()), Tag::kAux);
      if (negated) b.negation();
      b.add(pick(rng, lexicon::verbs()).base, Tag::kVerb);
      b.object(false);
      break;
    }
    case Frame::kPerfect: {
      const auto s = b.person_subject();
      b.add(s.third_singular ? "has" : "have", Tag::kAux, "have");
      if (negated) b.negation();
      const VerbForms& v = pick(rng, lexicon::verbs());
      b.add(v.participle, Tag::kVerb, v.base);
      b.object(false);
      break;
    }
    case Frame::kPossession: {
      const auto s = b.person_subject();
      const VerbForms& h = lexicon::have();
      if (negated && rng.bernoulli(0.5)) {
        b.add(s.third_singular ? "does" : "do", Tag::kAux, "do");
        b.negation();
        b.add(h.base, Tag::kVerb);
        b.object(false);
      } else {
        b.add(s.third_singular ? h.third : h.base, Tag::kVerb, h.base);
        b.object(negated);
      }
      break;
    }
    case Frame::kCopula: {
      b.thing_subject();
      b.add("is", Tag::kCopula, "be");
      if (negated) b.negation();
      if (rng.bernoulli(0.15)) b.add(pick(rng, lexicon::adverbs()), Tag::kAdv);
      b.add_adjective(*b.adjective(false));
      break;
    }
    case Frame::kExistential: {
      b.add("there", Tag::kExplIt);
      b.add("is", Tag::kCopula, "be");
      if (negated && rng.bernoulli(0.5)) {
        b.object(true);
      } else {
        if (negated) b.negation();
        b.object(false);
      }
      break;
    }
    case Frame::kNobody: {
      // With `negated` these are SAE double negations ("nobody can not buy a
      // good camera" is positive), so negation parity has to be learned.
      b.add("nobody", Tag::kNeg);
      const VerbForms& v = pick(rng, lexicon::verbs());
      const double r = rng.uniform();
      if (r < 0.35) {
        b.add(pick(rng, lexicon::modals()), Tag::kAux);
        if (negated) b.negation();
        b.add(v.base, Tag::kVerb);
        b.object(false);
      } else if (r < 0.7) {
        b.add("is", Tag::kAux, "be");
        if (negated) b.negation();
        b.add(v.progressive, Tag::kVerb, v.base);
        b.object(false);
      } else {
        b.add(lexicon::have().third, Tag::kVerb, lexicon::have().base);
        b.object(negated);
      }
      break;
    }
  }
  b.final_adverb();
  return b.take();
}

}  // namespace

TaggedSentence generate_sentence(std::uint64_t seed, std::int64_t id) {
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(id)));
  TaggedSentence s;
  s.id = id;
  s.tokens = build(rng);
  s.label = semantic_label(s.tokens);
  return s;
}

CorpusSplits generate_corpus(std::uint64_t seed, int n_train, int n_dev, int n_test) {
  if (n_train < 1 || n_dev < 1 || n_test < 1) {
    throw ArgumentError("generate_corpus: split sizes must be >= 1");
  }
  CorpusSplits out;
  std::int64_t next = 0;
  auto fill = [&](Corpus& c, Split split, int n) {
    c.split = split;
    c.seed = seed;
    c.sentences.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c.sentences.push_back(generate_sentence(seed, next++));
  };
  fill(out.train, Split::kTrain, n_train);
  fill(out.dev, Split::kDev, n_dev);
  fill(out.test, Split::kTest, n_test);
  return out;
}

}  // namespace dada::grammar
