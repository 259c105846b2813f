#pragma once

#include <cstddef>
#include <cstdint>

#include "idelex/corpus.hpp"
#include "idelex/gazetteer.hpp"

namespace idelex {

struct AugmentConfig {
  double ps = 0.75;  ///< per-span substitution probability, in (0, 1)
  std::uint64_t rng_seed = 0;
  TokenTable tokens;

  void validate() const;
};

struct AugmentStats {
  std::size_t spans = 0;     ///< gold spans seen, including those of dropped utterances
  std::size_t replaced = 0;  ///< spans substituted by their special token
  std::size_t kept = 0;      ///< utterances emitted into the delexicalized set

  double fraction() const { return spans ? static_cast<double>(replaced) / static_cast<double>(spans) : 0.0; }
};

struct Augmented {
  Dataset data;
  AugmentStats stats;
};

/// Each gold span is replaced, independently with probability ps, by a
/// single special token labelled Begin(slot). Utterance i draws from its own
/// stream seeded by (rng_seed, i); utterances without a replacement are
/// dropped.
Augmented delexicalize_training(const Dataset& train, const AugmentConfig& config);

/// Concatenation T followed by T_d; inventories are the union.
Dataset combine(const Dataset& train, const Dataset& delexicalized);

}  // namespace idelex
