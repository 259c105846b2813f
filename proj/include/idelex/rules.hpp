#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "idelex/backend.hpp"
#include "idelex/candidate.hpp"
#include "idelex/gazetteer.hpp"

namespace idelex {

struct EngineConfig {
  double tau = 1e-5;  ///< slot confidence threshold, nats
  std::size_t k = 8;  ///< candidates expanded per iteration
  std::set<std::string> ood_slots;
  double entropy_floor = 1e-12;
  std::size_t seed_cap = 64;
  TokenTable token_table;

  /// Throws ValidationError on tau <= 0, k == 0, entropy_floor <= 0,
  /// seed_cap == 0 or an OOD slot without a special token.
  void validate() const;
};

/// Inverse average entropy: n / max(sum of token entropies, floor).
double score(const ParseResult& parse, double entropy_floor = 1e-12);

/// Maximal predicted Begin(Y) Inside(Y)* runs, Y an OOD slot, free of special
/// tokens: one candidate per run with the run collapsed to Y's token.
std::vector<DelexCandidate> rule_proper_slot_sequence(const DelexCandidate& cand, const ParseResult& parse,
                                                      const EngineConfig& config);

/// As above for maximal Inside(Y)+ runs that do not follow Begin(Y).
std::vector<DelexCandidate> rule_improper_slot_sequence(const DelexCandidate& cand, const ParseResult& parse,
                                                        const EngineConfig& config);

/// For each OOD special token, absorbs the contiguous neighbours on both
/// sides whose entropy exceeds tau. Absorption stops at a token with entropy
/// <= tau, at the sequence boundary, or at another special token.
std::vector<DelexCandidate> rule_token_expansion(const DelexCandidate& cand, const ParseResult& parse,
                                                 const EngineConfig& config);

/// Union of the three rules, duplicates (same tokens and alignment) removed.
std::vector<DelexCandidate> delexicalization(const DelexCandidate& cand, const ParseResult& parse,
                                             const EngineConfig& config);

/// Labels over the original utterance. Passthrough tokens copy the parser's
/// label; a special token of slot Y spanning [a, b) yields B-Y, I-Y... from
/// its alignment. If the parser labels the special token with another slot
/// of Y's shared group, that slot is used instead. The result is BIO-repaired.
LabelSequence project_labels(const DelexCandidate& best, const ParseResult& parse, const TokenTable& table = {});

}  // namespace idelex
