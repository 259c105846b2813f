#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>

#include "idelex/backend.hpp"
#include "idelex/candidate.hpp"
#include "idelex/gazetteer.hpp"
#include "idelex/rules.hpp"
#include "idelex/seed.hpp"

namespace idelex {

struct ScoredCandidate {
  DelexCandidate candidate;
  ParseResult parse;
  double score = 0.0;
};

struct InferenceOutcome {
  std::string intent;
  LabelSequence labels;  ///< over the original tokens, valid BIO
  DelexCandidate best_candidate;
  ParseResult best_parse;
  double best_score = 0.0;
  std::size_t iterations_run = 0;
  std::size_t candidates_evaluated = 0;
};

/// Hooks into the search loop. Iteration 0 is the seed set.
class InferenceObserver {
 public:
  virtual ~InferenceObserver() = default;
  virtual void on_iteration(std::size_t /*iteration*/, std::span<const ScoredCandidate> /*evaluated*/) {}
  virtual void on_edge(const DelexCandidate& /*parent*/, const DelexCandidate& /*child*/) {}
};

/// Writes "iter<i>\t<score>\t<provenance>\t<tokens>" per evaluated candidate.
class TraceWriter final : public InferenceObserver {
 public:
  explicit TraceWriter(std::ostream& out) : out_(out) {}
  void on_iteration(std::size_t iteration, std::span<const ScoredCandidate> evaluated) override;

 private:
  std::ostream& out_;
};

std::string format_score(double score);

/// Iterative delexicalization: seed candidates, then repeated model-guided
/// rewriting of the top-K candidates while the best score of the newest
/// iteration strictly improves on the previous one. The globally best
/// candidate is projected back onto the original tokens.
///
/// Every parent->child rewrite must strictly reduce the natural token
/// count; a violation throws std::logic_error.
InferenceOutcome iterative_delex_parse(const Tokens& tokens, const Backend& backend, const PhraseMatcher& matcher,
                                       const EngineConfig& config, InferenceObserver* observer = nullptr);

InferenceOutcome iterative_delex_parse(const Tokens& tokens, const Backend& backend, const Gazetteer& gazetteer,
                                       const EngineConfig& config, InferenceObserver* observer = nullptr);

/// Plain backend parse of the untouched utterance, in outcome form.
InferenceOutcome baseline_parse(const Tokens& tokens, const Backend& backend, double entropy_floor = 1e-12);

/// Binds a backend, a gazetteer and a configuration. Immutable; infer() may
/// be called concurrently.
class Engine {
 public:
  Engine(const Backend& backend, const Gazetteer& gazetteer, EngineConfig config);

  InferenceOutcome infer(const Tokens& tokens, InferenceObserver* observer = nullptr) const;
  InferenceOutcome baseline(const Tokens& tokens) const;

  const EngineConfig& config() const noexcept { return config_; }

 private:
  const Backend& backend_;
  PhraseMatcher matcher_;
  EngineConfig config_;
};

}  // namespace idelex
