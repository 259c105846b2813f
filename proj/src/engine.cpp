#include "idelex/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "idelex/error.hpp"

namespace idelex {

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", score);
  return buf;
}

void TraceWriter::on_iteration(std::size_t iteration, std::span<const ScoredCandidate> evaluated) {
  for (const auto& sc : evaluated)
    out_ << "iter" << iteration << '\t' << format_score(sc.score) << '\t'
         << provenance_name(sc.candidate.provenance) << '\t' << join(sc.candidate.tokens) << '\n';
}

namespace {

class Evaluator {
 public:
  Evaluator(const Backend& backend, double floor) : backend_(backend), floor_(floor) {}

  std::vector<ScoredCandidate> run(std::vector<DelexCandidate> candidates) {
    std::vector<ScoredCandidate> out;
    out.reserve(candidates.size());
    for (auto& c : candidates) {
      auto it = cache_.find(c.tokens);
      if (it == cache_.end()) it = cache_.emplace(c.tokens, backend_.parse(c.tokens)).first;
      double s = score(it->second, floor_);
      c.cached_score = s;
      out.push_back({std::move(c), it->second, s});
      ++evaluated_;
    }
    return out;
  }

  std::size_t evaluated() const { return evaluated_; }

 private:
  const Backend& backend_;
  double floor_;
  std::map<Tokens, ParseResult> cache_;
  std::size_t evaluated_ = 0;
};

double best_of(const std::vector<ScoredCandidate>& level) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& sc : level) best = std::max(best, sc.score);
  return best;
}

InferenceOutcome finish(const ScoredCandidate& best, const TokenTable& table) {
  InferenceOutcome out;
  out.intent = best.parse.predicted_intent;
  out.labels = project_labels(best.candidate, best.parse, table);
  out.best_candidate = best.candidate;
  out.best_parse = best.parse;
  out.best_score = best.score;
  return out;
}

}  // namespace

InferenceOutcome iterative_delex_parse(const Tokens& tokens, const Backend& backend, const PhraseMatcher& matcher,
                                       const EngineConfig& config, InferenceObserver* observer) {
  config.validate();
  if (tokens.empty()) throw ValidationError("cannot parse an empty utterance");
  Evaluator evaluator(backend, config.entropy_floor);

  auto level = evaluator.run(seed_delexicalization(tokens, matcher, config.token_table, config.seed_cap));
  if (observer) observer->on_iteration(0, level);
  ScoredCandidate best = level.front();
  for (const auto& sc : level)
    if (sc.score > best.score) best = sc;

  double max_confidence = 0.0;
  double current = best_of(level);
  std::size_t iterations = 0;
  auto top_k = [&](std::vector<ScoredCandidate>& s) {
    std::stable_sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
    if (s.size() > config.k) s.resize(config.k);
  };
  top_k(level);
  // A candidate without natural tokens admits no rewrite, so a selection made
  // only of such candidates would yield an empty next set.
  auto expandable = [](const std::vector<ScoredCandidate>& s) {
    return std::any_of(s.begin(), s.end(), [](const auto& sc) { return sc.candidate.natural_count() > 0; });
  };

  while (current > max_confidence && expandable(level)) {
    ++iterations;
    max_confidence = current;
    std::vector<DelexCandidate> next;
    for (const auto& parent : level) {
      const std::size_t parent_natural = parent.candidate.natural_count();
      for (auto& child : delexicalization(parent.candidate, parent.parse, config)) {
        if (child.natural_count() >= parent_natural)
          throw std::logic_error("rewrite did not reduce the natural token count");
        if (observer) observer->on_edge(parent.candidate, child);
        bool dup = std::any_of(next.begin(), next.end(), [&](const DelexCandidate& o) { return o.same_rewrite(child); });
        if (!dup) next.push_back(std::move(child));
      }
    }
    level = evaluator.run(std::move(next));
    if (observer) observer->on_iteration(iterations, level);
    for (const auto& sc : level)
      if (sc.score > best.score) best = sc;
    current = best_of(level);
    top_k(level);
  }

  InferenceOutcome out = finish(best, config.token_table);
  out.iterations_run = iterations;
  out.candidates_evaluated = evaluator.evaluated();
  return out;
}

InferenceOutcome iterative_delex_parse(const Tokens& tokens, const Backend& backend, const Gazetteer& gazetteer,
                                       const EngineConfig& config, InferenceObserver* observer) {
  return iterative_delex_parse(tokens, backend, PhraseMatcher(gazetteer), config, observer);
}

InferenceOutcome baseline_parse(const Tokens& tokens, const Backend& backend, double entropy_floor) {
  ScoredCandidate sc;
  sc.candidate = identity_candidate(tokens);
  sc.parse = backend.parse(tokens);
  sc.score = score(sc.parse, entropy_floor);
  sc.candidate.cached_score = sc.score;
  InferenceOutcome out = finish(sc, TokenTable{});
  out.candidates_evaluated = 1;
  return out;
}

Engine::Engine(const Backend& backend, const Gazetteer& gazetteer, EngineConfig config)
    : backend_(backend), matcher_(gazetteer), config_(std::move(config)) {
  config_.validate();
  for (const auto& [type, phrases] : gazetteer.slot_phrases)
    if (!config_.token_table.has_slot(type))
      throw ValidationError("gazetteer slot '" + type + "' has no special token");
}

InferenceOutcome Engine::infer(const Tokens& tokens, InferenceObserver* observer) const {
  return iterative_delex_parse(tokens, backend_, matcher_, config_, observer);
}

InferenceOutcome Engine::baseline(const Tokens& tokens) const {
  return baseline_parse(tokens, backend_, config_.entropy_floor);
}

}  // namespace idelex
