#include "idelex/rules.hpp"

#include <algorithm>

#include "idelex/error.hpp"

namespace idelex {

void EngineConfig::validate() const {
  if (!(tau > 0.0)) throw ValidationError("tau must be positive");
  if (k == 0) throw ValidationError("K must be at least 1");
  if (!(entropy_floor > 0.0)) throw ValidationError("entropy floor must be positive");
  if (seed_cap == 0) throw ValidationError("seed cap must be at least 1");
  for (const auto& slot : ood_slots)
    if (!token_table.has_slot(slot)) throw ValidationError("OOD slot '" + slot + "' has no special token");
}

double score(const ParseResult& parse, double entropy_floor) {
  double total = 0.0;
  for (double e : parse.token_entropies) total += e;
  return static_cast<double>(parse.token_entropies.size()) / std::max(total, entropy_floor);
}

namespace {

bool span_has_special(const DelexCandidate& cand, std::size_t first, std::size_t last) {
  for (std::size_t i = first; i < last; ++i)
    if (cand.alignment[i].special()) return true;
  return false;
}

void check_shapes(const DelexCandidate& cand, const ParseResult& parse) {
  if (parse.predicted_labels.size() != cand.tokens.size() || parse.token_entropies.size() != cand.tokens.size())
    throw ValidationError("parse result does not cover the candidate");
}

}  // namespace

std::vector<DelexCandidate> rule_proper_slot_sequence(const DelexCandidate& cand, const ParseResult& parse,
                                                      const EngineConfig& config) {
  check_shapes(cand, parse);
  const auto& y = parse.predicted_labels;
  std::vector<DelexCandidate> out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!y[i].is_begin()) continue;
    std::size_t j = i + 1;
    while (j < y.size() && y[j].is_inside() && y[j].type == y[i].type) ++j;
    if (config.ood_slots.count(y[i].type) && !span_has_special(cand, i, j))
      out.push_back(replace_range(cand, i, j, y[i].type, config.token_table, Provenance::rule1));
    i = j - 1;
  }
  return out;
}

std::vector<DelexCandidate> rule_improper_slot_sequence(const DelexCandidate& cand, const ParseResult& parse,
                                                        const EngineConfig& config) {
  check_shapes(cand, parse);
  const auto& y = parse.predicted_labels;
  std::vector<DelexCandidate> out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!y[i].is_inside()) continue;
    const bool continues = i > 0 && !y[i - 1].is_outside() && y[i - 1].type == y[i].type;
    std::size_t j = i + 1;
    while (j < y.size() && y[j].is_inside() && y[j].type == y[i].type) ++j;
    if (!continues && config.ood_slots.count(y[i].type) && !span_has_special(cand, i, j))
      out.push_back(replace_range(cand, i, j, y[i].type, config.token_table, Provenance::rule2));
    i = j - 1;
  }
  return out;
}

std::vector<DelexCandidate> rule_token_expansion(const DelexCandidate& cand, const ParseResult& parse,
                                                 const EngineConfig& config) {
  check_shapes(cand, parse);
  const auto& e = parse.token_entropies;
  const std::size_t n = cand.tokens.size();
  std::vector<DelexCandidate> out;
  for (std::size_t t = 0; t < n; ++t) {
    const auto& entry = cand.alignment[t];
    if (!entry.special() || !config.ood_slots.count(*entry.slot_type)) continue;
    std::size_t s = t;
    while (s > 0 && !cand.alignment[s - 1].special() && e[s - 1] > config.tau) --s;
    std::size_t r = t;
    while (r + 1 < n && !cand.alignment[r + 1].special() && e[r + 1] > config.tau) ++r;
    if (s == t && r == t) continue;
    out.push_back(replace_range(cand, s, r + 1, *entry.slot_type, config.token_table, Provenance::rule3));
  }
  return out;
}

std::vector<DelexCandidate> delexicalization(const DelexCandidate& cand, const ParseResult& parse,
                                             const EngineConfig& config) {
  std::vector<DelexCandidate> out;
  auto absorb = [&](std::vector<DelexCandidate> produced) {
    for (auto& c : produced) {
      bool dup = std::any_of(out.begin(), out.end(), [&](const DelexCandidate& o) { return o.same_rewrite(c); });
      if (!dup) out.push_back(std::move(c));
    }
  };
  absorb(rule_proper_slot_sequence(cand, parse, config));
  absorb(rule_improper_slot_sequence(cand, parse, config));
  absorb(rule_token_expansion(cand, parse, config));
  return out;
}

LabelSequence project_labels(const DelexCandidate& best, const ParseResult& parse, const TokenTable& table) {
  if (parse.predicted_labels.size() != best.tokens.size())
    throw ValidationError("parse result does not cover the candidate");
  LabelSequence labels(best.original_length());
  for (std::size_t i = 0; i < best.alignment.size(); ++i) {
    const auto& entry = best.alignment[i];
    if (!entry.special()) {
      labels[entry.begin] = parse.predicted_labels[i];
      continue;
    }
    std::string type = *entry.slot_type;
    const auto& predicted = parse.predicted_labels[i];
    if (!predicted.is_outside() && predicted.type != type && table.same_group(type, predicted.type))
      type = predicted.type;
    labels[entry.begin] = SlotLabel::begin(type);
    for (std::size_t k = entry.begin + 1; k < entry.end; ++k) labels[k] = SlotLabel::inside(type);
  }
  repair_bio(labels);
  return labels;
}

}  // namespace idelex
