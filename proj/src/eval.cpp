#include "idelex/eval.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "idelex/error.hpp"

namespace idelex {

std::string CategoryMap::category_of(const std::string& slot_type) const {
  auto it = categories.find(slot_type);
  if (it != categories.end()) return it->second;
  return fallback.value_or(slot_type);
}

CategoryMap load_categories(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  CategoryMap map;
  map.fallback = "other";
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      throw ParseError(line_no, "expected slot_type<TAB>category");
    auto slot = line.substr(0, tab);
    auto cat = line.substr(tab + 1);
    if (slot == "*")
      map.fallback = cat;
    else
      map.categories[slot] = cat;
  }
  return map;
}

double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

EvalReport evaluate(const Dataset& gold, std::span<const Prediction> predictions, const CategoryMap& categories) {
  if (gold.size() != predictions.size())
    throw ValidationError("gold has " + std::to_string(gold.size()) + " utterances but predictions have " +
                          std::to_string(predictions.size()));
  EvalReport r;
  std::size_t intent_hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& g = gold[i];
    const auto& p = predictions[i];
    if (!g.labels) throw ValidationError("gold utterance " + std::to_string(i) + " is unlabeled");
    if (p.labels.size() != g.labels->size())
      throw ValidationError("utterance " + std::to_string(i) + ": prediction length " +
                            std::to_string(p.labels.size()) + " vs gold " + std::to_string(g.labels->size()));
    auto gold_spans = extract_spans(*g.labels);
    auto pred_spans = extract_spans(p.labels);
    std::set<SlotSpan> gold_set(gold_spans.begin(), gold_spans.end());
    for (const auto& s : gold_spans) {
      ++r.gold_spans;
      ++r.per_category[categories.category_of(s.type)].gold;
    }
    for (const auto& s : pred_spans) {
      ++r.predicted_spans;
      auto& cat = r.per_category[categories.category_of(s.type)];
      ++cat.predicted;
      if (gold_set.count(s)) {
        ++r.correct_spans;
        ++cat.correct;
      }
    }
    if (g.intent) {
      ++r.intents_scored;
      intent_hits += (p.intent == *g.intent) ? 1 : 0;
    }
  }
  auto ratio = [](std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0; };
  r.precision = ratio(r.correct_spans, r.predicted_spans);
  r.recall = ratio(r.correct_spans, r.gold_spans);
  r.slot_f1 = f1_score(r.precision, r.recall);
  r.intent_accuracy = ratio(intent_hits, r.intents_scored);
  for (auto& [name, c] : r.per_category) {
    c.precision = ratio(c.correct, c.predicted);
    c.recall = ratio(c.correct, c.gold);
    c.f1 = f1_score(c.precision, c.recall);
    c.support_fraction = ratio(c.gold, r.gold_spans);
  }
  return r;
}

EvalReport evaluate(const Dataset& gold, std::span<const InferenceOutcome> outcomes, const CategoryMap& categories) {
  std::vector<Prediction> predictions;
  predictions.reserve(outcomes.size());
  for (const auto& o : outcomes) predictions.push_back(Prediction::from(o));
  return evaluate(gold, predictions, categories);
}

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-24s %10s %10s %10s %10s\n", "category", "support", "precision", "recall", "f1");
  out << buf;
  for (const auto& [name, c] : report.per_category) {
    std::snprintf(buf, sizeof buf, "%-24s %9.1f%% %10.2f %10.2f %10.2f\n", name.c_str(), 100.0 * c.support_fraction,
                  100.0 * c.precision, 100.0 * c.recall, 100.0 * c.f1);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-24s %9.1f%% %10.2f %10.2f %10.2f\n", "overall", report.gold_spans ? 100.0 : 0.0,
                100.0 * report.precision, 100.0 * report.recall, 100.0 * report.slot_f1);
  out << buf;
  std::snprintf(buf, sizeof buf, "intent accuracy %.2f%% (%zu utterances)\n", 100.0 * report.intent_accuracy,
                report.intents_scored);
  out << buf;
  return out.str();
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["slot_f1"] = report.slot_f1;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["intent_accuracy"] = report.intent_accuracy;
  j["per_category"] = nlohmann::json::object();
  for (const auto& [name, c] : report.per_category)
    j["per_category"][name] = {{"f1", c.f1},
                               {"precision", c.precision},
                               {"recall", c.recall},
                               {"support_fraction", c.support_fraction},
                               {"gold", c.gold},
                               {"predicted", c.predicted},
                               {"correct", c.correct}};
  return j;
}

}  // namespace idelex
