#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "idelex/corpus.hpp"
#include "idelex/engine.hpp"

namespace idelex {

struct Prediction {
  std::string intent;
  LabelSequence labels;

  static Prediction from(const InferenceOutcome& outcome) { return {outcome.intent, outcome.labels}; }
};

/// slot type -> reporting category. Unmapped types fall into `fallback`
/// when set, otherwise into a category named after the type itself.
struct CategoryMap {
  std::map<std::string, std::string> categories;
  std::optional<std::string> fallback;

  std::string category_of(const std::string& slot_type) const;
};

/// TSV "slot_type<TAB>category"; a "*" row sets the fallback, which
/// otherwise defaults to "other".
CategoryMap load_categories(const std::filesystem::path& path);

struct CategoryScore {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double support_fraction = 0.0;  ///< share of all gold spans
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
};

struct EvalReport {
  double slot_f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double intent_accuracy = 0.0;
  std::size_t gold_spans = 0;
  std::size_t predicted_spans = 0;
  std::size_t correct_spans = 0;
  std::size_t intents_scored = 0;
  std::map<std::string, CategoryScore> per_category;
};

double f1_score(double precision, double recall);

/// Exact-span (type and boundaries) matching. Throws ValidationError on a
/// count or length mismatch, or unlabeled gold.
EvalReport evaluate(const Dataset& gold, std::span<const Prediction> predictions, const CategoryMap& categories = {});
EvalReport evaluate(const Dataset& gold, std::span<const InferenceOutcome> outcomes, const CategoryMap& categories = {});

std::string format_report(const EvalReport& report);
nlohmann::json report_to_json(const EvalReport& report);

}  // namespace idelex
