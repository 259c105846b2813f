#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "idelex/backend.hpp"
#include "idelex/gazetteer.hpp"

namespace idelex {

struct TrainingOptions {
  std::size_t epochs = 12;
  double learning_rate = 0.5;
  double l2 = 1e-6;
  std::uint64_t seed = 0;
  /// Probability that a training token's identity feature is swapped for the
  /// unknown-word feature.
  double unk_rate = 0.0;
  TokenTable tokens;
};

/// Per-token maximum-entropy tagger plus a bag-of-tokens intent classifier.
///
/// Slot features: bias, current/previous/next token identity, previous
/// label (gold at training time, greedy prediction at parse time) and a
/// special-token flag. Tokens outside the training vocabulary fire the
/// unknown-word feature instead of an identity feature.
class LogLinearBackend final : public Backend {
 public:
  /// Throws ValidationError on unlabeled data or fewer than two labels.
  static LogLinearBackend train(const Dataset& data, const TrainingOptions& options);

  ParseResult parse(std::span<const std::string> tokens) const override;
  const std::vector<SlotLabel>& label_set() const override { return labels_; }
  const std::vector<std::string>& intent_set() const override { return intents_; }
  const TokenTable& token_table() const noexcept { return tokens_; }

  void write(std::ostream& out) const;
  static LogLinearBackend read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static LogLinearBackend load(const std::filesystem::path& path);

  bool operator==(const LogLinearBackend& o) const {
    return labels_ == o.labels_ && intents_ == o.intents_ && tokens_ == o.tokens_ && slot_ == o.slot_ &&
           intent_ == o.intent_;
  }

 private:
  struct FeatureTable {
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::string> names;
    std::vector<double> weights;  // row-major, names.size() x classes

    std::uint32_t intern(const std::string& name, std::size_t classes);
    bool operator==(const FeatureTable& o) const { return names == o.names && weights == o.weights; }
  };

  void slot_features(std::span<const std::string> tokens, std::size_t pos, const std::string& prev_label,
                     bool unknown_identity, std::vector<std::string>& out) const;
  bool known(const std::string& token) const;

  std::vector<SlotLabel> labels_;
  std::vector<std::string> intents_;
  TokenTable tokens_;
  FeatureTable slot_;
  FeatureTable intent_;
};

}  // namespace idelex
