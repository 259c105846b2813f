#include "idelex/loglinear.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "idelex/error.hpp"

namespace idelex {

namespace {

constexpr const char* kMagic = "idelex-loglinear";
constexpr int kVersion = 1;
const std::string kUnknown = "w=<unk>";
const std::string kStart = "<s>";
const std::string kEnd = "</s>";

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError(line, "bad number '" + std::string(s) + "'");
  return v;
}

// One SGD step of multinomial logistic regression on the given active rows.
void sgd_step(std::vector<double>& weights, std::size_t classes, const std::vector<std::uint32_t>& active,
              std::size_t gold, double rate, double l2) {
  std::vector<double> scores(classes, 0.0);
  for (auto f : active)
    for (std::size_t c = 0; c < classes; ++c) scores[c] += weights[f * classes + c];
  softmax(scores);
  scores[gold] -= 1.0;
  const double shrink = 1.0 - rate * l2;
  for (auto f : active)
    for (std::size_t c = 0; c < classes; ++c) {
      double& w = weights[f * classes + c];
      w = w * shrink - rate * scores[c];
    }
}

}  // namespace

std::uint32_t LogLinearBackend::FeatureTable::intern(const std::string& name, std::size_t classes) {
  auto [it, fresh] = index.emplace(name, static_cast<std::uint32_t>(names.size()));
  if (fresh) {
    names.push_back(name);
    weights.resize(weights.size() + classes, 0.0);
  }
  return it->second;
}

bool LogLinearBackend::known(const std::string& token) const { return slot_.index.count("w=" + token) > 0; }

void LogLinearBackend::slot_features(std::span<const std::string> tokens, std::size_t pos,
                                     const std::string& prev_label, bool unknown_identity,
                                     std::vector<std::string>& out) const {
  out.clear();
  out.emplace_back("b");
  out.push_back(unknown_identity ? kUnknown : "w=" + tokens[pos]);
  out.push_back("p=" + (pos == 0 ? kStart : tokens[pos - 1]));
  out.push_back("n=" + (pos + 1 == tokens.size() ? kEnd : tokens[pos + 1]));
  out.push_back("l=" + prev_label);
  if (tokens_.is_special(tokens[pos])) out.emplace_back("s=1");
}

LogLinearBackend LogLinearBackend::train(const Dataset& data, const TrainingOptions& options) {
  if (!data.fully_labeled()) throw ValidationError("training data must be fully labeled");
  if (data.label_set().size() < 2) throw ValidationError("training needs at least two slot labels");
  if (data.intent_set().empty()) throw ValidationError("training data carries no intents");
  for (const auto& u : data)
    if (!u.intent) throw ValidationError("training utterance without intent");

  LogLinearBackend m;
  m.labels_ = data.label_set();
  m.intents_ = data.intent_set();
  m.tokens_ = options.tokens;
  const std::size_t L = m.labels_.size();
  const std::size_t I = m.intents_.size();

  struct SlotExample {
    std::vector<std::uint32_t> features;
    std::uint32_t unknown_variant;  // identity feature replaced by the unknown-word row
    std::size_t gold;
  };
  struct IntentExample {
    std::vector<std::uint32_t> features;
    std::size_t gold;
  };
  std::vector<SlotExample> slot_examples;
  std::vector<IntentExample> intent_examples;
  std::vector<std::string> names;
  const std::uint32_t unknown_row = m.slot_.intern(kUnknown, L);
  for (const auto& u : data) {
    const auto& labels = *u.labels;
    for (std::size_t i = 0; i < u.tokens.size(); ++i) {
      m.slot_features(u.tokens, i, i == 0 ? kStart : labels[i - 1].str(), false, names);
      SlotExample ex;
      for (const auto& n : names) ex.features.push_back(m.slot_.intern(n, L));
      ex.unknown_variant = unknown_row;
      ex.gold = *data.label_index(labels[i]);
      slot_examples.push_back(std::move(ex));
    }
    IntentExample ie;
    std::set<std::string> bag(u.tokens.begin(), u.tokens.end());
    ie.features.push_back(m.intent_.intern("b", I));
    for (const auto& t : bag) ie.features.push_back(m.intent_.intern("bow=" + t, I));
    ie.gold = static_cast<std::size_t>(std::find(m.intents_.begin(), m.intents_.end(), *u.intent) - m.intents_.begin());
    intent_examples.push_back(std::move(ie));
  }

  std::mt19937_64 rng(options.seed);
  std::bernoulli_distribution drop(options.unk_rate);
  std::vector<std::size_t> order(slot_examples.size());
  std::vector<std::size_t> intent_order(intent_examples.size());
  std::vector<std::uint32_t> active;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    const double rate = options.learning_rate / (1.0 + static_cast<double>(epoch));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (auto idx : order) {
      const auto& ex = slot_examples[idx];
      active = ex.features;
      if (options.unk_rate > 0.0 && drop(rng)) active[1] = ex.unknown_variant;
      sgd_step(m.slot_.weights, L, active, ex.gold, rate, options.l2);
    }
    std::iota(intent_order.begin(), intent_order.end(), std::size_t{0});
    std::shuffle(intent_order.begin(), intent_order.end(), rng);
    for (auto idx : intent_order)
      sgd_step(m.intent_.weights, I, intent_examples[idx].features, intent_examples[idx].gold, rate, options.l2);
  }
  return m;
}

ParseResult LogLinearBackend::parse(std::span<const std::string> tokens) const {
  if (tokens.empty()) throw ValidationError("cannot parse an empty token sequence");
  const std::size_t L = labels_.size();
  const std::size_t I = intents_.size();
  std::vector<std::vector<double>> rows;
  rows.reserve(tokens.size());
  std::vector<std::string> names;
  std::string prev = kStart;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    slot_features(tokens, i, prev, !known(tokens[i]), names);
    std::vector<double> scores(L, 0.0);
    for (const auto& n : names) {
      auto it = slot_.index.find(n);
      if (it == slot_.index.end()) continue;
      const double* w = &slot_.weights[it->second * L];
      for (std::size_t c = 0; c < L; ++c) scores[c] += w[c];
    }
    softmax(scores);
    prev = labels_[argmax(scores)].str();
    rows.push_back(std::move(scores));
  }
  std::vector<double> intent_scores(I, 0.0);
  std::set<std::string> bag(tokens.begin(), tokens.end());
  auto add = [&](const std::string& n) {
    auto it = intent_.index.find(n);
    if (it == intent_.index.end()) return;
    for (std::size_t c = 0; c < I; ++c) intent_scores[c] += intent_.weights[it->second * I + c];
  };
  add("b");
  for (const auto& t : bag) add("bow=" + t);
  softmax(intent_scores);
  return make_parse_result(std::move(rows), std::move(intent_scores), labels_, intents_);
}

void LogLinearBackend::write(std::ostream& out) const {
  out << kMagic << ' ' << kVersion << '\n';
  out << "labels " << labels_.size() << '\n';
  for (const auto& l : labels_) out << l.str() << '\n';
  out << "intents " << intents_.size() << '\n';
  for (const auto& i : intents_) out << i << '\n';
  out << "special " << tokens_.entries().size() << '\n';
  for (const auto& e : tokens_.entries())
    out << e.surface << '\t' << e.slot_type << '\t' << e.shared_group.value_or("") << '\n';
  auto dump = [&](const char* title, const FeatureTable& table, std::size_t classes) {
    out << title << ' ' << table.names.size() << '\n';
    for (std::size_t f = 0; f < table.names.size(); ++f) {
      out << table.names[f];
      for (std::size_t c = 0; c < classes; ++c) out << '\t' << format_double(table.weights[f * classes + c]);
      out << '\n';
    }
  };
  dump("slot_features", slot_, labels_.size());
  dump("intent_features", intent_, intents_.size());
  out << "end\n";
}

LogLinearBackend LogLinearBackend::read(std::istream& in) {
  LogLinearBackend m;
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> std::string& {
    if (!std::getline(in, line)) throw ParseError(line_no + 1, "unexpected end of model file");
    ++line_no;
    return line;
  };
  auto header = [&](const std::string& expected) {
    std::istringstream hs(next());
    std::string word;
    std::size_t count = 0;
    if (!(hs >> word >> count) || word != expected) throw ParseError(line_no, "expected '" + expected + " <count>'");
    return count;
  };
  {
    std::istringstream hs(next());
    std::string magic;
    int version = 0;
    if (!(hs >> magic >> version) || magic != kMagic) throw ParseError(line_no, "not an idelex model file");
    if (version != kVersion) throw ParseError(line_no, "unsupported model version " + std::to_string(version));
  }
  for (std::size_t n = header("labels"); n > 0; --n) {
    try {
      m.labels_.push_back(SlotLabel::parse(next()));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  for (std::size_t n = header("intents"); n > 0; --n) m.intents_.push_back(next());
  std::vector<SpecialToken> specials;
  for (std::size_t n = header("special"); n > 0; --n) {
    auto parts = std::vector<std::string>{};
    std::stringstream ss(next());
    std::string part;
    while (std::getline(ss, part, '\t')) parts.push_back(part);
    if (parts.size() == 2) parts.emplace_back();
    if (parts.size() != 3) throw ParseError(line_no, "bad special token row");
    specials.push_back({parts[0], parts[1], parts[2].empty() ? std::nullopt : std::optional<std::string>(parts[2])});
  }
  m.tokens_ = TokenTable::from_entries(std::move(specials));
  auto load_table = [&](const char* title, FeatureTable& table, std::size_t classes) {
    for (std::size_t n = header(title); n > 0; --n) {
      const std::string& row = next();
      auto tab = row.find('\t');
      if (tab == std::string::npos) throw ParseError(line_no, "feature row without weights");
      std::uint32_t id = table.intern(row.substr(0, tab), classes);
      std::size_t start = tab + 1;
      for (std::size_t c = 0; c < classes; ++c) {
        auto stop = row.find('\t', start);
        if ((stop == std::string::npos) != (c + 1 == classes)) throw ParseError(line_no, "wrong number of weights");
        if (stop == std::string::npos) stop = row.size();
        table.weights[id * classes + c] = parse_double(std::string_view(row).substr(start, stop - start), line_no);
        start = stop + 1;
      }
    }
  };
  load_table("slot_features", m.slot_, m.labels_.size());
  load_table("intent_features", m.intent_, m.intents_.size());
  if (next() != "end") throw ParseError(line_no, "missing end marker");
  if (m.labels_.size() < 2 || m.intents_.empty()) throw ParseError(line_no, "model has an empty inventory");
  return m;
}

void LogLinearBackend::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write(out);
  if (!out) throw IoError("write failed for " + path.string());
}

LogLinearBackend LogLinearBackend::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read(in);
}

}  // namespace idelex
