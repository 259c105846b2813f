#include "idelex/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "idelex/error.hpp"

namespace idelex {

Dataset::Dataset(std::vector<Utterance> utterances, const std::vector<SlotLabel>& extra_labels,
                 const std::vector<std::string>& extra_intents)
    : utterances_(std::move(utterances)) {
  std::set<SlotLabel> labels(extra_labels.begin(), extra_labels.end());
  labels.insert(SlotLabel::outside());
  std::set<std::string> intents(extra_intents.begin(), extra_intents.end());
  for (std::size_t i = 0; i < utterances_.size(); ++i) {
    const Utterance& u = utterances_[i];
    if (u.tokens.empty()) throw ValidationError("utterance " + std::to_string(i) + " has no tokens");
    if (u.labels) {
      if (u.labels->size() != u.tokens.size())
        throw ValidationError("utterance " + std::to_string(i) + ": " +
                              std::to_string(u.tokens.size()) + " tokens but " +
                              std::to_string(u.labels->size()) + " labels");
      if (!is_valid_bio(*u.labels))
        throw ValidationError("utterance " + std::to_string(i) + ": invalid BIO sequence");
      labels.insert(u.labels->begin(), u.labels->end());
    }
    if (u.intent) intents.insert(*u.intent);
  }
  label_set_.assign(labels.begin(), labels.end());
  intent_set_.assign(intents.begin(), intents.end());
}

bool Dataset::fully_labeled() const {
  return std::all_of(utterances_.begin(), utterances_.end(),
                     [](const Utterance& u) { return u.labels.has_value(); });
}

std::optional<std::size_t> Dataset::label_index(const SlotLabel& label) const {
  auto it = std::lower_bound(label_set_.begin(), label_set_.end(), label);
  if (it == label_set_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - label_set_.begin());
}

std::vector<std::string> Dataset::slot_types() const {
  std::set<std::string> types;
  for (const auto& l : label_set_)
    if (!l.is_outside()) types.insert(l.type);
  return {types.begin(), types.end()};
}

Format format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".json") ? Format::jsonl : Format::conll;
}

Tokens split_whitespace(std::string_view text) {
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(const Tokens& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

namespace {

// Finishes one utterance: lowercasing, BIO repair.
void finish(Utterance& u, const LoadOptions& options, std::size_t& repairs) {
  if (options.lowercase)
    for (auto& t : u.tokens) t = to_lower(t);
  if (u.labels) repairs += repair_bio(*u.labels);
}

LoadResult read_conll(std::istream& in, const LoadOptions& options) {
  std::vector<Utterance> out;
  std::size_t repairs = 0;
  Utterance current;
  bool labeled = false, unlabeled = false;
  std::size_t block_start = 0;

  auto flush = [&](std::size_t line_no) {
    if (current.tokens.empty()) {
      if (current.intent) throw ParseError(line_no, "intent line without tokens");
      return;
    }
    if (labeled && unlabeled) throw ParseError(block_start, "block mixes labeled and unlabeled lines");
    if (!labeled) current.labels.reset();
    finish(current, options, repairs);
    out.push_back(std::move(current));
    current = Utterance{};
    labeled = unlabeled = false;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush(line_no);
      continue;
    }
    if (line.rfind("#intent=", 0) == 0) {
      if (!current.tokens.empty()) flush(line_no);
      if (current.intent) throw ParseError(line_no, "duplicate intent line");
      current.intent = line.substr(8);
      if (current.intent->empty()) throw ParseError(line_no, "empty intent");
      block_start = line_no;
      continue;
    }
    if (current.tokens.empty() && !current.intent) block_start = line_no;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      if (line.find_first_of(" ") != std::string::npos) throw ParseError(line_no, "token contains a space");
      current.tokens.push_back(line);
      unlabeled = true;
      continue;
    }
    if (line.find('\t', tab + 1) != std::string::npos) throw ParseError(line_no, "expected token<TAB>label");
    std::string token = line.substr(0, tab);
    if (token.empty()) throw ParseError(line_no, "empty token");
    SlotLabel label;
    try {
      label = SlotLabel::parse(line.substr(tab + 1));
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
    if (!current.labels) current.labels.emplace();
    current.tokens.push_back(std::move(token));
    current.labels->push_back(std::move(label));
    labeled = true;
  }
  flush(line_no + 1);
  if (out.empty()) throw ValidationError("no utterances");
  return {Dataset(std::move(out)), repairs};
}

LoadResult read_jsonl(std::istream& in, const LoadOptions& options) {
  std::vector<Utterance> out;
  std::size_t repairs = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::size_t record = out.size();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    try {
      Utterance u;
      if (!j.is_object() || !j.contains("tokens")) throw ParseError(line_no, "record without \"tokens\"");
      u.tokens = j.at("tokens").get<Tokens>();
      if (u.tokens.empty()) throw ParseError(line_no, "record " + std::to_string(record) + " has no tokens");
      if (j.contains("labels") && !j["labels"].is_null()) {
        auto raw = j["labels"].get<std::vector<std::string>>();
        if (raw.size() != u.tokens.size())
          throw ParseError(line_no, "record " + std::to_string(record) + ": length mismatch, " +
                                        std::to_string(u.tokens.size()) + " tokens vs " +
                                        std::to_string(raw.size()) + " labels");
        LabelSequence labels;
        for (const auto& r : raw) labels.push_back(SlotLabel::parse(r));
        u.labels = std::move(labels);
      }
      if (j.contains("intent") && !j["intent"].is_null()) u.intent = j["intent"].get<std::string>();
      finish(u, options, repairs);
      out.push_back(std::move(u));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(line_no, "record " + std::to_string(record) + ": " + e.what());
    }
  }
  if (out.empty()) throw ValidationError("no utterances");
  return {Dataset(std::move(out)), repairs};
}

}  // namespace

LoadResult read_dataset(std::istream& in, Format format, const LoadOptions& options) {
  return format == Format::conll ? read_conll(in, options) : read_jsonl(in, options);
}

LoadResult load_dataset(const std::filesystem::path& path, Format format, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_dataset(in, format, options);
}

void write_dataset(const Dataset& data, std::ostream& out, Format format) {
  for (const auto& u : data) {
    if (format == Format::jsonl) {
      nlohmann::json j;
      j["tokens"] = u.tokens;
      if (u.labels) j["labels"] = label_strings(*u.labels);
      if (u.intent) j["intent"] = *u.intent;
      out << j.dump() << '\n';
    } else {
      if (u.intent) out << "#intent=" << *u.intent << '\n';
      for (std::size_t i = 0; i < u.tokens.size(); ++i) {
        out << u.tokens[i];
        if (u.labels) out << '\t' << (*u.labels)[i].str();
        out << '\n';
      }
      out << '\n';
    }
  }
}

void save_dataset(const Dataset& data, const std::filesystem::path& path, Format format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_dataset(data, out, format);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace idelex
