#include "idelex/gazetteer.hpp"

#include <algorithm>
#include <fstream>

#include "idelex/error.hpp"

namespace idelex {

SharedGroups parse_shared_groups(std::string_view text) {
  SharedGroups groups;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto stop = text.find(';', start);
    if (stop == std::string_view::npos) stop = text.size();
    auto item = text.substr(start, stop - start);
    start = stop + 1;
    if (split_whitespace(item).empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ValidationError("shared group '" + std::string(item) + "' lacks '='");
    auto name = split_whitespace(item.substr(0, eq));
    if (name.size() != 1) throw ValidationError("bad shared group name in '" + std::string(item) + "'");
    std::string members(item.substr(eq + 1));
    std::replace(members.begin(), members.end(), ',', ' ');
    auto slots = split_whitespace(members);
    if (slots.size() < 2) throw ValidationError("shared group '" + name[0] + "' needs at least two slots");
    groups[name[0]] = slots;
  }
  return groups;
}

std::string format_shared_groups(const SharedGroups& groups) {
  std::string out;
  for (const auto& [name, slots] : groups) {
    if (!out.empty()) out += ';';
    out += name + '=';
    for (std::size_t i = 0; i < slots.size(); ++i) out += (i ? "," : "") + slots[i];
  }
  return out;
}

TokenTable TokenTable::build(const std::vector<std::string>& slot_types, const SharedGroups& groups,
                             const std::set<std::string>& vocabulary) {
  std::map<std::string, std::string> group_of;
  for (const auto& [name, members] : groups)
    for (const auto& slot : members)
      if (!group_of.emplace(slot, name).second)
        throw ValidationError("slot '" + slot + "' belongs to more than one shared group");

  std::set<std::string> all(slot_types.begin(), slot_types.end());
  for (const auto& [slot, group] : group_of) all.insert(slot);

  std::vector<SpecialToken> entries;
  for (const auto& slot : all) {
    auto g = group_of.find(slot);
    if (g != group_of.end())
      entries.push_back({"<" + g->second + ">", slot, g->second});
    else
      entries.push_back({"<" + slot + ">", slot, std::nullopt});
  }
  for (const auto& e : entries)
    if (vocabulary.count(e.surface))
      throw ValidationError("special token " + e.surface + " collides with a vocabulary word");
  return from_entries(std::move(entries));
}

TokenTable TokenTable::from_entries(std::vector<SpecialToken> entries) {
  std::map<std::string, const SpecialToken*> by_surface;
  std::set<std::string> slots;
  for (const auto& e : entries) {
    if (e.slot_type.empty() || e.surface.empty()) throw ValidationError("incomplete special token entry");
    if (!slots.insert(e.slot_type).second) throw ValidationError("duplicate special token for slot " + e.slot_type);
    auto [it, fresh] = by_surface.emplace(e.surface, &e);
    if (!fresh && (!e.shared_group || it->second->shared_group != e.shared_group))
      throw ValidationError("special token surface " + e.surface + " used by unrelated slots");
  }
  TokenTable table;
  table.entries_ = std::move(entries);
  std::sort(table.entries_.begin(), table.entries_.end(),
            [](const SpecialToken& a, const SpecialToken& b) { return a.slot_type < b.slot_type; });
  return table;
}

bool TokenTable::has_slot(const std::string& slot_type) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.slot_type == slot_type; });
}

const std::string& TokenTable::surface(const std::string& slot_type) const {
  for (const auto& e : entries_)
    if (e.slot_type == slot_type) return e.surface;
  throw ValidationError("no special token for slot '" + slot_type + "'");
}

bool TokenTable::is_special(const std::string& token) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.surface == token; });
}

bool TokenTable::same_group(const std::string& a, const std::string& b) const {
  if (a == b) return true;
  const SpecialToken* ea = nullptr;
  const SpecialToken* eb = nullptr;
  for (const auto& e : entries_) {
    if (e.slot_type == a) ea = &e;
    if (e.slot_type == b) eb = &e;
  }
  return ea && eb && ea->shared_group && ea->shared_group == eb->shared_group;
}

bool Gazetteer::matchable(const Phrase& phrase) const {
  return !context_phrases.count(phrase) && !ambiguous_phrases.count(phrase);
}

Gazetteer build_gazetteer(const Dataset& train, const SharedGroups& groups, const GazetteerOptions& options) {
  if (!train.fully_labeled()) throw ValidationError("gazetteer needs gold labels on every utterance");
  std::map<std::string, std::string> group_of;
  for (const auto& [name, members] : groups)
    for (const auto& slot : members) group_of[slot] = name;

  Gazetteer g;
  std::map<Phrase, std::set<std::string>> types_of;
  for (const auto& u : train) {
    const auto& labels = *u.labels;
    for (const auto& span : extract_spans(labels)) {
      Phrase p(u.tokens.begin() + span.begin, u.tokens.begin() + span.end);
      types_of[p].insert(span.type);
      g.slot_phrases[span.type].insert(std::move(p));
    }
    // n-grams inside maximal all-Outside runs
    std::size_t i = 0;
    while (i < labels.size()) {
      if (!labels[i].is_outside()) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < labels.size() && labels[j].is_outside()) ++j;
      for (std::size_t a = i; a < j; ++a)
        for (std::size_t len = 1; len <= options.context_ngram && a + len <= j; ++len)
          g.context_phrases.emplace(u.tokens.begin() + a, u.tokens.begin() + a + len);
      i = j;
    }
  }
  for (const auto& [phrase, types] : types_of) {
    if (types.size() < 2) continue;
    auto first = group_of.find(*types.begin());
    bool one_group = first != group_of.end() && std::all_of(types.begin(), types.end(), [&](const std::string& t) {
                       auto it = group_of.find(t);
                       return it != group_of.end() && it->second == first->second;
                     });
    if (!one_group) g.ambiguous_phrases.insert(phrase);
  }
  return g;
}

void write_gazetteer(const Gazetteer& gazetteer, std::ostream& out) {
  for (const auto& [type, phrases] : gazetteer.slot_phrases)
    for (const auto& p : phrases) out << "slot\t" << type << '\t' << join(p) << '\n';
  for (const auto& p : gazetteer.context_phrases) out << "context\t\t" << join(p) << '\n';
  for (const auto& p : gazetteer.ambiguous_phrases) out << "ambiguous\t\t" << join(p) << '\n';
}

Gazetteer read_gazetteer(std::istream& in) {
  Gazetteer g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos)
      throw ParseError(line_no, "expected three tab-separated columns");
    std::string kind = line.substr(0, t1);
    std::string type = line.substr(t1 + 1, t2 - t1 - 1);
    Phrase phrase = split_whitespace(line.substr(t2 + 1));
    if (phrase.empty()) throw ParseError(line_no, "empty phrase");
    if (kind == "slot") {
      if (type.empty()) throw ParseError(line_no, "slot row without slot type");
      g.slot_phrases[type].insert(std::move(phrase));
    } else if (kind == "context" || kind == "ambiguous") {
      if (!type.empty()) throw ParseError(line_no, kind + " row must leave the slot column empty");
      (kind == "context" ? g.context_phrases : g.ambiguous_phrases).insert(std::move(phrase));
    } else {
      throw ParseError(line_no, "unknown row kind '" + kind + "'");
    }
  }
  return g;
}

void save_gazetteer(const Gazetteer& gazetteer, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_gazetteer(gazetteer, out);
}

Gazetteer load_gazetteer(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_gazetteer(in);
}

}  // namespace idelex
