#include "idelex/synthetic.hpp"

#include <random>
#include <set>

#include "idelex/error.hpp"

namespace idelex {

namespace {

std::vector<std::string> words(const char* text) { return split_whitespace(text); }

bool is_placeholder(const std::string& token) {
  return token.size() > 2 && token.front() == '<' && token.back() == '>';
}

std::string placeholder_slot(const std::string& token) { return token.substr(1, token.size() - 2); }

void validate(const SyntheticSpec& spec) {
  if (spec.templates.empty()) throw ValidationError("synthetic spec has no templates");
  if (spec.train_size == 0 || spec.test_size == 0) throw ValidationError("synthetic spec sizes must be positive");
  for (const auto& [name, values] : spec.closed_slots) {
    if (values.empty()) throw ValidationError("slot '" + name + "' has no values");
    if (spec.ood_slots.count(name)) throw ValidationError("slot '" + name + "' declared both closed and OOD");
  }
  for (const auto& [name, ood] : spec.ood_slots) {
    if (ood.train_words.empty() || ood.test_words.empty())
      throw ValidationError("OOD slot '" + name + "' needs train and test words");
    if (ood.train_min_len == 0 || ood.train_min_len > ood.train_max_len || ood.test_min_len == 0 ||
        ood.test_min_len > ood.test_max_len)
      throw ValidationError("OOD slot '" + name + "' has a bad length range");
    if (!(ood.test_known_rate >= 0.0 && ood.test_known_rate < 1.0))
      throw ValidationError("OOD slot '" + name + "' has a bad known-word rate");
  }
  std::set<std::string> train_vocab;
  for (const auto& t : spec.templates) {
    if (t.intent.empty()) throw ValidationError("template without intent");
    auto toks = split_whitespace(t.pattern);
    if (toks.empty()) throw ValidationError("empty template pattern");
    for (const auto& tok : toks) {
      if (!is_placeholder(tok)) {
        train_vocab.insert(tok);
        continue;
      }
      auto slot = placeholder_slot(tok);
      if (!spec.closed_slots.count(slot) && !spec.ood_slots.count(slot))
        throw ValidationError("template references undeclared slot '" + slot + "'");
    }
  }
  for (const auto& [name, values] : spec.closed_slots)
    for (const auto& v : values)
      for (auto& w : split_whitespace(v)) train_vocab.insert(w);
  for (const auto& [name, ood] : spec.ood_slots) train_vocab.insert(ood.train_words.begin(), ood.train_words.end());
  for (const auto& [name, ood] : spec.ood_slots) {
    std::set<std::string> test(ood.test_words.begin(), ood.test_words.end());
    std::size_t shared = 0;
    for (const auto& w : test) shared += train_vocab.count(w);
    double overlap = static_cast<double>(shared) / static_cast<double>(test.size());
    if (overlap > spec.max_ood_overlap)
      throw ValidationError("OOD slot '" + name + "': test vocabulary overlaps train vocabulary by " +
                            std::to_string(overlap) + " (allowed " + std::to_string(spec.max_ood_overlap) + ")");
  }
}

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

Dataset generate_split(const SyntheticSpec& spec, std::size_t count, bool test, std::mt19937_64& rng) {
  std::vector<Utterance> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const auto& tmpl = pick(spec.templates, rng);
    Utterance u;
    u.intent = tmpl.intent;
    u.labels.emplace();
    for (const auto& tok : split_whitespace(tmpl.pattern)) {
      if (!is_placeholder(tok)) {
        u.tokens.push_back(tok);
        u.labels->push_back(SlotLabel::outside());
        continue;
      }
      auto slot = placeholder_slot(tok);
      Tokens value;
      if (auto it = spec.closed_slots.find(slot); it != spec.closed_slots.end()) {
        value = split_whitespace(pick(it->second, rng));
      } else {
        const auto& ood = spec.ood_slots.at(slot);
        std::size_t lo = test ? ood.test_min_len : ood.train_min_len;
        std::size_t hi = test ? ood.test_max_len : ood.train_max_len;
        std::uniform_int_distribution<std::size_t> len(lo, hi);
        const auto& pool = test ? ood.test_words : ood.train_words;
        std::bernoulli_distribution known(test && !ood.test_known_words.empty() ? ood.test_known_rate : 0.0);
        for (std::size_t k = len(rng); k > 0; --k)
          value.push_back(known(rng) ? pick(ood.test_known_words, rng) : pick(pool, rng));
      }
      for (std::size_t k = 0; k < value.size(); ++k) {
        u.tokens.push_back(value[k]);
        u.labels->push_back(k == 0 ? SlotLabel::begin(slot) : SlotLabel::inside(slot));
      }
    }
    out.push_back(std::move(u));
  }
  return Dataset(std::move(out));
}

}  // namespace

double slot_oov_rate(const Dataset& train, const Dataset& test, const std::string& slot) {
  std::set<std::string> vocab;
  for (const auto& u : train) vocab.insert(u.tokens.begin(), u.tokens.end());
  std::size_t total = 0, oov = 0;
  for (const auto& u : test) {
    if (!u.labels) continue;
    for (std::size_t i = 0; i < u.tokens.size(); ++i) {
      if ((*u.labels)[i].type != slot) continue;
      ++total;
      oov += vocab.count(u.tokens[i]) ? 0 : 1;
    }
  }
  return total ? static_cast<double>(oov) / static_cast<double>(total) : 0.0;
}

SyntheticCorpus generate_synthetic_corpus(std::uint64_t seed, const SyntheticSpec& spec) {
  validate(spec);
  std::seed_seq train_seq{seed, std::uint64_t{0}};
  std::seed_seq test_seq{seed, std::uint64_t{1}};
  std::mt19937_64 train_rng(train_seq);
  std::mt19937_64 test_rng(test_seq);
  SyntheticCorpus corpus;
  corpus.train = generate_split(spec, spec.train_size, false, train_rng);
  corpus.test = generate_split(spec, spec.test_size, true, test_rng);
  for (const auto& [name, ood] : spec.ood_slots) {
    double rate = slot_oov_rate(corpus.train, corpus.test, name);
    if (rate < 1.0 - spec.max_ood_overlap)
      throw ValidationError("OOD slot '" + name + "': only " + std::to_string(rate) +
                            " of test tokens are out of vocabulary");
    corpus.oov_rate[name] = rate;
  }
  return corpus;
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
  SyntheticSpec spec;
  try {
    spec.train_size = j.value("train_size", spec.train_size);
    spec.test_size = j.value("test_size", spec.test_size);
    spec.max_ood_overlap = j.value("max_ood_overlap", spec.max_ood_overlap);
    for (const auto& t : j.at("templates")) spec.templates.push_back({t.at("intent"), t.at("pattern")});
    for (const auto& [name, s] : j.at("slots").items()) {
      if (s.value("ood", false)) {
        OodSlotSpec ood;
        ood.train_words = s.at("train_words").get<std::vector<std::string>>();
        ood.test_words = s.at("test_words").get<std::vector<std::string>>();
        if (s.contains("test_known_words")) ood.test_known_words = s["test_known_words"].get<std::vector<std::string>>();
        ood.test_known_rate = s.value("test_known_rate", 0.0);
        if (s.contains("train_length")) {
          ood.train_min_len = s["train_length"].at(0);
          ood.train_max_len = s["train_length"].at(1);
        }
        if (s.contains("test_length")) {
          ood.test_min_len = s["test_length"].at(0);
          ood.test_max_len = s["test_length"].at(1);
        }
        spec.ood_slots[name] = std::move(ood);
      } else {
        spec.closed_slots[name] = s.at("values").get<std::vector<std::string>>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad synthetic spec: ") + e.what());
  }
  return spec;
}

nlohmann::json synthetic_spec_to_json(const SyntheticSpec& spec) {
  nlohmann::json j;
  j["train_size"] = spec.train_size;
  j["test_size"] = spec.test_size;
  j["max_ood_overlap"] = spec.max_ood_overlap;
  j["templates"] = nlohmann::json::array();
  for (const auto& t : spec.templates) j["templates"].push_back({{"intent", t.intent}, {"pattern", t.pattern}});
  j["slots"] = nlohmann::json::object();
  for (const auto& [name, values] : spec.closed_slots) j["slots"][name] = {{"values", values}};
  for (const auto& [name, ood] : spec.ood_slots)
    j["slots"][name] = {{"ood", true},
                        {"train_words", ood.train_words},
                        {"test_words", ood.test_words},
                        {"test_known_words", ood.test_known_words},
                        {"test_known_rate", ood.test_known_rate},
                        {"train_length", {ood.train_min_len, ood.train_max_len}},
                        {"test_length", {ood.test_min_len, ood.test_max_len}}};
  return j;
}

SyntheticSpec default_synthetic_spec() {
  SyntheticSpec spec;
  spec.templates = {
      {"send_message", "send a message to <contact> saying <message>"},
      {"send_message", "text <contact> saying <message>"},
      {"send_message", "tell <contact> that <message>"},
      {"send_message", "message <contact> on <app> saying <message>"},
      {"send_message", "send <contact> a text <message>"},
      {"send_message", "reply to <contact> with <message>"},
      {"send_message", "send <message> to <contact>"},
      {"read_messages", "read my messages from <contact>"},
      {"read_messages", "show my messages from <datetime>"},
      {"read_messages", "read new messages on <app>"},
      {"read_messages", "any new messages from <contact>"},
      {"call_contact", "call <contact>"},
      {"call_contact", "call <contact> on <app>"},
      {"call_contact", "video call <contact> <datetime>"},
      {"call_contact", "phone <contact>"},
      {"set_reminder", "remind me to call <contact> <datetime>"},
      {"set_reminder", "set a reminder <datetime> to text <contact>"},
      {"set_reminder", "remind me <datetime> that <message>"},
  };
  spec.closed_slots["contact"] = words(
      "alice bob carol dave erin frank grace heidi ivan judy mallory niaj olivia peggy rupert sybil "
      "trent victor walter mom dad grandma");
  for (const char* full : {"john smith", "mary ann", "li wei", "jose garcia", "anna maria lopez", "uncle ben",
                           "aunt sue", "dr patel"})
    spec.closed_slots["contact"].push_back(full);
  spec.closed_slots["datetime"] = {"tomorrow",       "tonight",       "today",          "at noon",
                                   "on friday",      "next week",     "this evening",   "at five pm",
                                   "in an hour",     "on monday",     "later today",    "at seven thirty",
                                   "sunday morning", "in ten minutes"};
  spec.closed_slots["app"] = words("whatsapp messenger signal telegram skype sms");
  OodSlotSpec message;
  message.train_words = words(
      "hi hello hey thanks ok okay yes no sure later soon home now see you love miss good night "
      "great cool lunch dinner coffee happy birthday congrats welcome back running late way almost "
      "done busy free sorry here outside downstairs waiting please pick up milk bread eggs keys forgot "
      "left work office school gym meeting over nice awesome fine bye cheers hugs lol wow yay agreed "
      "perfect noted maybe definitely tired hungry sleepy bored excited stuck traffic parking boarding "
      "landed arrived leaving");
  message.test_words = words(
      "apartment balcony plumber leaking faucet kitchen landlord invoice paid refund package delivered "
      "neighbor borrowed ladder garden tomatoes ripe harvest recipe lasagna oven preheat grocery receipt "
      "dentist appointment rescheduled pharmacy prescription renewal passport expired visa embassy "
      "interview nervous confident presentation slides projector broken laptop charger battery "
      "flat tire mechanic garage estimate expensive cheaper warranty receipts taxes accountant "
      "spreadsheet budget quarterly report draft feedback revisions submitted approved rejected "
      "conference keynote speaker hotel booking confirmed cancelled flight delayed gate changed "
      "luggage lost found umbrella raincoat weather forecast sunny cloudy thunderstorm canoe lake "
      "cabin weekend camping tent sleeping bags marshmallows campfire guitar concert tickets sold "
      "seats rooftop orchestra violin rehearsal recital piano lessons teacher homework algebra "
      "chemistry exam results scholarship application essay deadline extended library overdue "
      "novel chapter sequel author signing bookstore puppy vet vaccination leash collar kitten "
      "litter aquarium goldfish hamster wheel bicycle helmet marathon training sprained ankle "
      "physiotherapy yoga mat smoothie blender kale avocado toast bakery croissants sourdough "
      "starter fermenting kombucha brewery tasting wine cellar cheese platter picnic blanket "
      "sunscreen beach towel surfboard waves lifeguard whistle referee penalty stadium jersey "
      "trophy championship parade fireworks lantern festival costume wig glitter karaoke "
      "microphone podcast episode subscribers thumbnail editing software update installed");
  // Real message text carries function words the parser knows as carriers.
  message.test_known_words = words("to a my on with that at from me");
  message.test_known_rate = 0.07;
  spec.ood_slots["message"] = std::move(message);
  return spec;
}

}  // namespace idelex
