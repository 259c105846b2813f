#include "idelex/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "idelex/augment.hpp"
#include "idelex/corpus.hpp"
#include "idelex/engine.hpp"
#include "idelex/error.hpp"
#include "idelex/eval.hpp"
#include "idelex/gazetteer.hpp"
#include "idelex/loglinear.hpp"
#include "idelex/run_config.hpp"
#include "idelex/synthetic.hpp"

namespace fs = std::filesystem;

namespace idelex {

namespace {

template <typename T>
T convert(const std::string& key, const std::string& text) {
  auto bad = [&]() { return ValidationError("configuration key '" + key + "': bad value '" + text + "'"); };
  if constexpr (std::is_same_v<T, std::string>) {
    return text;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw bad();
  } else if constexpr (std::is_floating_point_v<T>) {
    T v{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) throw bad();
    return v;
  } else {
    T v{};
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) throw bad();
    return v;
  }
}

/// Registers each option together with its configuration key so file values
/// can fill whatever the command line left unset.
class Options {
 public:
  explicit Options(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "key = value configuration file; flags override it");
  }

  template <typename T>
  CLI::Option* add(const std::string& flag, const std::string& key, T& target, const std::string& help) {
    auto* opt = app_->add_option(flag, target, help);
    bindings_.push_back({key, opt, [&target, key](const std::string& v) { target = convert<T>(key, v); }});
    return opt;
  }

  /// `inverted` flags (e.g. --no-lowercase) store the negation of the config value.
  CLI::Option* flag(const std::string& flag, const std::string& key, bool& target, const std::string& help,
                    bool inverted = false) {
    auto* opt = app_->add_flag(flag, target, help);
    bindings_.push_back(
        {key, opt, [&target, key, inverted](const std::string& v) { target = convert<bool>(key, v) != inverted; }});
    return opt;
  }

  void merge() {
    if (config_path_.empty()) return;
    auto cfg = RunConfig::load(config_path_);
    for (auto& b : bindings_) {
      if (b.option->count() > 0) continue;
      if (auto v = cfg.get(b.key)) b.assign(*v);
    }
  }

  /// True when `key` came from the command line or the configuration file.
  bool given(const std::string& key) const {
    for (const auto& b : bindings_)
      if (b.key == key) return b.option->count() > 0 || from_config(key);
    return false;
  }

 private:
  bool from_config(const std::string& key) const {
    if (config_path_.empty()) return false;
    return RunConfig::load(config_path_).get(key).has_value();
  }

  struct Binding {
    std::string key;
    CLI::Option* option;
    std::function<void(const std::string&)> assign;
  };
  CLI::App* app_;
  std::string config_path_;
  std::vector<Binding> bindings_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{seed, stream};
  std::uint32_t halves[2];
  seq.generate(halves, halves + 2);
  return (static_cast<std::uint64_t>(halves[0]) << 32) | halves[1];
}

void require(const std::string& value, const std::string& name) {
  if (value.empty()) throw ValidationError("missing required option --" + name);
}

void require_file(const std::string& path, const std::string& name) {
  require(path, name);
  if (!fs::is_regular_file(path)) throw IoError("--" + name + ": no such file " + path);
}

std::vector<std::string> split_list(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  return split_whitespace(s);
}

bool blank_file(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) return false;
  return true;
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
  std::string data, out;
  double ps = 0.75;
  std::uint64_t seed = 0;
  std::size_t epochs = TrainingOptions{}.epochs;
  double learning_rate = TrainingOptions{}.learning_rate;
  double l2 = TrainingOptions{}.l2;
  double unk_rate = TrainingOptions{}.unk_rate;
  std::string shared_groups;
  std::size_t context_ngram = 4;
  bool no_lowercase = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  require(a.out, "out");
  AugmentConfig aug;
  aug.ps = a.ps;
  aug.validate();
  if (a.epochs == 0) throw ValidationError("--epochs must be positive");
  if (a.context_ngram == 0) throw ValidationError("--context-ngram must be positive");
  auto groups = parse_shared_groups(a.shared_groups);
  require_file(a.data, "data");

  auto loaded = load_dataset(a.data, format_for_path(a.data), {.lowercase = !a.no_lowercase});
  if (loaded.bio_repairs) err << "warning: repaired " << loaded.bio_repairs << " orphan Inside labels\n";
  const Dataset& train = loaded.dataset;

  std::set<std::string> vocabulary;
  for (const auto& u : train) vocabulary.insert(u.tokens.begin(), u.tokens.end());
  aug.tokens = TokenTable::build(train.slot_types(), groups, vocabulary);
  aug.rng_seed = derive_seed(a.seed, 1);

  Gazetteer gazetteer = build_gazetteer(train, groups, {.context_ngram = a.context_ngram});
  Augmented td = delexicalize_training(train, aug);
  Dataset combined = combine(train, td.data);

  TrainingOptions topt;
  topt.epochs = a.epochs;
  topt.learning_rate = a.learning_rate;
  topt.l2 = a.l2;
  topt.unk_rate = a.unk_rate;
  topt.seed = derive_seed(a.seed, 2);
  topt.tokens = aug.tokens;
  auto model = LogLinearBackend::train(combined, topt);

  fs::create_directories(a.out);
  model.save(fs::path(a.out) / "model.txt");
  save_gazetteer(gazetteer, fs::path(a.out) / "gazetteer.tsv");

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", td.stats.fraction());
  out << "training utterances: " << train.size() << '\n'
      << "gold spans: " << td.stats.spans << '\n'
      << "replaced spans: " << td.stats.replaced << '\n'
      << "replacement fraction: " << buf << '\n'
      << "delexicalized utterances: " << td.stats.kept << '\n'
      << "combined utterances: " << combined.size() << '\n'
      << "labels: " << combined.label_set().size() << ", intents: " << combined.intent_set().size() << '\n'
      << "wrote " << (fs::path(a.out) / "model.txt").string() << " and "
      << (fs::path(a.out) / "gazetteer.tsv").string() << '\n';
  return kExitOk;
}

// ---- infer -----------------------------------------------------------------

struct InferArgs {
  std::string model, gazetteer, input, output, trace;
  double tau = EngineConfig{}.tau;
  std::size_t k = EngineConfig{}.k;
  std::string ood_slots;
  std::size_t seed_cap = EngineConfig{}.seed_cap;
  double entropy_floor = EngineConfig{}.entropy_floor;
  bool baseline = false;
  std::size_t threads = 1;
  bool no_lowercase = false;
};

nlohmann::json outcome_json(const Tokens& tokens, const InferenceOutcome& o) {
  nlohmann::json j;
  j["tokens"] = tokens;
  j["intent"] = o.intent;
  j["labels"] = label_strings(o.labels);
  j["delexicalized"] = o.best_candidate.tokens;
  j["iterations_run"] = o.iterations_run;
  j["candidates_evaluated"] = o.candidates_evaluated;
  j["score"] = o.best_score;
  return j;
}

int cmd_infer(const InferArgs& a, bool ood_given, std::ostream& out, std::ostream& err) {
  require(a.output, "output");
  if (a.threads == 0) throw ValidationError("--threads must be positive");
  require_file(a.model, "model");
  require_file(a.gazetteer, "gazetteer");
  require_file(a.input, "input");

  auto model = LogLinearBackend::load(a.model);
  auto gazetteer = load_gazetteer(a.gazetteer);

  EngineConfig cfg;
  cfg.tau = a.tau;
  cfg.k = a.k;
  cfg.seed_cap = a.seed_cap;
  cfg.entropy_floor = a.entropy_floor;
  cfg.token_table = model.token_table();
  if (ood_given) {
    for (auto& s : split_list(a.ood_slots)) cfg.ood_slots.insert(s);
  } else {
    for (const auto& e : cfg.token_table.entries()) cfg.ood_slots.insert(e.slot_type);
  }
  Engine engine(model, gazetteer, cfg);

  std::vector<Utterance> inputs;
  if (blank_file(a.input)) {
    err << "warning: " << a.input << " contains no utterances\n";
  } else {
    auto loaded = load_dataset(a.input, format_for_path(a.input), {.lowercase = !a.no_lowercase});
    inputs = loaded.dataset.utterances();
  }

  std::vector<InferenceOutcome> outcomes(inputs.size());
  std::vector<std::string> traces(a.trace.empty() ? 0 : inputs.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    for (std::size_t i; (i = cursor.fetch_add(1)) < inputs.size();) {
      try {
        if (a.baseline) {
          outcomes[i] = engine.baseline(inputs[i].tokens);
          if (!traces.empty())
            traces[i] = "baseline\t" + format_score(outcomes[i].best_score) + "\toriginal\t" + join(inputs[i].tokens) + "\n";
        } else if (!traces.empty()) {
          std::ostringstream buf;
          TraceWriter trace(buf);
          outcomes[i] = engine.infer(inputs[i].tokens, &trace);
          traces[i] = buf.str();
        } else {
          outcomes[i] = engine.infer(inputs[i].tokens);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(a.threads, inputs.size()); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::ofstream os(a.output, std::ios::binary);
  if (!os) throw IoError("cannot write " + a.output);
  for (std::size_t i = 0; i < inputs.size(); ++i) os << outcome_json(inputs[i].tokens, outcomes[i]).dump() << '\n';
  if (!a.trace.empty()) {
    std::ofstream ts(a.trace, std::ios::binary);
    if (!ts) throw IoError("cannot write " + a.trace);
    for (std::size_t i = 0; i < inputs.size(); ++i) ts << "utt" << i << '\t' << join(inputs[i].tokens) << '\n' << traces[i];
  }
  out << "parsed " << inputs.size() << " utterances" << (a.baseline ? " (baseline)" : "") << '\n';
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string gold, pred, categories, json;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  require_file(a.gold, "gold");
  require_file(a.pred, "pred");
  if (!a.categories.empty()) require_file(a.categories, "categories");
  auto gold = load_dataset(a.gold, format_for_path(a.gold)).dataset;
  auto pred = load_dataset(a.pred, format_for_path(a.pred)).dataset;
  CategoryMap categories;
  if (!a.categories.empty()) categories = load_categories(a.categories);
  std::vector<Prediction> predictions;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto& u = pred[i];
    if (!u.labels) throw ValidationError("prediction " + std::to_string(i) + " has no labels");
    predictions.push_back({u.intent.value_or(""), *u.labels});
  }
  auto report = evaluate(gold, predictions, categories);
  out << format_report(report);
  if (!a.json.empty()) {
    std::ofstream js(a.json);
    if (!js) throw IoError("cannot write " + a.json);
    js << report_to_json(report).dump(2) << '\n';
  }
  return kExitOk;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string spec, out;
  std::uint64_t seed = 0;
};

int cmd_gen(const GenArgs& a, bool seed_given, std::ostream& out) {
  require(a.spec, "spec");
  require(a.out, "out");
  if (!seed_given) throw ValidationError("missing required option --seed");
  SyntheticSpec spec;
  if (a.spec == "builtin") {
    spec = default_synthetic_spec();
  } else {
    require_file(a.spec, "spec");
    std::ifstream in(a.spec);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("spec is not valid JSON: ") + e.what());
    }
    spec = synthetic_spec_from_json(j);
  }
  auto corpus = generate_synthetic_corpus(a.seed, spec);
  fs::create_directories(a.out);
  save_dataset(corpus.train, fs::path(a.out) / "train.jsonl", Format::jsonl);
  save_dataset(corpus.test, fs::path(a.out) / "test.jsonl", Format::jsonl);
  {
    std::ofstream s(fs::path(a.out) / "spec.json");
    if (!s) throw IoError("cannot write spec.json");
    s << synthetic_spec_to_json(spec).dump(2) << '\n';
  }
  out << "train utterances: " << corpus.train.size() << "\ntest utterances: " << corpus.test.size() << '\n';
  for (const auto& [slot, rate] : corpus.oov_rate) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", rate);
    out << "oov rate [" << slot << "]: " << buf << '\n';
  }
  return kExitOk;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterative delexicalization for joint intent and slot parsing", "idelex"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand("train", "build gazetteer, augment data and train the built-in backend");
  TrainArgs ta;
  Options to(train);
  to.add("--data", "data", ta.data, "labelled training data (.jsonl or CoNLL)");
  to.add("--out", "out", ta.out, "output directory for model.txt and gazetteer.tsv");
  to.add("--ps", "ps", ta.ps, "per-span substitution probability");
  to.add("--seed", "seed", ta.seed, "random seed");
  to.add("--epochs", "epochs", ta.epochs, "SGD epochs");
  to.add("--learning-rate", "learning_rate", ta.learning_rate, "initial SGD step size");
  to.add("--l2", "l2", ta.l2, "weight decay");
  to.add("--unk-rate", "unk_rate", ta.unk_rate, "unknown-word dropout during training");
  to.add("--shared-groups", "shared_groups", ta.shared_groups, "e.g. city=from_city,to_city;...");
  to.add("--context-ngram", "context_ngram", ta.context_ngram, "longest context phrase kept in the gazetteer");
  to.flag("--no-lowercase", "lowercase", ta.no_lowercase, "keep token case", true);

  auto* infer = app.add_subcommand("infer", "parse utterances with iterative delexicalization");
  InferArgs ia;
  Options io(infer);
  io.add("--model", "model", ia.model, "model file");
  io.add("--gazetteer", "gazetteer", ia.gazetteer, "gazetteer TSV");
  io.add("--input", "input", ia.input, "utterances (.jsonl or CoNLL)");
  io.add("--output", "output", ia.output, "JSONL predictions");
  io.add("--tau", "tau", ia.tau, "slot confidence threshold (nats)");
  io.add("--k", "k", ia.k, "candidates expanded per iteration");
  io.add("--ood-slots", "ood_slots", ia.ood_slots, "comma-separated slots eligible for rewriting (default: all)");
  io.add("--seed-cap", "seed_cap", ia.seed_cap, "maximum seed candidates");
  io.add("--entropy-floor", "entropy_floor", ia.entropy_floor, "lower bound on summed entropy");
  io.flag("--baseline", "baseline", ia.baseline, "plain backend parse, no delexicalization");
  io.add("--trace", "trace", ia.trace, "write the per-iteration candidate trace");
  io.add("--threads", "threads", ia.threads, "worker threads");
  io.flag("--no-lowercase", "lowercase", ia.no_lowercase, "keep token case", true);

  auto* eval = app.add_subcommand("eval", "score predictions against gold data");
  EvalArgs ea;
  Options eo(eval);
  eo.add("--gold", "gold", ea.gold, "gold data");
  eo.add("--pred", "pred", ea.pred, "predictions");
  eo.add("--categories", "categories", ea.categories, "slot_type<TAB>category TSV");
  eo.add("--json", "json", ea.json, "also write the report as JSON");

  auto* gen = app.add_subcommand("gen", "generate a synthetic out-of-distribution corpus");
  GenArgs ga;
  Options go(gen);
  go.add("--spec", "spec", ga.spec, "generator spec JSON, or 'builtin'");
  go.add("--seed", "seed", ga.seed, "random seed");
  go.add("--out", "out", ga.out, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  return guarded(err, [&]() -> int {
    if (train->parsed()) {
      to.merge();
      return cmd_train(ta, out, err);
    }
    if (infer->parsed()) {
      io.merge();
      return cmd_infer(ia, io.given("ood_slots"), out, err);
    }
    if (eval->parsed()) {
      eo.merge();
      return cmd_eval(ea, out);
    }
    go.merge();
    return cmd_gen(ga, go.given("seed"), out);
  });
}

}  // namespace idelex
