#include "gatedoc/train/config.hpp"

#include <charconv>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "gatedoc/errors.hpp"

namespace gatedoc::train {
namespace {

template <typename Number>
Number parse_number(std::string_view key, std::string_view text) {
  Number value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view key, std::string_view text) {
  // from_chars for double is missing from older libstdc++; strtod is fine here.
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw UsageError("config key '" + std::string(key) + "': cannot parse '" + s + "'");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw UsageError("config key '" + std::string(key) + "': expected a boolean, got '" +
                   std::string(text) + "'");
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

struct Field {
  std::string key;
  std::string help;
  std::function<void(TrainConfig&, std::string_view)> set;
  std::function<std::string(const TrainConfig&)> get;
};

// Accessors take a mutable config; getters only read through them.
template <typename Member>
Field size_field(std::string key, std::string help, Member member) {
  return {key, std::move(help),
          [key, member](TrainConfig& c, std::string_view v) {
            member(c) = parse_number<std::size_t>(key, v);
          },
          [member](const TrainConfig& c) { return std::to_string(member(const_cast<TrainConfig&>(c))); }};
}

template <typename Member>
Field bool_field(std::string key, std::string help, Member member) {
  return {key, std::move(help),
          [key, member](TrainConfig& c, std::string_view v) { member(c) = parse_bool(key, v); },
          [member](const TrainConfig& c) {
            return member(const_cast<TrainConfig&>(c)) ? std::string("true") : "false";
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"scheme", "label scheme: ten_scale | three_way",
                 [](TrainConfig& c, std::string_view v) { c.scheme = text::parse_label_scheme(v); },
                 [](const TrainConfig& c) { return std::string(text::to_string(c.scheme)); }});
    f.push_back(size_field("max_length", "max stream length incl. specials",
                           [](TrainConfig& c) -> auto& { return c.limits.max_length; }));
    f.push_back(size_field("max_sentences", "max sentences per document",
                           [](TrainConfig& c) -> auto& { return c.limits.max_sentences; }));
    f.push_back(size_field("min_freq", "vocabulary min frequency",
                           [](TrainConfig& c) -> auto& { return c.min_freq; }));
    f.push_back(size_field("max_vocab", "vocabulary size cap",
                           [](TrainConfig& c) -> auto& { return c.max_vocab; }));
    f.push_back(size_field("token_dim", "token embedding width",
                           [](TrainConfig& c) -> auto& { return c.model.token_dim; }));
    f.push_back(size_field("hidden_dim", "sentence encoder width",
                           [](TrainConfig& c) -> auto& { return c.model.hidden_dim; }));
    f.push_back(size_field("n_heads", "attention heads",
                           [](TrainConfig& c) -> auto& { return c.model.n_heads; }));
    f.push_back(size_field("n_layers", "shared transformer depth",
                           [](TrainConfig& c) -> auto& { return c.model.n_layers; }));
    f.push_back(size_field("class_hidden_dim", "class-embedding FNN hidden width",
                           [](TrainConfig& c) -> auto& { return c.model.class_hidden_dim; }));
    f.push_back(size_field("class_dim", "class embedding width",
                           [](TrainConfig& c) -> auto& { return c.model.class_dim; }));
    f.push_back(size_field("gru_dim", "GRU hidden width",
                           [](TrainConfig& c) -> auto& { return c.model.gru_dim; }));
    f.push_back(size_field("output_hidden_dim", "output FNN hidden width (0 = auto)",
                           [](TrainConfig& c) -> auto& { return c.model.output_hidden_dim; }));
    f.push_back({"gate_mode", "gate shape: scalar | vector",
                 [](TrainConfig& c, std::string_view v) { c.model.gate_mode = model::parse_gate_mode(v); },
                 [](const TrainConfig& c) { return std::string(model::to_string(c.model.gate_mode)); }});
    f.push_back(bool_field("use_sentence_class_sim", "enrich sentences with class similarity",
                           [](TrainConfig& c) -> auto& { return c.model.variant.sentence_class_similarity; }));
    f.push_back(bool_field("use_gate", "gate sentences by importance",
                           [](TrainConfig& c) -> auto& { return c.model.variant.gate; }));
    f.push_back(bool_field("use_document_class_sim", "enrich the document with class similarity",
                           [](TrainConfig& c) -> auto& { return c.model.variant.document_class_similarity; }));
    f.push_back({"learning_rate", "Adam learning rate",
                 [](TrainConfig& c, std::string_view v) { c.learning_rate = parse_double("learning_rate", v); },
                 [](const TrainConfig& c) { return format_double(c.learning_rate); }});
    f.push_back(size_field("batch_size", "documents per update",
                           [](TrainConfig& c) -> auto& { return c.batch_size; }));
    f.push_back(size_field("max_epochs", "epoch limit",
                           [](TrainConfig& c) -> auto& { return c.max_epochs; }));
    f.push_back(size_field("patience", "epochs without dev improvement before stopping",
                           [](TrainConfig& c) -> auto& { return c.patience; }));
    f.push_back({"seed", "base random seed",
                 [](TrainConfig& c, std::string_view v) { c.seed = parse_number<std::uint64_t>("seed", v); },
                 [](const TrainConfig& c) { return std::to_string(c.seed); }});
    return f;
  }();
  return table;
}

const Field& field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw UsageError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

TrainConfig TrainConfig::desk() { return TrainConfig{}; }

TrainConfig TrainConfig::paper() {
  TrainConfig c;
  c.model.token_dim = 128;
  c.model.hidden_dim = 768;
  c.model.n_heads = 12;
  c.model.class_hidden_dim = 300;
  c.model.class_dim = 300;
  c.batch_size = 64;
  c.learning_rate = 2e-5;
  return c;
}

void TrainConfig::set(std::string_view key, std::string_view value) { field(key).set(*this, value); }

std::map<std::string, std::string> TrainConfig::to_map() const {
  std::map<std::string, std::string> out;
  for (const auto& f : fields()) out.emplace(f.key, f.get(*this));
  return out;
}

const std::vector<std::string>& TrainConfig::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
  }();
  return k;
}

std::string TrainConfig::describe(std::string_view key) { return field(key).help; }

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw UsageError("learning_rate must be non-negative");
  if (batch_size == 0) throw UsageError("batch_size must be positive");
  if (max_epochs == 0) throw UsageError("max_epochs must be positive");
  if (patience == 0) throw UsageError("patience must be positive");
  if (limits.max_length < 3) throw UsageError("max_length must be at least 3");
  if (limits.max_sentences == 0) throw UsageError("max_sentences must be positive");
  if (model.hidden_dim == 0 || model.n_heads == 0 || model.hidden_dim % model.n_heads != 0) {
    throw UsageError("hidden_dim must be a positive multiple of n_heads");
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ stream) ^ index);
}

}  // namespace gatedoc::train
