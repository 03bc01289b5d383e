#include "corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "error.hpp"
#include "rng.hpp"
#include "text.hpp"

namespace sfc {

namespace {

constexpr std::array<std::string_view, kFactorCount> kFactorNames = {
    "duration", "frequency", "severity", "onset"};

void check_class_list(Factor f, const std::vector<std::string>& classes) {
  std::set<std::string> seen;
  for (const auto& c : classes) {
    if (c.empty())
      throw ValidationError("taxonomy: empty class name in factor '" +
                            std::string(factor_name(f)) + "'");
    if (c == kAbsent)
      throw ValidationError("taxonomy: 'absent' is implicit and may not be "
                            "declared (factor '" +
                            std::string(factor_name(f)) + "')");
    if (!seen.insert(c).second)
      throw ValidationError("taxonomy: duplicate class '" + c +
                            "' in factor '" + std::string(factor_name(f)) +
                            "'");
  }
}

}  // namespace

std::string_view factor_name(Factor f) {
  return kFactorNames[static_cast<std::size_t>(f)];
}

Factor parse_factor(std::string_view name) {
  for (std::size_t i = 0; i < kFactorCount; ++i)
    if (kFactorNames[i] == name) return static_cast<Factor>(i);
  throw ValidationError("unknown factor '" + std::string(name) + "'");
}

LabelVector::LabelVector() { values_.fill(std::string(kAbsent)); }

Taxonomy::Taxonomy(std::array<std::vector<std::string>, kFactorCount> classes)
    : classes_(std::move(classes)) {
  for (Factor f : kAllFactors) check_class_list(f, this->classes(f));
}

Taxonomy Taxonomy::defaults() {
  return Taxonomy({{
      {"minutes", "hours", "days", "weeks", "months"},
      {"continuous", "on-off"},
      {"mild", "moderate", "severe"},
      {"sudden", "gradual"},
  }});
}

Taxonomy Taxonomy::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("factors") || !j["factors"].is_array())
    throw ValidationError("taxonomy: expected {\"factors\": [...]}");
  const auto& factors = j["factors"];
  if (factors.size() != kFactorCount)
    throw ValidationError("taxonomy: expected exactly 4 factors, got " +
                          std::to_string(factors.size()));
  std::array<std::vector<std::string>, kFactorCount> classes;
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    const auto& entry = factors[i];
    if (!entry.is_object() || !entry.contains("name") ||
        !entry["name"].is_string() || !entry.contains("classes") ||
        !entry["classes"].is_array())
      throw ValidationError("taxonomy: factor entry " + std::to_string(i) +
                            " needs \"name\" and \"classes\"");
    const auto name = entry["name"].get<std::string>();
    if (name != kFactorNames[i])
      throw ValidationError("taxonomy: factor " + std::to_string(i) +
                            " must be '" + std::string(kFactorNames[i]) +
                            "', got '" + name + "'");
    for (const auto& c : entry["classes"]) {
      if (!c.is_string())
        throw ValidationError("taxonomy: class names must be strings");
      classes[i].push_back(c.get<std::string>());
    }
  }
  return Taxonomy(std::move(classes));
}

OrderedJson Taxonomy::to_json() const {
  OrderedJson factors = OrderedJson::array();
  for (Factor f : kAllFactors) {
    OrderedJson entry;
    entry["name"] = factor_name(f);
    entry["classes"] = classes(f);
    factors.push_back(std::move(entry));
  }
  OrderedJson j;
  j["factors"] = std::move(factors);
  return j;
}

std::vector<std::string> Taxonomy::classes_with_absent(Factor f) const {
  auto out = classes(f);
  out.emplace_back(kAbsent);
  return out;
}

bool Taxonomy::contains(Factor f, std::string_view cls) const {
  if (cls == kAbsent) return true;
  const auto& list = classes(f);
  return std::find(list.begin(), list.end(), cls) != list.end();
}

void Taxonomy::validate(const LabelVector& labels) const {
  for (Factor f : kAllFactors)
    if (!contains(f, labels[f]))
      throw ValidationError("unknown class '" + labels[f] + "' for factor '" +
                            std::string(factor_name(f)) + "'");
}

OrderedJson labels_to_json(const LabelVector& labels) {
  OrderedJson j = OrderedJson::object();
  for (Factor f : kAllFactors) j[std::string(factor_name(f))] = labels[f];
  return j;
}

LabelVector labels_from_json(const Json& j, const Taxonomy& taxonomy) {
  if (!j.is_object()) throw ValidationError("labels must be an object");
  LabelVector labels;
  std::array<bool, kFactorCount> seen{};
  for (const auto& [key, value] : j.items()) {
    const Factor f = parse_factor(key);
    if (!value.is_string())
      throw ValidationError("label for factor '" + key + "' must be a string");
    labels[f] = value.get<std::string>();
    seen[static_cast<std::size_t>(f)] = true;
  }
  for (Factor f : kAllFactors)
    if (!seen[static_cast<std::size_t>(f)])
      throw ValidationError("labels missing factor '" +
                            std::string(factor_name(f)) + "'");
  taxonomy.validate(labels);
  return labels;
}

std::vector<LabeledUtterance> parse_dataset(std::istream& in,
                                            const Taxonomy& taxonomy,
                                            bool require_labels) {
  std::vector<LabeledUtterance> records;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";

    Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw ParseError(where + "malformed JSON");
    if (!j.is_object()) throw ParseError(where + "expected a JSON object");

    auto string_field = [&](const char* key) {
      if (!j.contains(key) || !j[key].is_string())
        throw ParseError(where + "missing string field \"" + key + "\"");
      return j[key].get<std::string>();
    };

    LabeledUtterance rec;
    rec.id = string_field("id");
    rec.text = string_field("text");
    rec.parent = string_field("parent");
    if (trim(rec.text).empty())
      throw ValidationError(where + "text is empty");
    if (j.contains("labels")) {
      try {
        rec.labels = labels_from_json(j["labels"], taxonomy);
      } catch (const ValidationError& e) {
        throw ValidationError(where + e.what());
      }
    } else if (require_labels) {
      throw ParseError(where + "missing \"labels\" object");
    }
    if (!ids.insert(rec.id).second)
      throw ValidationError(where + "duplicate id '" + rec.id + "'");
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<LabeledUtterance> read_dataset_file(const std::string& path,
                                                const Taxonomy& taxonomy,
                                                bool require_labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open dataset '" + path + "'");
  try {
    return parse_dataset(in, taxonomy, require_labels);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_dataset(std::ostream& out,
                   const std::vector<LabeledUtterance>& records) {
  for (const auto& r : records) {
    OrderedJson j;
    j["id"] = r.id;
    j["text"] = r.text;
    j["parent"] = r.parent;
    j["labels"] = labels_to_json(r.labels);
    out << j.dump() << '\n';
  }
}

void write_dataset_file(const std::string& path,
                        const std::vector<LabeledUtterance>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write '" + path + "'");
  write_dataset(out, records);
}

std::pair<std::vector<LabeledUtterance>, std::vector<LabeledUtterance>>
split_train_test(const std::vector<LabeledUtterance>& records, double ratio,
                 std::uint64_t seed) {
  if (records.empty()) throw ArgumentError("split: no records");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw ArgumentError("split: ratio must lie in (0, 1)");

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Xoshiro256 rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  const auto n_train = static_cast<std::size_t>(
      std::floor(ratio * static_cast<double>(records.size())));
  std::vector<LabeledUtterance> train, test;
  train.reserve(n_train);
  test.reserve(records.size() - n_train);
  for (std::size_t k = 0; k < order.size(); ++k)
    (k < n_train ? train : test).push_back(records[order[k]]);
  return {std::move(train), std::move(test)};
}

// ---------------------------------------------------------------------------
// Synthetic corpus

namespace {

using Phrases = std::vector<std::string>;

// Cue phrases per (factor, class). Each must be picked up by the default
// lexicon or the duration extractor.
const std::map<std::string, Phrases>& cue_table(Factor f) {
  static const std::array<std::map<std::string, Phrases>, kFactorCount> t = {{
      // duration: unit words, combined with a quantifier below
      {{"minutes", {"minutes"}},
       {"hours", {"hours"}},
       {"days", {"days"}},
       {"weeks", {"weeks"}},
       {"months", {"months"}}},
      {{"continuous", {"constant", "continuous", "regular"}},
       {"on-off", {"occasional", "infrequent"}}},
      {{"mild", {"slight", "mild"}},
       {"moderate", {"moderate"}},
       {"severe", {"extreme", "severe", "terrible"}}},
      {{"sudden", {"abruptly", "suddenly"}}, {"gradual", {"gradually"}}},
  }};
  return t[static_cast<std::size_t>(f)];
}

const Phrases kParents = {"headache", "back pain", "stomach ache",
                          "chest pain"};
const Phrases kOpeners = {"I have", "I am having", "I have got",
                          "she is having"};
const Phrases kQuantifiers = {"2", "3", "five", "several", "a few"};
const Phrases kDurationFrames = {"for the last", "since last", "for",
                                 "from"};

template <class Seq>
const auto& pick(Xoshiro256& rng, const Seq& items) {
  return items[static_cast<std::size_t>(rng.below(items.size()))];
}

std::string cue_for(Xoshiro256& rng, Factor f, const std::string& cls) {
  const auto& table = cue_table(f);
  auto it = table.find(cls);
  if (it != table.end()) return pick(rng, it->second);
  // Classes from a custom taxonomy are cued by their own name.
  std::string cue = cls;
  std::replace(cue.begin(), cue.end(), '-', ' ');
  return cue;
}

std::string article_for(const std::string& next) {
  const char c = next.empty() ? 'x' : next.front();
  return (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') ? "an"
                                                                     : "a";
}

}  // namespace

std::vector<LabeledUtterance> generate_synthetic(const SyntheticSpec& spec,
                                                 const Taxonomy& taxonomy) {
  if (spec.count < 1) throw ArgumentError("synthetic: count must be >= 1");
  if (spec.max_factors_per_sentence < 1 || spec.max_factors_per_sentence > 4)
    throw ArgumentError("synthetic: max factors per sentence must be in [1,4]");

  Xoshiro256 rng(spec.seed);
  std::vector<LabeledUtterance> out;
  out.reserve(spec.count);

  for (std::size_t n = 0; n < spec.count; ++n) {
    LabeledUtterance rec;
    rec.id = "syn-" + std::to_string(n + 1);
    rec.parent = pick(rng, kParents);

    std::array<Factor, kFactorCount> factors = kAllFactors;
    rng.shuffle(std::span<Factor>(factors));
    const auto k = 1 + static_cast<std::size_t>(
                           rng.below(static_cast<std::uint64_t>(
                               spec.max_factors_per_sentence)));
    for (std::size_t i = 0; i < k; ++i) {
      const Factor f = factors[i];
      if (taxonomy.classes(f).empty()) continue;
      rec.labels[f] = pick(rng, taxonomy.classes(f));
    }

    std::string main = pick(rng, kOpeners) + " ";
    std::vector<std::string> clauses;
    if (!rec.labels.is_absent(Factor::severity)) {
      const auto cue = cue_for(rng, Factor::severity, rec.labels[Factor::severity]);
      if (rng.below(2) == 0) {
        main += article_for(cue) + " " + cue + " " + rec.parent;
      } else {
        main += article_for(rec.parent) + " " + rec.parent;
        clauses.push_back("the pain is " + cue);
      }
    } else {
      main += article_for(rec.parent) + " " + rec.parent;
    }
    if (!rec.labels.is_absent(Factor::duration)) {
      main += " " + pick(rng, kDurationFrames) + " " + pick(rng, kQuantifiers) +
              " " + cue_for(rng, Factor::duration, rec.labels[Factor::duration]);
    }
    if (!rec.labels.is_absent(Factor::frequency)) {
      const auto cue =
          cue_for(rng, Factor::frequency, rec.labels[Factor::frequency]);
      clauses.push_back("it is " + cue);
    }
    if (!rec.labels.is_absent(Factor::onset)) {
      const auto cue = cue_for(rng, Factor::onset, rec.labels[Factor::onset]);
      clauses.push_back((rng.below(2) == 0 ? "it started " : "it came on ") +
                        cue);
    }
    rng.shuffle(std::span<std::string>(clauses));

    std::string text = main;
    for (std::size_t i = 0; i < clauses.size(); ++i)
      text += (i + 1 == clauses.size() && i > 0 ? " and " : ", ") + clauses[i];
    text += ".";
    rec.text = std::move(text);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace sfc
