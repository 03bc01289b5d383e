#include "weaklabel.hpp"

#include <array>
#include <fstream>
#include <limits>
#include <optional>

#include "error.hpp"
#include "text.hpp"

namespace sfc {

void Lexicon::add(std::string_view pattern, Factor factor, std::string cls) {
  auto tokens = tokenize(pattern);
  if (tokens.empty())
    throw ValidationError("lexicon: empty pattern '" + std::string(pattern) +
                          "'");
  entries_.push_back({std::move(tokens), factor, std::move(cls)});
}

Lexicon Lexicon::defaults() {
  Lexicon lex;
  auto add_all = [&](Factor f, const char* cls,
                     std::initializer_list<const char*> patterns) {
    for (const char* p : patterns) lex.add(p, f, cls);
  };
  add_all(Factor::severity, "severe",
          {"extreme", "extremely", "severe", "severely", "terrible",
           "intense", "excruciating", "unbearable", "worst", "very bad"});
  add_all(Factor::severity, "moderate", {"moderate", "moderately", "medium"});
  add_all(Factor::severity, "mild",
          {"slight", "slightly", "mild", "mildly", "minor"});
  add_all(Factor::onset, "sudden",
          {"abrupt", "abruptly", "sudden", "suddenly", "all of a sudden",
           "out of nowhere"});
  add_all(Factor::onset, "gradual",
          {"gradual", "gradually", "slowly", "bit by bit"});
  add_all(Factor::frequency, "continuous",
          {"constant", "constantly", "continuous", "continuously", "regular",
           "regularly", "persistent", "nonstop", "all the time"});
  add_all(Factor::frequency, "on-off",
          {"occasional", "occasionally", "infrequent", "infrequently",
           "intermittent", "intermittently", "on and off", "on off",
           "off and on", "comes and goes", "from time to time",
           "now and then"});
  add_all(Factor::duration, "hours", {"since morning", "since this morning"});
  add_all(Factor::duration, "days", {"since yesterday"});
  add_all(Factor::duration, "weeks", {"fortnight"});
  return lex;
}

Lexicon Lexicon::from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("lexicon: expected a JSON array");
  Lexicon lex;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (!e.is_object() || !e.contains("pattern") || !e["pattern"].is_string() ||
        !e.contains("factor") || !e["factor"].is_string() ||
        !e.contains("class") || !e["class"].is_string())
      throw ValidationError("lexicon: entry " + std::to_string(i) +
                            " needs string fields pattern/factor/class");
    lex.add(e["pattern"].get<std::string>(),
            parse_factor(e["factor"].get<std::string>()),
            e["class"].get<std::string>());
  }
  return lex;
}

Lexicon Lexicon::read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open lexicon '" + path + "'");
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError(path + ": malformed JSON");
  return from_json(j);
}

OrderedJson Lexicon::to_json() const {
  OrderedJson out = OrderedJson::array();
  for (const auto& e : entries_) {
    std::string pattern;
    for (const auto& t : e.pattern) {
      if (!pattern.empty()) pattern += ' ';
      pattern += t;
    }
    OrderedJson j;
    j["pattern"] = pattern;
    j["factor"] = factor_name(e.factor);
    j["class"] = e.cls;
    out.push_back(std::move(j));
  }
  return out;
}

void Lexicon::validate(const Taxonomy& taxonomy) const {
  for (const auto& e : entries_)
    if (e.cls == kAbsent || !taxonomy.contains(e.factor, e.cls))
      throw ValidationError("lexicon: class '" + e.cls +
                            "' is not declared for factor '" +
                            std::string(factor_name(e.factor)) + "'");
}

DurationPattern DurationPattern::defaults() {
  DurationPattern p;
  p.units = {{"minutes", "minutes"}, {"mins", "minutes"},
             {"hours", "hours"},     {"hrs", "hours"},
             {"days", "days"},       {"weeks", "weeks"},
             {"wks", "weeks"},       {"months", "months"}};
  p.singular_units = {{"minute", "minutes"}, {"min", "minutes"},
                      {"hour", "hours"},     {"hr", "hours"},
                      {"day", "days"},       {"week", "weeks"},
                      {"month", "months"}};
  p.quantifiers = {"a",     "an",     "one",   "two",   "three", "four",
                   "five",  "six",    "seven", "eight", "nine",  "ten",
                   "few",   "several", "many", "couple", "last", "past",
                   "some"};
  return p;
}

namespace {

bool is_number(const std::string& token) {
  for (char c : token)
    if (c < '0' || c > '9') return false;
  return !token.empty();
}

std::optional<std::size_t> find_duration(const std::vector<std::string>& tokens,
                                         const DurationPattern& p,
                                         std::string* cls) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (auto it = p.units.find(t); it != p.units.end()) {
      *cls = it->second;
      return i;
    }
    if (auto it = p.singular_units.find(t); it != p.singular_units.end()) {
      if (i > 0 && (is_number(tokens[i - 1]) ||
                    p.quantifiers.count(tokens[i - 1]) > 0)) {
        *cls = it->second;
        return i;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::string extract_duration(std::string_view text,
                             const DurationPattern& patterns) {
  std::string cls;
  if (find_duration(tokenize(text), patterns, &cls)) return cls;
  return std::string(kAbsent);
}

LabelVector apply_lexicon(std::string_view text, const Lexicon& lexicon,
                          const Taxonomy& taxonomy,
                          const DurationPattern& duration) {
  const auto tokens = tokenize(text);

  struct Best {
    std::size_t pos = std::numeric_limits<std::size_t>::max();
    std::size_t len = 0;
    const LexiconEntry* entry = nullptr;
  };
  std::array<Best, kFactorCount> best{};

  for (const auto& e : lexicon.entries()) {
    if (!taxonomy.contains(e.factor, e.cls) || e.cls == kAbsent) continue;
    const std::size_t len = e.pattern.size();
    auto& b = best[static_cast<std::size_t>(e.factor)];
    for (std::size_t i = 0; i + len <= tokens.size() && i <= b.pos; ++i) {
      bool match = true;
      for (std::size_t k = 0; k < len && match; ++k)
        match = tokens[i + k] == e.pattern[k];
      if (!match) continue;
      if (i < b.pos || len > b.len) b = {i, len, &e};
      break;
    }
  }

  LabelVector labels;
  for (Factor f : kAllFactors)
    if (const auto* e = best[static_cast<std::size_t>(f)].entry)
      labels[f] = e->cls;

  if (labels.is_absent(Factor::duration)) {
    std::string cls;
    if (find_duration(tokens, duration, &cls) &&
        taxonomy.contains(Factor::duration, cls))
      labels[Factor::duration] = cls;
  }
  return labels;
}

}  // namespace sfc
