#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"

namespace sfc {

struct LexiconEntry {
  std::vector<std::string> pattern;  // lowercase tokens, contiguous match
  Factor factor;
  std::string cls;
};

/// Keyword inventory for weak labeling. Patterns are normalized with the
/// shared tokenizer, so "On-Off" and "on off" are the same pattern.
class Lexicon {
 public:
  Lexicon() = default;
  void add(std::string_view pattern, Factor factor, std::string cls);

  // Cue words of the worked examples per factor (extreme, moderate, slight,
  // abruptly, constant, occasionally...) plus duration idioms that carry no
  // unit word.
  static Lexicon defaults();
  // [{"pattern": "...", "factor": "...", "class": "..."}, ...]
  static Lexicon from_json(const Json& j);
  static Lexicon read_file(const std::string& path);
  OrderedJson to_json() const;

  // Throws ValidationError if any target is missing from the taxonomy.
  void validate(const Taxonomy& taxonomy) const;

  const std::vector<LexiconEntry>& entries() const { return entries_; }

 private:
  std::vector<LexiconEntry> entries_;
};

/// Unit words recognized after an optional quantifier ("2", "five",
/// "several", "few"). Plural and abbreviated units match on their own;
/// singular units ("day", "month") need a quantifier in front, which keeps
/// "every day" from reading as a duration.
struct DurationPattern {
  std::map<std::string, std::string> units;
  std::map<std::string, std::string> singular_units;
  std::set<std::string> quantifiers;

  static DurationPattern defaults();
};

/// First duration phrase in the text, or "absent".
std::string extract_duration(std::string_view text,
                             const DurationPattern& patterns);

/// Longest-match-first keyword scan. For each factor the earliest match in
/// token order wins, ties going to the longer pattern. Duration falls back
/// to extract_duration when no lexicon entry fires. Classes outside the
/// taxonomy are never emitted.
LabelVector apply_lexicon(std::string_view text, const Lexicon& lexicon,
                          const Taxonomy& taxonomy,
                          const DurationPattern& duration =
                              DurationPattern::defaults());

}  // namespace sfc
