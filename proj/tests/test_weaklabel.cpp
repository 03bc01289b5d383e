#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>

#include "error.hpp"
#include "rng.hpp"
#include "text.hpp"
#include "weaklabel.hpp"

using namespace sfc;

namespace {

LabelVector label(std::string_view text) {
  static const auto lex = Lexicon::defaults();
  static const auto tax = Taxonomy::defaults();
  return apply_lexicon(text, lex, tax);
}

LabelVector only(Factor f, std::string cls) {
  LabelVector v;
  v[f] = std::move(cls);
  return v;
}

}  // namespace

TEST_CASE("worked examples") {
  CHECK(label("Pain is extreme in my head") == only(Factor::severity, "severe"));
  CHECK(label("my headache starts abruptly") == only(Factor::onset, "sudden"));
  CHECK(label("I usually get pain in head occasionally") ==
        only(Factor::frequency, "on-off"));
  CHECK(label("hello world") == LabelVector{});
}

TEST_CASE("duration extraction") {
  const auto p = DurationPattern::defaults();
  CHECK(extract_duration("She is having a headache since last five days", p) == "days");
  CHECK(extract_duration("headache lasted for several hours", p) == "hours");
  CHECK(extract_duration("I have a headache", p) == "absent");
  CHECK(extract_duration("for the last 2 months", p) == "months");
  CHECK(extract_duration("since last week", p) == "weeks");
  CHECK(extract_duration("for a minute", p) == "minutes");
  CHECK(extract_duration("it hurts every day", p) == "absent");
  CHECK(extract_duration("3 hrs ago, then for days", p) == "hours");
}

TEST_CASE("conflicts resolve to the earliest match, then the longest pattern") {
  CHECK(label("mild at first, now extreme")[Factor::severity] == "mild");
  CHECK(label("extreme, not mild")[Factor::severity] == "severe");

  Lexicon lex;
  lex.add("on", Factor::frequency, "continuous");
  lex.add("on and off", Factor::frequency, "on-off");
  CHECK(apply_lexicon("it is on and off", lex, Taxonomy::defaults())[Factor::frequency] ==
        "on-off");
}

TEST_CASE("lexicon duration entries take precedence over unit words") {
  CHECK(label("I have got a headache since morning")[Factor::duration] == "hours");
  CHECK(label("a headache since yesterday, two hours ago worse")[Factor::duration] ==
        "days");
}

TEST_CASE("lexicon validation and json") {
  const auto tax = Taxonomy::defaults();
  Lexicon bad;
  bad.add("awful", Factor::severity, "catastrophic");
  CHECK_THROWS_AS(bad.validate(tax), ValidationError);
  Lexicon absent;
  absent.add("fine", Factor::severity, "absent");
  CHECK_THROWS_AS(absent.validate(tax), ValidationError);
  CHECK_THROWS_AS(Lexicon().add(" - ", Factor::onset, "sudden"), ValidationError);

  const auto lex = Lexicon::defaults();
  lex.validate(tax);
  const auto back = Lexicon::from_json(Json::parse(lex.to_json().dump()));
  CHECK(back.to_json() == lex.to_json());
  for (const auto& e : lex.entries())
    for (const auto& t : e.pattern) CHECK(t == to_lower(t));
}

TEST_CASE("shipped lexicon file equals the built-in defaults") {
  const auto file = Lexicon::read_file(SFC_LEXICON_FILE);
  CHECK(file.to_json() == Lexicon::defaults().to_json());
}

TEST_CASE("case invariance, purity and validity on random text") {
  const auto tax = Taxonomy::defaults();
  const std::vector<std::string> words = {
      "I",        "have",      "a",       "Headache", "EXTREME",  "mild",
      "for",      "the",       "last",    "2",        "Months",   "since",
      "five",     "days",      "on",      "and",      "off",      "Abruptly",
      "gradual",  "constant",  "hours",   "week",     "several",  "Regular",
      "slight",   "moderate",  "minutes", "pain",     "in",       "head",
      "occasionally", "infrequently", "every", "day", ",", "."};
  Xoshiro256 rng(8);
  for (int i = 0; i < 500; ++i) {
    std::string text;
    const auto n = 1 + rng.below(12);
    for (std::uint64_t k = 0; k < n; ++k)
      text += words[rng.below(words.size())] + " ";
    std::string upper = text, lower = to_lower(text);
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto v = label(text);
    CHECK(label(lower) == label(upper));
    CHECK(label(text) == v);
    CHECK_NOTHROW(tax.validate(v));
  }
}

TEST_CASE("classes outside the taxonomy are never emitted") {
  auto j = Taxonomy::defaults().to_json();
  j["factors"][0]["classes"] = {"hours", "days", "weeks", "months"};
  const auto four = Taxonomy::from_json(Json::parse(j.dump()));
  const auto v = apply_lexicon("from few minutes", Lexicon::defaults(), four);
  CHECK(v.is_absent(Factor::duration));
}
