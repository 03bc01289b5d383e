#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sfc {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// The four characterization factors, in their fixed canonical order.
enum class Factor : std::size_t { duration = 0, frequency, severity, onset };

inline constexpr std::size_t kFactorCount = 4;
inline constexpr std::array<Factor, kFactorCount> kAllFactors = {
    Factor::duration, Factor::frequency, Factor::severity, Factor::onset};
inline constexpr std::string_view kAbsent = "absent";

std::string_view factor_name(Factor f);
// Throws ValidationError for an unknown name.
Factor parse_factor(std::string_view name);

/// One class name per factor, "absent" when the utterance does not mention
/// that factor.
class LabelVector {
 public:
  LabelVector();

  const std::string& operator[](Factor f) const {
    return values_[static_cast<std::size_t>(f)];
  }
  std::string& operator[](Factor f) {
    return values_[static_cast<std::size_t>(f)];
  }
  bool is_absent(Factor f) const { return (*this)[f] == kAbsent; }

  bool operator==(const LabelVector&) const = default;

 private:
  std::array<std::string, kFactorCount> values_;
};

/// Declared class lists per factor. "absent" is implicit and always last in
/// classes_with_absent().
class Taxonomy {
 public:
  explicit Taxonomy(std::array<std::vector<std::string>, kFactorCount> classes);

  // duration={minutes,hours,days,weeks,months}, frequency={continuous,on-off},
  // severity={mild,moderate,severe}, onset={sudden,gradual}
  static Taxonomy defaults();
  // {"factors":[{"name":..., "classes":[...]}, ...]} in canonical order.
  static Taxonomy from_json(const Json& j);
  OrderedJson to_json() const;

  const std::vector<std::string>& classes(Factor f) const {
    return classes_[static_cast<std::size_t>(f)];
  }
  std::vector<std::string> classes_with_absent(Factor f) const;
  // Includes "absent".
  bool contains(Factor f, std::string_view cls) const;
  // Throws ValidationError naming the offending slot.
  void validate(const LabelVector& labels) const;

  bool operator==(const Taxonomy&) const = default;

 private:
  std::array<std::vector<std::string>, kFactorCount> classes_;
};

struct LabeledUtterance {
  std::string id;
  std::string text;
  std::string parent;
  LabelVector labels;

  bool operator==(const LabeledUtterance&) const = default;
};

/// Reads line-delimited JSON records. With require_labels == false the
/// "labels" object may be omitted (raw text awaiting weak labeling) and the
/// record gets an all-absent vector.
std::vector<LabeledUtterance> parse_dataset(std::istream& in,
                                            const Taxonomy& taxonomy,
                                            bool require_labels = true);
std::vector<LabeledUtterance> read_dataset_file(const std::string& path,
                                                const Taxonomy& taxonomy,
                                                bool require_labels = true);

OrderedJson labels_to_json(const LabelVector& labels);
LabelVector labels_from_json(const Json& j, const Taxonomy& taxonomy);

void write_dataset(std::ostream& out,
                   const std::vector<LabeledUtterance>& records);
void write_dataset_file(const std::string& path,
                        const std::vector<LabeledUtterance>& records);

/// Fisher-Yates shuffle driven by xoshiro256** seeded with `seed`; the first
/// floor(ratio * N) shuffled records form the training part.
std::pair<std::vector<LabeledUtterance>, std::vector<LabeledUtterance>>
split_train_test(const std::vector<LabeledUtterance>& records, double ratio,
                 std::uint64_t seed);

struct SyntheticSpec {
  std::size_t count = 500;
  std::uint64_t seed = 1;
  int max_factors_per_sentence = 4;
};

/// Templated utterances. Every non-absent slot is expressed by a cue phrase
/// the default lexicon recognizes, so labels agree with the text.
std::vector<LabeledUtterance> generate_synthetic(const SyntheticSpec& spec,
                                                 const Taxonomy& taxonomy);

}  // namespace sfc
