#include "embed.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>

#include "error.hpp"
#include "httplib.h"
#include "json.hpp"
#include "rng.hpp"
#include "text.hpp"

namespace sfc {

WordVectorTable::WordVectorTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ArgumentError("word vectors: dim must be positive");
}

void WordVectorTable::add(std::string word, std::span<const double> values) {
  if (values.size() != dim_)
    throw ValidationError("word vectors: '" + word + "' has " +
                          std::to_string(values.size()) + " components, want " +
                          std::to_string(dim_));
  for (double v : values)
    if (!std::isfinite(v))
      throw ValidationError("word vectors: non-finite component for '" + word +
                            "'");
  if (!index_.emplace(word, words_.size()).second)
    throw ValidationError("word vectors: duplicate word '" + word + "'");
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
}

std::span<const double> WordVectorTable::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return {};
  return {data_.data() + it->second * dim_, dim_};
}

bool WordVectorTable::operator==(const WordVectorTable& other) const {
  return dim_ == other.dim_ && words_ == other.words_ &&
         data_.size() == other.data_.size() &&
         std::memcmp(data_.data(), other.data_.data(),
                     data_.size() * sizeof(double)) == 0;
}

namespace {

// Byte-counting reader so parse errors can report offsets.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::size_t offset() const { return offset_; }

  int get() {
    const int c = in_.get();
    if (c != std::char_traits<char>::eof()) ++offset_;
    return c;
  }
  int peek() { return in_.peek(); }

  bool read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    offset_ += static_cast<std::size_t>(in_.gcount());
    return static_cast<std::size_t>(in_.gcount()) == n;
  }

  // Reads up to (not including) '\n'; false at end of stream with no data.
  bool line(std::string& out) {
    out.clear();
    int c;
    bool any = false;
    while ((c = get()) != std::char_traits<char>::eof()) {
      any = true;
      if (c == '\n') return true;
      out.push_back(static_cast<char>(c));
    }
    return any;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("word vectors: " + msg + " at byte offset " +
                     std::to_string(offset_));
  }

 private:
  std::istream& in_;
  std::size_t offset_ = 0;
};

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

WordVectorTable parse_word_vectors(std::istream& in, WordVectorFormat format) {
  Reader r(in);
  std::string header;
  if (!r.line(header)) r.fail("missing header");
  const auto fields = split_spaces(header);
  long long count = 0, dim = 0;
  if (fields.size() != 2 || !parse_number(fields[0], count) ||
      !parse_number(fields[1], dim))
    r.fail("malformed header '" + header + "'");
  if (count < 0) r.fail("negative vocabulary size");
  if (dim <= 0) r.fail("dimension must be positive");

  WordVectorTable table(static_cast<std::size_t>(dim));
  std::vector<double> values(static_cast<std::size_t>(dim));

  if (format == WordVectorFormat::text) {
    std::string line;
    for (long long n = 0; n < count; ++n) {
      if (!r.line(line)) r.fail("truncated stream, expected " +
                                std::to_string(count) + " entries, got " +
                                std::to_string(n));
      const auto tok = split_spaces(line);
      if (tok.size() != values.size() + 1)
        r.fail("entry " + std::to_string(n + 1) + " has " +
               std::to_string(tok.empty() ? 0 : tok.size() - 1) +
               " components, want " + std::to_string(dim));
      for (std::size_t k = 0; k < values.size(); ++k) {
        if (!parse_number(tok[k + 1], values[k]))
          r.fail("bad number '" + std::string(tok[k + 1]) + "'");
        if (!std::isfinite(values[k])) r.fail("non-finite component");
      }
      try {
        table.add(std::string(tok[0]), values);
      } catch (const ValidationError& e) {
        r.fail(e.what());
      }
    }
  } else {
    std::vector<char> raw(values.size() * 4);
    for (long long n = 0; n < count; ++n) {
      std::string word;
      int c;
      while ((c = r.peek()) == '\n' || c == '\r') r.get();
      while ((c = r.get()) != std::char_traits<char>::eof() && c != ' ')
        word.push_back(static_cast<char>(c));
      if (c != ' ') r.fail("truncated stream in word of entry " +
                           std::to_string(n + 1));
      if (word.empty()) r.fail("empty word in entry " + std::to_string(n + 1));
      if (!r.read(raw.data(), raw.size()))
        r.fail("truncated stream in vector of '" + word + "'");
      for (std::size_t k = 0; k < values.size(); ++k) {
        std::uint32_t bits = 0;
        for (int b = 3; b >= 0; --b)
          bits = (bits << 8) | static_cast<unsigned char>(raw[k * 4 + b]);
        const float f = std::bit_cast<float>(bits);
        if (!std::isfinite(f)) r.fail("non-finite component for '" + word + "'");
        values[k] = static_cast<double>(f);
      }
      try {
        table.add(std::move(word), values);
      } catch (const ValidationError& e) {
        r.fail(e.what());
      }
      if (r.peek() == '\n') r.get();
    }
  }
  return table;
}

WordVectorFormat format_for_path(std::string_view path) {
  return path.ends_with(".bin") ? WordVectorFormat::binary
                                : WordVectorFormat::text;
}

WordVectorTable read_word_vectors_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open word vectors '" + path + "'");
  try {
    return parse_word_vectors(in, format_for_path(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_word_vectors(std::ostream& out, const WordVectorTable& table,
                        WordVectorFormat format) {
  out << table.size() << ' ' << table.dim() << '\n';
  char buf[64];
  for (const auto& word : table.words()) {
    const auto v = table.find(word);
    out << word;
    if (format == WordVectorFormat::text) {
      for (double x : v) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
        out << ' ' << std::string_view(buf, static_cast<std::size_t>(end - buf));
      }
    } else {
      out << ' ';
      for (double x : v) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(x));
        for (int b = 0; b < 4; ++b)
          out.put(static_cast<char>((bits >> (8 * b)) & 0xFF));
      }
    }
    out << '\n';
  }
}

Vector embed_average(std::string_view text, const WordVectorTable& table,
                     std::string_view id) {
  if (trim(text).empty()) throw ArgumentError("embed_average: empty text");
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(table.dim()));
  std::size_t hits = 0;
  for (const auto& token : tokenize(text)) {
    const auto v = table.find(token);
    if (v.empty()) continue;
    sum += Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    ++hits;
  }
  if (hits == 0)
    throw CoverageError("no in-vocabulary token in text" +
                        (id.empty() ? std::string() : " '" + std::string(id) + "'"));
  return sum / static_cast<double>(hits);
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

std::uint64_t fnv1a(std::string_view s, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t mixed_basis(std::uint64_t seed) {
  std::uint64_t s = seed;
  return kFnvOffset ^ splitmix64(s);
}

}  // namespace

Vector embed_hash(std::string_view text, std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw ArgumentError("embed_hash: dim must be >= 2");
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw ArgumentError("embed_hash: text has no tokens");

  const std::uint64_t bucket_basis = mixed_basis(seed);
  const std::uint64_t sign_basis = mixed_basis(seed ^ 0x5851f42d4c957f2dull);
  const auto n = static_cast<Eigen::Index>(dim);
  Vector v = Vector::Zero(n);
  Vector unsigned_v = Vector::Zero(n);
  for (const auto& t : tokens) {
    const auto idx = static_cast<Eigen::Index>(fnv1a(t, bucket_basis) % dim);
    const double sign = (fnv1a(t, sign_basis) >> 63) ? -1.0 : 1.0;
    v[idx] += sign;
    unsigned_v[idx] += 1.0;
  }
  double norm = v.norm();
  if (norm == 0.0) {
    v = unsigned_v;
    norm = v.norm();
  }
  return v / norm;
}

// ---------------------------------------------------------------------------
// Remote service client

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ArgumentError("endpoint URL needs a scheme: '" + url + "'");
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http")
    throw ArgumentError("only http:// endpoints are supported: '" + url + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) out.prefix = url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

httplib::Client make_client(const SplitUrl& url,
                            const RemoteEndpointConfig& config) {
  httplib::Client cli(url.origin);
  const auto ms = config.timeout.count();
  const auto sec = static_cast<time_t>(ms / 1000);
  const auto usec = static_cast<time_t>((ms % 1000) * 1000);
  cli.set_connection_timeout(sec, usec);
  cli.set_read_timeout(sec, usec);
  cli.set_write_timeout(sec, usec);
  return cli;
}

void check_config(const RemoteEndpointConfig& config) {
  if (config.timeout.count() <= 0)
    throw ArgumentError("endpoint timeout must be positive");
  if (config.max_batch < 1) throw ArgumentError("max batch must be >= 1");
  if (config.expected_dim < 1) throw ArgumentError("expected dim must be >= 1");
}

Matrix embed_batch(const SplitUrl& url, const RemoteEndpointConfig& config,
                   const std::vector<std::string>& texts, std::size_t begin,
                   std::size_t end) {
  nlohmann::json body;
  body["texts"] = std::vector<std::string>(texts.begin() + static_cast<long>(begin),
                                           texts.begin() + static_cast<long>(end));
  auto cli = make_client(url, config);
  auto res = cli.Post(url.prefix + "/embed", body.dump(), "application/json");
  if (!res)
    throw EndpointError("embedding endpoint " + url.origin + ": " +
                        httplib::to_string(res.error()));
  if (res->status != 200)
    throw EndpointError("embedding endpoint returned HTTP " +
                        std::to_string(res->status));

  const auto j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ContractError("embedding response is not a JSON object");
  if (!j.contains("embeddings") || !j["embeddings"].is_array())
    throw ContractError("embedding response lacks an \"embeddings\" array");
  if (j.contains("dim") &&
      (!j["dim"].is_number_integer() ||
       j["dim"].get<long long>() != static_cast<long long>(config.expected_dim)))
    throw ContractError("embedding response dim " + j["dim"].dump() +
                        " != expected " + std::to_string(config.expected_dim));
  const auto& rows = j["embeddings"];
  const std::size_t n = end - begin;
  if (rows.size() != n)
    throw ContractError("embedding response has " + std::to_string(rows.size()) +
                        " rows for " + std::to_string(n) + " texts");

  Matrix out(static_cast<Eigen::Index>(n),
             static_cast<Eigen::Index>(config.expected_dim));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != config.expected_dim)
      throw ContractError("embedding row " + std::to_string(begin + i) +
                          " has " + std::to_string(row.is_array() ? row.size() : 0) +
                          " components, expected " +
                          std::to_string(config.expected_dim));
    for (std::size_t k = 0; k < config.expected_dim; ++k) {
      if (!row[k].is_number())
        throw ContractError("embedding component is not a number");
      const double v = row[k].get<double>();
      if (!std::isfinite(v))
        throw ContractError("embedding component is not finite");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
    }
  }
  return out;
}

}  // namespace

Matrix embed_remote(const std::vector<std::string>& texts,
                    const RemoteEndpointConfig& config) {
  check_config(config);
  if (texts.empty()) throw ArgumentError("embed_remote: no texts");
  for (const auto& t : texts)
    if (trim(t).empty()) throw ArgumentError("embed_remote: empty text");

  const auto url = split_url(config.base_url);
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t b = 0; b < texts.size(); b += config.max_batch)
    ranges.emplace_back(b, std::min(texts.size(), b + config.max_batch));

  Matrix out(static_cast<Eigen::Index>(texts.size()),
             static_cast<Eigen::Index>(config.expected_dim));
  const std::size_t window = std::max<std::size_t>(1, config.max_concurrency);
  for (std::size_t first = 0; first < ranges.size(); first += window) {
    const std::size_t last = std::min(ranges.size(), first + window);
    std::vector<std::future<Matrix>> pending;
    for (std::size_t r = first; r < last; ++r) {
      const auto [b, e] = ranges[r];
      pending.push_back(std::async(
          window == 1 ? std::launch::deferred : std::launch::async,
          [&, b = b, e = e] { return embed_batch(url, config, texts, b, e); }));
    }
    for (std::size_t r = first; r < last; ++r) {
      const auto begin = static_cast<Eigen::Index>(ranges[r].first);
      Matrix part = pending[r - first].get();
      out.middleRows(begin, part.rows()) = part;
    }
  }
  return out;
}

std::size_t remote_health(const RemoteEndpointConfig& config) {
  check_config(config);
  const auto url = split_url(config.base_url);
  auto cli = make_client(url, config);
  auto res = cli.Get(url.prefix + "/health");
  if (!res)
    throw EndpointError("embedding endpoint " + url.origin + ": " +
                        httplib::to_string(res.error()));
  if (res->status != 200)
    throw EndpointError("embedding endpoint health returned HTTP " +
                        std::to_string(res->status));
  const auto j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("status", "") != "ok" ||
      !j.contains("dim") || !j["dim"].is_number_integer())
    throw ContractError("malformed health response");
  return j["dim"].get<std::size_t>();
}

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim < 2) throw ArgumentError("hash embedder: dim must be >= 2");
}

Matrix HashEmbedder::embed(const std::vector<std::string>& texts,
                           const std::vector<std::string>&) const {
  Matrix out(static_cast<Eigen::Index>(texts.size()),
             static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < texts.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = embed_hash(texts[i], dim_, seed_);
  return out;
}

AverageEmbedder::AverageEmbedder(std::shared_ptr<const WordVectorTable> table)
    : table_(std::move(table)) {
  if (!table_) throw ArgumentError("average embedder: no table");
}

Matrix AverageEmbedder::embed(const std::vector<std::string>& texts,
                              const std::vector<std::string>& ids) const {
  Matrix out(static_cast<Eigen::Index>(texts.size()),
             static_cast<Eigen::Index>(table_->dim()));
  for (std::size_t i = 0; i < texts.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) =
        embed_average(texts[i], *table_, i < ids.size() ? ids[i] : "");
  return out;
}

RemoteEmbedder::RemoteEmbedder(RemoteEndpointConfig config)
    : config_(std::move(config)) {
  check_config(config_);
}

Matrix RemoteEmbedder::embed(const std::vector<std::string>& texts,
                             const std::vector<std::string>&) const {
  if (texts.empty())
    return Matrix(0, static_cast<Eigen::Index>(config_.expected_dim));
  return embed_remote(texts, config_);
}

}  // namespace sfc
