#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "embed.hpp"
#include "error.hpp"
#include "mock_server.hpp"
#include "rng.hpp"

using namespace sfc;
using sfc::testing::MockEmbedServer;

namespace {

WordVectorTable parse_text(const std::string& s) {
  std::istringstream in(s);
  return parse_word_vectors(in, WordVectorFormat::text);
}

WordVectorTable parse_binary(const std::string& s) {
  std::istringstream in(s, std::ios::binary);
  return parse_word_vectors(in, WordVectorFormat::binary);
}

std::string le_float(float f) {
  const auto bits = std::bit_cast<std::uint32_t>(f);
  std::string out;
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
  return out;
}

WordVectorTable ab_table() {
  WordVectorTable t(2);
  const double a[] = {1, 0}, b[] = {0, 1};
  t.add("a", a);
  t.add("b", b);
  return t;
}

}  // namespace

TEST_CASE("text word vectors") {
  const auto t = parse_text("2 3\nking 0.1 0.2 0.3\nqueen 0.4 0.5 0.6\n");
  CHECK(t.dim() == 3);
  CHECK(t.size() == 2);
  CHECK(t.find("king")[1] == 0.2);
  CHECK(t.find("queen")[2] == 0.6);
  CHECK(t.find("jack").empty());
}

TEST_CASE("binary word vectors match the hand-built byte layout") {
  // Hand-laid bytes: header, then word, 0x20, three float32 LE, 0x0A.
  std::string bytes = "2 3\n";
  bytes += "king " + le_float(0.1f) + le_float(0.2f) + le_float(0.3f) + "\n";
  bytes += "queen " + le_float(0.4f) + le_float(0.5f) + le_float(0.6f) + "\n";
  const auto t = parse_binary(bytes);
  CHECK(t.size() == 2);
  CHECK(t.find("king")[0] == static_cast<double>(0.1f));
  CHECK(t.find("queen")[2] == static_cast<double>(0.6f));

  // The repo's writer produces exactly those bytes.
  std::ostringstream out(std::ios::binary);
  write_word_vectors(out, t, WordVectorFormat::binary);
  CHECK(out.str() == bytes);

  // Trailing newline is optional.
  std::string bare = "1 1\nx " + le_float(2.5f);
  CHECK(parse_binary(bare).find("x")[0] == 2.5);
}

TEST_CASE("empty vocabulary") {
  const auto t = parse_text("0 3\n");
  CHECK(t.size() == 0);
  CHECK(t.dim() == 3);
  CHECK(parse_binary("0 3\n").dim() == 3);
}

TEST_CASE("word vector parse errors") {
  CHECK_THROWS_AS(parse_text("2 3\nking 0.1 0.2 0.3\n"), ParseError);
  CHECK_THROWS_AS(parse_text("1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_text("1 -2\n"), ParseError);
  CHECK_THROWS_AS(parse_text("1 2\nx nan 1\n"), ParseError);
  CHECK_THROWS_AS(parse_text("1 2\nx inf 1\n"), ParseError);
  CHECK_THROWS_AS(parse_text("1 2\nx 1\n"), ParseError);
  CHECK_THROWS_AS(parse_text("2 1\nx 1\nx 2\n"), ParseError);
  CHECK_THROWS_AS(parse_text("garbage\n"), ParseError);
  CHECK_THROWS_AS(parse_text(""), ParseError);
  CHECK_THROWS_AS(parse_binary("1 2\nx " + le_float(1.0f)), ParseError);
  CHECK_THROWS_AS(parse_binary("1 1\nx " + le_float(std::numeric_limits<float>::infinity())),
                  ParseError);

  try {
    parse_binary("1 2\nabc " + le_float(1.0f));
    FAIL("expected truncation error");
  } catch (const ParseError& e) {
    // header 4 bytes + "abc " 4 bytes + 4 float bytes consumed
    CHECK(std::string(e.what()).find("byte offset 12") != std::string::npos);
  }
}

TEST_CASE("round trip through both formats") {
  Xoshiro256 rng(3);
  WordVectorTable t(5);
  for (int w = 0; w < 40; ++w) {
    std::vector<double> v(5);
    for (auto& x : v) x = static_cast<double>(static_cast<float>(rng.uniform() * 4 - 2));
    t.add("w" + std::to_string(w), v);
  }
  for (auto fmt : {WordVectorFormat::text, WordVectorFormat::binary}) {
    std::ostringstream out(std::ios::binary);
    write_word_vectors(out, t, fmt);
    std::istringstream in(out.str(), std::ios::binary);
    CHECK(parse_word_vectors(in, fmt) == t);
  }
  // Text keeps full double precision.
  WordVectorTable d(1);
  const double pi[] = {3.141592653589793};
  d.add("pi", pi);
  std::ostringstream out;
  write_word_vectors(out, d, WordVectorFormat::text);
  CHECK(parse_text(out.str()) == d);
}

TEST_CASE("average pooling") {
  const auto t = ab_table();
  const Vector ab = embed_average("a b", t);
  CHECK(ab[0] == 0.5);
  CHECK(ab[1] == 0.5);
  const Vector a = embed_average("a zzz", t);
  CHECK(a[0] == 1.0);
  CHECK(a[1] == 0.0);
  CHECK_THROWS_AS(embed_average("zzz yyy", t, "u7"), CoverageError);
  try {
    embed_average("zzz", t, "u7");
  } catch (const CoverageError& e) {
    CHECK(std::string(e.what()).find("u7") != std::string::npos);
  }
  CHECK_THROWS_AS(embed_average("  ", t), ArgumentError);
}

TEST_CASE("average pooling ignores word order") {
  Xoshiro256 rng(10);
  WordVectorTable t(4);
  std::vector<std::string> vocab;
  for (int w = 0; w < 20; ++w) {
    std::vector<double> v(4);
    for (auto& x : v) x = rng.uniform();
    vocab.push_back("w" + std::to_string(w));
    t.add(vocab.back(), v);
  }
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> toks;
    for (std::uint64_t k = 0, n = 1 + rng.below(8); k < n; ++k)
      toks.push_back(vocab[rng.below(vocab.size())]);
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& x : v) s += x + " ";
      return s;
    };
    const Vector base = embed_average(join(toks), t);
    rng.shuffle(std::span<std::string>(toks));
    CHECK((embed_average(join(toks), t) - base).norm() <= 1e-12);
    // A single token gives back its stored vector exactly.
    const auto one = toks[0];
    const Vector single = embed_average(one, t);
    for (std::size_t k = 0; k < 4; ++k) CHECK(single[static_cast<Eigen::Index>(k)] == t.find(one)[k]);
  }
}

TEST_CASE("hash embedder") {
  const Vector a = embed_hash("severe headache", 256, 1);
  const Vector b = embed_hash("mild headache", 256, 1);
  CHECK(a == embed_hash("severe headache", 256, 1));
  CHECK((a - b).cwiseAbs().maxCoeff() > 0);
  CHECK(std::abs(a.norm() - 1.0) <= 1e-12);
  CHECK(embed_hash("Severe HEADACHE", 256, 1) == a);
  CHECK(embed_hash("severe headache", 256, 2) != a);
  CHECK_THROWS_AS(embed_hash("...", 256, 1), ArgumentError);
  CHECK_THROWS_AS(embed_hash("x", 1, 1), ArgumentError);

  Xoshiro256 rng(77);
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    for (std::uint64_t k = 0, n = 1 + rng.below(5); k < n; ++k)
      text += "t" + std::to_string(rng.below(50)) + " ";
    const std::size_t dim = 2 + rng.below(10);
    const Vector v = embed_hash(text, dim, i);
    CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    CHECK(v == embed_hash(text, dim, i));
  }
}

TEST_CASE("remote embedding pass-through") {
  MockEmbedServer server([](const std::vector<std::string>& texts) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < texts.size(); ++i)
      rows.push_back(i == 0 ? nlohmann::json{1, 0} : nlohmann::json{0, 1});
    return std::pair{200, nlohmann::json{{"dim", 2}, {"embeddings", rows}}};
  });
  RemoteEndpointConfig cfg;
  cfg.base_url = server.url();
  cfg.expected_dim = 2;
  const Matrix m = embed_remote({"first", "second"}, cfg);
  CHECK(m.rows() == 2);
  CHECK(m(0, 0) == 1);
  CHECK(m(1, 1) == 1);
  CHECK(remote_health(cfg) == 2);
}

TEST_CASE("remote contract violations") {
  MockEmbedServer wide([](const std::vector<std::string>& texts) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < texts.size(); ++i) rows.push_back({1, 2, 3});
    return std::pair{200, nlohmann::json{{"embeddings", rows}}};
  });
  RemoteEndpointConfig cfg;
  cfg.base_url = wide.url();
  cfg.expected_dim = 2;
  CHECK_THROWS_AS(embed_remote({"a", "b"}, cfg), ContractError);

  MockEmbedServer short_rows([](const std::vector<std::string>&) {
    return std::pair{200, nlohmann::json{{"dim", 2}, {"embeddings", {{1, 2}}}}};
  });
  cfg.base_url = short_rows.url();
  CHECK_THROWS_AS(embed_remote({"a", "b"}, cfg), ContractError);

  MockEmbedServer failing([](const std::vector<std::string>&) {
    return std::pair{500, nlohmann::json{{"error", "boom"}}};
  });
  cfg.base_url = failing.url();
  CHECK_THROWS_AS(embed_remote({"a"}, cfg), EndpointError);

  CHECK_THROWS_AS(embed_remote({}, cfg), ArgumentError);
  CHECK_THROWS_AS(embed_remote({" "}, cfg), ArgumentError);
}

TEST_CASE("unreachable endpoint fails within the timeout") {
  RemoteEndpointConfig cfg;
  cfg.base_url = "http://127.0.0.1:1";
  cfg.timeout = std::chrono::milliseconds(500);
  cfg.expected_dim = 2;
  const auto start = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(embed_remote({"a"}, cfg), EndpointError);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(5));
  CHECK_THROWS_AS(remote_health(cfg), EndpointError);
}

TEST_CASE("batching preserves order and concatenation") {
  MockEmbedServer server(&MockEmbedServer::features);
  RemoteEndpointConfig cfg;
  cfg.base_url = server.url();
  cfg.expected_dim = 3;
  cfg.max_batch = 3;

  std::vector<std::string> first, second, all;
  for (int i = 0; i < 7; ++i) first.push_back(std::string(1 + i, 'a' + i) + " x");
  for (int i = 0; i < 5; ++i) second.push_back(std::string(2 + i, 'k' + i));
  all = first;
  all.insert(all.end(), second.begin(), second.end());

  const Matrix a = embed_remote(first, cfg);
  const Matrix b = embed_remote(second, cfg);
  for (std::size_t concurrency : {1u, 4u}) {
    cfg.max_concurrency = concurrency;
    const Matrix ab = embed_remote(all, cfg);
    Matrix joined(a.rows() + b.rows(), 3);
    joined << a, b;
    CHECK(ab == joined);
  }
  CHECK(server.max_batch_seen() <= 3);
  for (std::size_t i = 0; i < first.size(); ++i)
    CHECK(a(static_cast<Eigen::Index>(i), 0) == static_cast<double>(first[i].size()));
}

TEST_CASE("base URL with a path prefix and bad schemes") {
  RemoteEndpointConfig cfg;
  cfg.base_url = "https://example.invalid";
  CHECK_THROWS_AS(embed_remote({"a"}, cfg), ArgumentError);
  cfg.base_url = "no-scheme";
  CHECK_THROWS_AS(embed_remote({"a"}, cfg), ArgumentError);
  cfg.base_url = "http://127.0.0.1:1";
  cfg.timeout = std::chrono::milliseconds(0);
  CHECK_THROWS_AS(embed_remote({"a"}, cfg), ArgumentError);
}

TEST_CASE("embedder implementations") {
  HashEmbedder h(16, 3);
  const Matrix m = h.embed({"a b", "c"}, {});
  CHECK(m.rows() == 2);
  CHECK(m.row(0).transpose() == embed_hash("a b", 16, 3));

  AverageEmbedder avg(std::make_shared<const WordVectorTable>(ab_table()));
  CHECK(avg.dim() == 2);
  CHECK_THROWS_AS(avg.embed({"a", "q"}, {"x1", "x2"}), CoverageError);
}
