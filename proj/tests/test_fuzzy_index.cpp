#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "namekit/errors.hpp"
#include "namekit/fuzzy_index.hpp"
#include "namekit/utf8.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace namekit;
using dataset::Gender;
using dataset::NameRecord;
using normalization::NormalizedText;

namespace {

NameRecord record(const char* persian, const char* latin, Gender g) {
  return {NormalizedText(persian), NormalizedText(latin), g};
}

}  // namespace

TEST_CASE("levenshtein matches the textbook recurrence") {
  CHECK(fuzzy::levenshtein(U"kitten", U"sitting") == 3);
  CHECK(fuzzy::levenshtein(U"x", U"x") == 0);
  CHECK(fuzzy::levenshtein(U"", U"abc") == 3);
  CHECK(fuzzy::levenshtein(U"abc", U"") == 3);
  CHECK(fuzzy::levenshtein(U"سارا", U"تارا") == 1);

  CHECK(fuzzy::normalized_levenshtein(U"kitten", U"sitting") ==
        doctest::Approx(3.0 / 7.0));
  CHECK(fuzzy::normalized_levenshtein(U"abc", U"abc") == 0.0);
  CHECK(fuzzy::normalized_levenshtein(U"", U"") == 0.0);
  CHECK(fuzzy::normalized_levenshtein(U"ab", U"cd") == 1.0);
}

TEST_CASE("levenshtein properties against the oracle") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1500; ++i) {
    std::u32string a = synthetic::random_unicode(rng, 24);
    std::u32string b = synthetic::random_unicode(rng, 24);
    std::size_t d = fuzzy::levenshtein(a, b);
    CHECK(d == oracles::levenshtein(a, b));
    CHECK(d == fuzzy::levenshtein(b, a));
    CHECK((d == 0) == (a == b));
    double nd = fuzzy::normalized_levenshtein(a, b);
    CHECK(nd >= 0.0);
    CHECK(nd <= 1.0);
  }
}

TEST_CASE("index build, reachability, and error paths") {
  std::vector<NameRecord> records = {
      record("سارا", "sara", Gender::female),
      record("علی", "ali", Gender::male),
      record("مریم", "maryam", Gender::female),
  };
  fuzzy::NameIndex index = fuzzy::NameIndex::build(records);
  CHECK(index.size() == 3);

  // Every entry reachable through both key spaces.
  for (const auto& r : records) {
    auto by_persian = index.top_k(r.persian, 1, fuzzy::QueryScript::persian);
    REQUIRE(by_persian.size() == 1);
    CHECK(by_persian[0].record == r);
    CHECK(by_persian[0].distance == 0.0);
    auto by_latin = index.top_k(r.latin, 1, fuzzy::QueryScript::latin);
    REQUIRE(by_latin.size() == 1);
    CHECK(by_latin[0].record == r);
  }

  CHECK_THROWS_AS(fuzzy::NameIndex::build({}), EmptyDatasetError);
  CHECK_THROWS_AS(index.top_k(NormalizedText("sara"), 4), EvenKError);
  CHECK_THROWS_AS(index.top_k(NormalizedText("sara"), 0), EvenKError);
  CHECK_THROWS_AS(index.top_k(NormalizedText(""), 1), EmptyQueryError);

  // k beyond the index size is clamped, not an error.
  auto clamped = index.top_k(NormalizedText("sara"), 99, fuzzy::QueryScript::latin);
  CHECK(clamped.size() == 3);
}

TEST_CASE("auto script detection picks the right key space") {
  fuzzy::NameIndex index = fuzzy::NameIndex::build({
      record("سارا", "sara", Gender::female),
      record("دارا", "dara", Gender::male),
  });
  auto persian = index.top_k_raw("سارا", 1);
  REQUIRE(persian.size() == 1);
  CHECK(persian[0].record.latin.value == "sara");
  auto latin = index.top_k_raw("DARA", 1);  // normalized on the way in
  REQUIRE(latin.size() == 1);
  CHECK(latin[0].record.persian.value == "دارا");
}

TEST_CASE("accelerated top_k equals brute force on synthetic data") {
  auto records = synthetic::make_records(600, 23);
  fuzzy::NameIndex index = fuzzy::NameIndex::build(records);

  for (bool persian_space : {false, true}) {
    auto queries = synthetic::make_queries(records, 120, 29 + persian_space, persian_space);
    auto script = persian_space ? fuzzy::QueryScript::persian : fuzzy::QueryScript::latin;
    for (const auto& q : queries) {
      std::u32string q32 = utf8::decode(q);
      for (std::size_t k : {1, 3, 5}) {
        auto fast = index.top_k(NormalizedText(q), k, script);
        auto slow = oracles::brute_force_top_k(records, q32, k, persian_space);
        REQUIRE(oracles::same_neighbors(fast, slow));
      }
    }
  }
}

TEST_CASE("repeated queries return identical results") {
  auto records = synthetic::make_records(200, 31);
  fuzzy::NameIndex index = fuzzy::NameIndex::build(records);
  auto first = index.top_k(NormalizedText("sara"), 5, fuzzy::QueryScript::latin);
  auto second = index.top_k(NormalizedText("sara"), 5, fuzzy::QueryScript::latin);
  CHECK(oracles::same_neighbors(first, second));
}

TEST_CASE("index persistence round-trips and rejects bad files") {
  auto records = synthetic::make_records(50, 37);
  fuzzy::NameIndex index = fuzzy::NameIndex::build(records);

  std::string path = "test_index.nkix";
  index.save(path);
  fuzzy::NameIndex loaded = fuzzy::NameIndex::load(path);
  CHECK(loaded.size() == index.size());
  CHECK(loaded.records() == index.records());
  auto a = index.top_k(NormalizedText("test"), 3, fuzzy::QueryScript::latin);
  auto b = loaded.top_k(NormalizedText("test"), 3, fuzzy::QueryScript::latin);
  CHECK(oracles::same_neighbors(a, b));

  {
    std::ofstream bad("test_index_bad.nkix", std::ios::binary);
    bad << "XXXX garbage";
  }
  CHECK_THROWS_AS(fuzzy::NameIndex::load("test_index_bad.nkix"), FormatError);

  {
    // Right magic, wrong version byte.
    std::ofstream bad("test_index_ver.nkix", std::ios::binary);
    bad << "NKIX" << '\x7F';
  }
  CHECK_THROWS_AS(fuzzy::NameIndex::load("test_index_ver.nkix"), FormatError);
  CHECK_THROWS_AS(fuzzy::NameIndex::load("no_such_file.nkix"), FileNotFoundError);

  std::remove(path.c_str());
  std::remove("test_index_bad.nkix");
  std::remove("test_index_ver.nkix");
}
