#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "namekit/dataset.hpp"
#include "namekit/normalization.hpp"

namespace namekit::fuzzy {

// Minimum number of single-character edits (insertions, deletions,
// substitutions) over Unicode scalar values.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(const normalization::NormalizedText& a,
                        const normalization::NormalizedText& b);

// Edit distance divided by the longer length, in [0,1]. Both-empty is 0.
double normalized_levenshtein(std::u32string_view a, std::u32string_view b);
double normalized_levenshtein(const normalization::NormalizedText& a,
                              const normalization::NormalizedText& b);

struct Neighbor {
  dataset::NameRecord record;
  double distance = 0.0;        // normalized Levenshtein to the query
  std::size_t raw_distance = 0; // plain edit distance
  std::size_t denominator = 0;  // max(|query|, |matched key|)
};

enum class QueryScript { persian, latin, auto_detect };

// Immutable nearest-name index over a record collection, queryable by both
// the Persian and the Latin key space. Acceleration is a BK-tree on raw
// edit distance (a metric); the normalized distance orders final results.
// See http://blog.notdot.net/2007/4/Damn-Cool-Algorithms-Part-1-BK-Trees
// for the tree family.
class NameIndex {
 public:
  // Records are expected normalized and deduplicated. Throws
  // EmptyDatasetError when the collection is empty.
  static NameIndex build(std::vector<dataset::NameRecord> records);

  std::size_t size() const { return records_.size(); }
  const std::vector<dataset::NameRecord>& records() const { return records_; }

  // Returns min(k, size) neighbors ordered by (normalized distance, matched
  // key, gender with female first, other-script key). k must be odd;
  // k > size is clamped with a warning. The result is exactly what a brute
  // force scan under the same ordering returns. Throws EvenKError,
  // EmptyQueryError.
  std::vector<Neighbor> top_k(const normalization::NormalizedText& query,
                              std::size_t k,
                              QueryScript script = QueryScript::auto_detect) const;

  // Normalizes raw text by detected (or forced) script, then queries.
  std::vector<Neighbor> top_k_raw(std::string_view raw_query, std::size_t k,
                                  QueryScript script = QueryScript::auto_detect) const;

  // Versioned binary snapshot of the record collection; the tree is rebuilt
  // on load. Loading a file with a different format version is an error.
  void save(const std::string& path) const;
  static NameIndex load(const std::string& path);

 private:
  struct Node {
    std::u32string key;
    std::vector<std::uint32_t> record_ids;
    std::map<std::size_t, std::unique_ptr<Node>> children;  // edge: raw distance
  };

  struct Tree {
    std::unique_ptr<Node> root;
    std::size_t max_key_length = 0;

    void insert(std::u32string key, std::uint32_t record_id);
  };

  NameIndex() = default;
  void build_trees();
  const Tree& tree_for(QueryScript script, std::u32string_view query) const;

  std::vector<dataset::NameRecord> records_;
  Tree persian_;
  Tree latin_;
};

}  // namespace namekit::fuzzy
