#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace supmatch {

/// One product record from one source. Attribute values follow the corpus
/// schema order; a missing value means the cell was empty in the input.
struct Offer {
  std::string id;         // globally unique, "<source>:<raw id>"
  std::string source;     // originating shop/table
  std::vector<std::optional<std::string>> attributes;  // parallel to Corpus::schema

  // Optional per-offer annotations carried by some multi-source corpora.
  std::optional<std::string> cluster_id;  // explicit product/entity id
  std::optional<std::string> split;       // "train" | "valid" | "test"

  bool operator==(const Offer&) const = default;
};

enum class PairLabel : int { non_match = 0, match = 1 };

struct PairAnnotation {
  std::string left_id;
  std::string right_id;
  PairLabel label = PairLabel::non_match;

  bool operator==(const PairAnnotation&) const = default;
};

struct PairSplits {
  std::vector<PairAnnotation> train;
  std::vector<PairAnnotation> valid;
  std::vector<PairAnnotation> test;

  bool operator==(const PairSplits&) const = default;
};

/// Immutable after load; safe to share read-only across threads.
class Corpus {
 public:
  std::vector<std::string> schema;  // attribute names, declared order
  std::vector<Offer> offers;        // input order, stable across runs
  PairSplits pairs;

  /// Rebuilds the id -> offer index and validates corpus invariants:
  /// unique offer ids, resolvable pair ids, split disjointness as id-pairs.
  void finalize();

  bool contains(const std::string& offer_id) const { return index_.count(offer_id) > 0; }
  const Offer& offer(const std::string& offer_id) const;
  size_t offer_index(const std::string& offer_id) const;

  bool operator==(const Corpus& other) const {
    return schema == other.schema && offers == other.offers && pairs == other.pairs;
  }

 private:
  std::unordered_map<std::string, size_t> index_;
};

/// Deepmatcher-style two-table corpus: tableA.csv, tableB.csv (first column
/// is the id), and train.csv/valid.csv/test.csv with ltable_id, rtable_id,
/// label columns. Offers get ids "A:<id>" / "B:<id>".
Corpus load_two_table_corpus(const std::filesystem::path& dir);

/// Multi-source corpus: one offers CSV with columns id, source, optional
/// cluster_id, optional split, plus the schema attributes; pair CSVs in
/// pairs_dir reference the raw ids (which must be globally unique).
Corpus load_multi_source_corpus(const std::filesystem::path& offers_path,
                                const std::filesystem::path& pairs_dir);

/// "[COL] <name> [VAL] <value>" segments in schema order, joined by single
/// spaces. Missing values are omitted entirely; values that are empty after
/// whitespace normalization are treated as missing. Never emits two
/// consecutive spaces.
std::string serialize_offer(const Corpus& corpus, const Offer& offer);
std::string serialize_offer(const std::vector<std::string>& schema, const Offer& offer);

/// Canonical single-file JSON cache (offers array + schema + pairs object).
void save_corpus_json(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus_json(const std::filesystem::path& path);

}  // namespace supmatch
