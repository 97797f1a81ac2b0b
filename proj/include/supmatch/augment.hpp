#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "supmatch/rng.hpp"

namespace supmatch {

enum class AugmentKind { Typo, Swap, Delete, SpanDelete, Synonym, Split };

/// Canonical kind order used for the uniform kind draw.
const std::vector<AugmentKind>& all_augment_kinds();
std::string augment_kind_name(AugmentKind kind);
std::optional<AugmentKind> augment_kind_from_name(const std::string& name);

using QwertyTable = std::map<char, std::string>;
using SynonymLexicon = std::map<std::string, std::vector<std::string>>;

/// Lowercase letter -> adjacent letters on a staggered QWERTY layout.
const QwertyTable& default_qwerty_table();
/// JSON object {"t": "ryfg", ...}; keys are single characters.
QwertyTable load_qwerty_table(const std::filesystem::path& path);

/// Lines "word<TAB>synonym1,synonym2,...", UTF-8. Keys are lowercased.
SynonymLexicon load_synonym_lexicon(const std::filesystem::path& path);

struct AugmentationPolicy {
  bool enabled = true;
  double word_prob = 0.10;
  std::set<AugmentKind> kinds = {AugmentKind::Typo,     AugmentKind::Swap,
                                 AugmentKind::Delete,   AugmentKind::SpanDelete,
                                 AugmentKind::Synonym,  AugmentKind::Split};
  SynonymLexicon synonym_lexicon;  // empty lexicon disables the Synonym kind
  QwertyTable qwerty = default_qwerty_table();
};

/// One "[COL] name [VAL] w1 w2 ..." segment of a serialized offer.
struct AttributeSegment {
  std::string name;
  std::vector<std::string> value_words;
};

/// Parses serialize_offer output; nullopt for texts that do not follow the
/// tagged format (augment_offer returns those unchanged).
std::optional<std::vector<AttributeSegment>> parse_serialized(const std::string& text);
std::string render_serialized(const std::vector<AttributeSegment>& segments);

/// Word-level transforms. Draw orders:
///   typo_word:    one position draw over all characters; one replacement
///                 draw only when the (lowercased) character has adjacency
///                 entries, case of the original character is preserved.
///   synonym_word: one draw over the lexicon entry of the lowercased word;
///                 no draw when the word is absent.
///   split_word:   one draw over the interior byte positions that do not
///                 cut a multi-byte UTF-8 character; no draw when none.
std::string typo_word(const std::string& word, const QwertyTable& table, Rng& rng);
std::string synonym_word(const std::string& word, const SynonymLexicon& lexicon, Rng& rng);
std::string split_word(const std::string& word, Rng& rng);

/// Applies one randomly chosen augmentation to the value words of a
/// serialized offer. Structural tokens and attribute names are never
/// touched. Draw order: one bounded draw over (enabled kinds + identity) in
/// canonical kind order with identity last; if not identity, one Bernoulli
/// per value word left to right across segments; then per-word parameter
/// draws while applying transforms left to right. Swap exchanges a word
/// with its right neighbour inside the same attribute value (no-op on the
/// last word); Delete removes the word; SpanDelete removes the word plus up
/// to two followers within the value (span length uniform in {1,2,3}, words
/// already removed by an earlier span are skipped without a draw).
std::string augment_offer(const std::string& text, const AugmentationPolicy& policy, Rng& rng);

}  // namespace supmatch
