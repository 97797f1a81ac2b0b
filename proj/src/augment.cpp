#include "supmatch/augment.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "supmatch/errors.hpp"

namespace supmatch {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::vector<std::string> split_ws(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_space(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool is_utf8_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

}  // namespace

const std::vector<AugmentKind>& all_augment_kinds() {
  static const std::vector<AugmentKind> kinds = {AugmentKind::Typo,       AugmentKind::Swap,
                                                 AugmentKind::Delete,     AugmentKind::SpanDelete,
                                                 AugmentKind::Synonym,    AugmentKind::Split};
  return kinds;
}

std::string augment_kind_name(AugmentKind kind) {
  switch (kind) {
    case AugmentKind::Typo: return "typo";
    case AugmentKind::Swap: return "swap";
    case AugmentKind::Delete: return "delete";
    case AugmentKind::SpanDelete: return "span_delete";
    case AugmentKind::Synonym: return "synonym";
    case AugmentKind::Split: return "split";
  }
  return "?";
}

std::optional<AugmentKind> augment_kind_from_name(const std::string& name) {
  for (AugmentKind kind : all_augment_kinds()) {
    if (augment_kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

const QwertyTable& default_qwerty_table() {
  static const QwertyTable table = [] {
    // Staggered layout: row1[i] sits between row2[i-1] and row2[i].
    const std::string rows[3] = {"qwertyuiop", "asdfghjkl", "zxcvbnm"};
    QwertyTable t;
    auto add = [&](char key, char neighbor) {
      std::string& entry = t[key];
      if (entry.find(neighbor) == std::string::npos) entry.push_back(neighbor);
    };
    for (int r = 0; r < 3; ++r) {
      const std::string& row = rows[r];
      for (size_t i = 0; i < row.size(); ++i) {
        if (i > 0) add(row[i], row[i - 1]);
        if (i + 1 < row.size()) add(row[i], row[i + 1]);
        if (r < 2) {
          const std::string& below = rows[r + 1];
          if (i > 0 && i - 1 < below.size()) add(row[i], below[i - 1]);
          if (i < below.size()) add(row[i], below[i]);
        }
        if (r > 0) {
          const std::string& above = rows[r - 1];
          if (i < above.size()) add(row[i], above[i]);
          if (i + 1 < above.size()) add(row[i], above[i + 1]);
        }
      }
    }
    return t;
  }();
  return table;
}

QwertyTable load_qwerty_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("missing file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw IngestionError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw IngestionError(path.string() + ": expected a JSON object");
  QwertyTable table;
  for (const auto& [key, value] : doc.items()) {
    if (key.size() != 1 || !value.is_string()) {
      throw IngestionError(path.string() + ": entries must map single characters to strings");
    }
    table[key[0]] = value.get<std::string>();
  }
  return table;
}

SynonymLexicon load_synonym_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("missing file: " + path.string());
  SynonymLexicon lexicon;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw IngestionError(path.string() + ": line " + std::to_string(line_no) +
                           ": expected 'word<TAB>synonym1,synonym2,...'");
    }
    std::string word = line.substr(0, tab);
    for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::vector<std::string> synonyms;
    std::string synonym;
    std::istringstream rest(line.substr(tab + 1));
    while (std::getline(rest, synonym, ',')) {
      if (!synonym.empty()) synonyms.push_back(synonym);
    }
    if (!synonyms.empty()) lexicon[word] = std::move(synonyms);
  }
  return lexicon;
}

std::optional<std::vector<AttributeSegment>> parse_serialized(const std::string& text) {
  const std::vector<std::string> tokens = split_ws(text);
  std::vector<AttributeSegment> segments;
  size_t i = 0;
  while (i < tokens.size()) {
    if (tokens[i] != "[COL]") return std::nullopt;
    ++i;
    AttributeSegment segment;
    std::vector<std::string> name_words;
    while (i < tokens.size() && tokens[i] != "[VAL]") {
      if (tokens[i] == "[COL]") return std::nullopt;
      name_words.push_back(tokens[i]);
      ++i;
    }
    if (i >= tokens.size() || name_words.empty()) return std::nullopt;  // no [VAL]
    ++i;  // consume [VAL]
    for (size_t w = 0; w < name_words.size(); ++w) {
      if (w) segment.name.push_back(' ');
      segment.name += name_words[w];
    }
    while (i < tokens.size() && tokens[i] != "[COL]") {
      if (tokens[i] == "[VAL]") return std::nullopt;
      segment.value_words.push_back(tokens[i]);
      ++i;
    }
    segments.push_back(std::move(segment));
  }
  return segments;
}

std::string render_serialized(const std::vector<AttributeSegment>& segments) {
  std::string out;
  for (const auto& segment : segments) {
    if (!out.empty()) out.push_back(' ');
    out += "[COL] ";
    out += segment.name;
    out += " [VAL]";
    for (const auto& word : segment.value_words) {
      out.push_back(' ');
      out += word;
    }
  }
  return out;
}

std::string typo_word(const std::string& word, const QwertyTable& table, Rng& rng) {
  if (word.empty()) return word;
  const size_t pos = rng.bounded(word.size());
  const char original = word[pos];
  const char key = static_cast<char>(std::tolower(static_cast<unsigned char>(original)));
  const auto it = table.find(key);
  if (it == table.end() || it->second.empty()) return word;
  char replacement = it->second[rng.bounded(it->second.size())];
  if (std::isupper(static_cast<unsigned char>(original))) {
    replacement = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement)));
  }
  std::string out = word;
  out[pos] = replacement;
  return out;
}

std::string synonym_word(const std::string& word, const SynonymLexicon& lexicon, Rng& rng) {
  std::string key = word;
  for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto it = lexicon.find(key);
  if (it == lexicon.end() || it->second.empty()) return word;
  return it->second[rng.bounded(it->second.size())];
}

std::string split_word(const std::string& word, Rng& rng) {
  std::vector<size_t> cuts;
  for (size_t i = 1; i < word.size(); ++i) {
    if (!is_utf8_continuation(static_cast<unsigned char>(word[i]))) cuts.push_back(i);
  }
  if (cuts.empty()) return word;
  const size_t cut = cuts[rng.bounded(cuts.size())];
  return word.substr(0, cut) + " " + word.substr(cut);
}

std::string augment_offer(const std::string& text, const AugmentationPolicy& policy, Rng& rng) {
  if (!policy.enabled) return text;
  auto parsed = parse_serialized(text);
  if (!parsed.has_value()) return text;
  std::vector<AttributeSegment>& segments = *parsed;

  std::vector<AugmentKind> enabled;
  for (AugmentKind kind : all_augment_kinds()) {
    if (!policy.kinds.count(kind)) continue;
    if (kind == AugmentKind::Synonym && policy.synonym_lexicon.empty()) continue;
    enabled.push_back(kind);
  }

  const size_t choice = rng.bounded(enabled.size() + 1);
  if (choice == enabled.size()) return text;  // identity option
  const AugmentKind kind = enabled[choice];

  // Pass 1: one Bernoulli per value word, left to right across segments.
  std::vector<std::vector<bool>> selected(segments.size());
  for (size_t s = 0; s < segments.size(); ++s) {
    selected[s].resize(segments[s].value_words.size());
    for (size_t w = 0; w < segments[s].value_words.size(); ++w) {
      selected[s][w] = rng.bernoulli(policy.word_prob);
    }
  }

  // Pass 2: apply the chosen transform, consuming parameter draws in order.
  for (size_t s = 0; s < segments.size(); ++s) {
    std::vector<std::string>& words = segments[s].value_words;
    switch (kind) {
      case AugmentKind::Typo:
        for (size_t w = 0; w < words.size(); ++w) {
          if (selected[s][w]) words[w] = typo_word(words[w], policy.qwerty, rng);
        }
        break;
      case AugmentKind::Swap:
        for (size_t w = 0; w < words.size(); ++w) {
          if (selected[s][w] && w + 1 < words.size()) std::swap(words[w], words[w + 1]);
        }
        break;
      case AugmentKind::Synonym:
        for (size_t w = 0; w < words.size(); ++w) {
          if (selected[s][w]) words[w] = synonym_word(words[w], policy.synonym_lexicon, rng);
        }
        break;
      case AugmentKind::Split:
        for (size_t w = 0; w < words.size(); ++w) {
          if (selected[s][w]) words[w] = split_word(words[w], rng);
        }
        break;
      case AugmentKind::Delete: {
        std::vector<std::string> kept;
        for (size_t w = 0; w < words.size(); ++w) {
          if (!selected[s][w]) kept.push_back(std::move(words[w]));
        }
        words = std::move(kept);
        break;
      }
      case AugmentKind::SpanDelete: {
        std::vector<bool> removed(words.size(), false);
        for (size_t w = 0; w < words.size(); ++w) {
          if (!selected[s][w] || removed[w]) continue;
          const size_t span = 1 + rng.bounded(3);
          for (size_t k = w; k < words.size() && k < w + span; ++k) removed[k] = true;
        }
        std::vector<std::string> kept;
        for (size_t w = 0; w < words.size(); ++w) {
          if (!removed[w]) kept.push_back(std::move(words[w]));
        }
        words = std::move(kept);
        break;
      }
    }
  }
  return render_serialized(segments);
}

}  // namespace supmatch
