#include "supmatch/tokenizer.hpp"

#include <cctype>

#include "supmatch/errors.hpp"

namespace supmatch {

uint64_t fnv1a64(const std::string& token) {
  uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : token) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }
bool is_space_char(unsigned char c) { return std::isspace(c); }

}  // namespace

std::vector<int> tokenize(const std::string& text, const TokenizerConfig& cfg) {
  if (cfg.vocab_size <= 3) throw ParameterError("vocab_size must be > 3");
  const uint64_t table = static_cast<uint64_t>(cfg.vocab_size) - 3;

  std::vector<int> ids;
  auto push_token = [&](const std::string& token) {
    if (static_cast<int>(ids.size()) >= cfg.max_tokens) return;
    ids.push_back(3 + static_cast<int>(fnv1a64(token) % table));
  };

  size_t i = 0;
  const size_t n = text.size();
  while (i < n && static_cast<int>(ids.size()) < cfg.max_tokens) {
    const unsigned char c = text[i];
    if (is_space_char(c)) {
      ++i;
      continue;
    }
    // Structural tokens keep their brackets and are matched case-sensitively.
    if (c == '[') {
      if (text.compare(i, 5, "[COL]") == 0) {
        ids.push_back(TokenizerConfig::kColId);
        i += 5;
        continue;
      }
      if (text.compare(i, 5, "[VAL]") == 0) {
        ids.push_back(TokenizerConfig::kValId);
        i += 5;
        continue;
      }
    }
    if (is_word_char(c)) {
      std::string token;
      while (i < n && is_word_char(static_cast<unsigned char>(text[i]))) {
        token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
        ++i;
      }
      push_token(token);
    } else {
      push_token(std::string(1, static_cast<char>(c)));
      ++i;
    }
  }
  return ids;
}

}  // namespace supmatch
