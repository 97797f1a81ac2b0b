#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace supmatch {

struct TokenizerConfig {
  int vocab_size = 32768;  // must be > 3
  int max_tokens = 128;

  static constexpr int kPadId = 0;
  static constexpr int kColId = 1;
  static constexpr int kValId = 2;
};

uint64_t fnv1a64(const std::string& token);

/// Lowercases, splits on whitespace and punctuation boundaries, maps the
/// structural "[COL]"/"[VAL]" tokens to their reserved ids and every other
/// token to 3 + (FNV-1a-64(token) mod (V-3)), then truncates to max_tokens.
/// Bytes >= 0x80 are treated as word characters so multi-byte UTF-8 stays
/// inside one token; every other non-alphanumeric, non-space byte forms a
/// single-character token.
std::vector<int> tokenize(const std::string& text, const TokenizerConfig& cfg);

}  // namespace supmatch
