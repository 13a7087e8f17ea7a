// Copyright 2026 The SRT Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SRT_TEXT_H_
#define SRT_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace srt {

// Canonical text form shared by every lexical comparison in the toolkit.
//
// Applies, in order: Unicode NFC, full lowercase, replacement of every
// punctuation or symbol code point (general categories P* and S*) by a space,
// whitespace collapsing and trimming, and removal of the whole-token English
// articles "a", "an" and "the". Invalid UTF-8 sequences are replaced by
// U+FFFD before processing. The function is idempotent.
std::string NormalizeText(std::string_view raw);

// Splits already-normalized text on single spaces. Empty input yields no
// tokens; duplicates are preserved.
std::vector<std::string> Tokenize(std::string_view normalized);

// Shorthand for Tokenize(NormalizeText(raw)).
std::vector<std::string> NormalizedTokens(std::string_view raw);

// Decodes UTF-8 into code points (invalid bytes map to U+FFFD).
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view text);

// Stable 64-bit FNV-1a hash. Used wherever hashes end up in output files or
// feature buckets, so it must not depend on the standard library
// implementation.
uint64_t Fnv1a64(std::string_view bytes);

// Trims ASCII whitespace from both ends.
std::string_view TrimAscii(std::string_view text);

}  // namespace srt

#endif  // SRT_TEXT_H_
