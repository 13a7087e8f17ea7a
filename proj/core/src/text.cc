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

#include "srt/text.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace srt {
namespace {

const icu::Normalizer2& Nfc() {
  static const icu::Normalizer2* const nfc = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
      throw std::runtime_error("ICU NFC normalizer unavailable");
    }
    return instance;
  }();
  return *nfc;
}

icu::UnicodeString ToNfc(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = Nfc().normalize(text, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  return out;
}

bool IsSeparator(UChar32 cp) {
  if (u_isUWhiteSpace(cp)) return true;
  const uint32_t mask = U_GET_GC_MASK(cp);
  return (mask & (U_GC_P_MASK | U_GC_S_MASK | U_GC_CC_MASK)) != 0;
}

bool IsArticle(std::string_view token) {
  return token == "a" || token == "an" || token == "the";
}

}  // namespace

std::string NormalizeText(std::string_view raw) {
  if (raw.empty()) return {};
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  text = ToNfc(text);
  text.toLower(icu::Locale::getRoot());
  text = ToNfc(text);

  std::string out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    if (!IsArticle(token)) {
      if (!out.empty()) out.push_back(' ');
      out += token;
    }
    token.clear();
  };

  const int32_t length = text.length();
  for (int32_t i = 0; i < length;) {
    const UChar32 cp = text.char32At(i);
    i += U16_LENGTH(cp);
    if (IsSeparator(cp)) {
      flush();
      continue;
    }
    icu::UnicodeString(cp).toUTF8String(token);
  }
  flush();
  return out;
}

std::vector<std::string> Tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= normalized.size()) {
    std::size_t end = normalized.find(' ', start);
    if (end == std::string_view::npos) end = normalized.size();
    if (end > start) tokens.emplace_back(normalized.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

std::vector<std::string> NormalizedTokens(std::string_view raw) {
  return Tokenize(NormalizeText(raw));
}

std::u32string DecodeUtf8(std::string_view text) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    const UChar32 cp = s.char32At(i);
    out.push_back(static_cast<char32_t>(cp));
    i += U16_LENGTH(cp);
  }
  return out;
}

std::string EncodeUtf8(std::u32string_view text) {
  icu::UnicodeString s;
  for (char32_t cp : text) s.append(static_cast<UChar32>(cp));
  std::string out;
  s.toUTF8String(out);
  return out;
}

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string_view TrimAscii(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const std::size_t begin = text.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  const std::size_t end = text.find_last_not_of(kSpace);
  return text.substr(begin, end - begin + 1);
}

}  // namespace srt
