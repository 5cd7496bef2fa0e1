// Copyright 2026 The adtheme Authors
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

#pragma once

#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "adtheme/util/error.hpp"

namespace adtheme::text {

// Maps UTF-8 text onto ASCII: compatibility decomposition (NFKD), combining
// marks removed, and every remaining non-ASCII code point replaced by one
// space. "café" -> "cafe", mathematical bold "𝗕𝗼𝗹𝗱" -> "Bold", emoji -> " ".
// Ill-formed UTF-8 bytes are treated like unmapped characters.
inline std::string transliterate(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkd = icu::Normalizer2::getNFKDInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFKD unavailable: ") + u_errorName(status));

  const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  icu::UnicodeString pending;

  auto flush = [&] {
    if (pending.isEmpty()) return;
    UErrorCode st = U_ZERO_ERROR;
    const icu::UnicodeString decomposed = nfkd->normalize(pending, st);
    if (U_FAILURE(st)) throw Error(std::string("ICU normalisation failed: ") + u_errorName(st));
    for (int32_t k = 0; k < decomposed.length();) {
      const UChar32 cp = decomposed.char32At(k);
      k += U16_LENGTH(cp);
      if (cp < 0x80) {
        out += static_cast<char>(cp);
      } else if ((U_GET_GC_MASK(cp) & U_GC_M_MASK) == 0) {
        out += ' ';
      }
    }
    pending.remove();
  };

  while (i < length) {
    const int32_t start = i;
    UChar32 cp = 0;
    U8_NEXT(bytes, i, length, cp);
    if (cp < 0) {
      flush();
      out += ' ';
      continue;
    }
    if (cp < 0x80 && pending.isEmpty()) {
      out += static_cast<char>(bytes[start]);
      continue;
    }
    pending.append(cp);
    // Flush at ASCII boundaries so long runs of ASCII bypass ICU.
    if (cp < 0x80) flush();
  }
  flush();
  return out;
}

}  // namespace adtheme::text
