#pragma once

#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utypes.h>

#include "translit/error.hpp"
#include "translit/utf8.hpp"

namespace translit {

// Unicode normalization, backed by ICU. Mapping tables and romanizer
// input are matched after NFC so that composed and decomposed
// serializations of the same grapheme are identical.

namespace unicode_detail {

inline const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr)
    throw data_error("ICU NFC normalizer unavailable");
  return *n;
}

inline const icu::Normalizer2& nfd_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status) || n == nullptr)
    throw data_error("ICU NFD normalizer unavailable");
  return *n;
}

inline std::u32string normalize(std::u32string_view text, const icu::Normalizer2& norm) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(text.data()), static_cast<int32_t>(text.size()));
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString result = norm.normalize(u, status);
  if (U_FAILURE(status)) throw data_error("Unicode normalization failed");
  std::u32string out(static_cast<size_t>(result.countChar32()), U'\0');
  result.toUTF32(reinterpret_cast<UChar32*>(out.data()), static_cast<int32_t>(out.size()),
                 status);
  if (U_FAILURE(status)) throw data_error("Unicode normalization failed");
  return out;
}

}  // namespace unicode_detail

inline std::u32string nfc(std::u32string_view text) {
  return unicode_detail::normalize(text, unicode_detail::nfc_instance());
}

inline std::u32string nfd(std::u32string_view text) {
  return unicode_detail::normalize(text, unicode_detail::nfd_instance());
}

inline std::string nfc_utf8(std::string_view text) {
  return encode_utf8(nfc(decode_utf8(text)));
}

inline bool is_combining_mark(char32_t cp) {
  int8_t t = u_charType(static_cast<UChar32>(cp));
  return t == U_NON_SPACING_MARK || t == U_ENCLOSING_MARK || t == U_COMBINING_SPACING_MARK;
}

// Canonical decomposition, drop combining marks, recompose.
// Turns "tā" into "ta" and leaves plain ASCII untouched.
inline std::u32string strip_diacritics(std::u32string_view text) {
  std::u32string decomposed = nfd(text);
  std::u32string kept;
  kept.reserve(decomposed.size());
  for (char32_t cp : decomposed)
    if (!is_combining_mark(cp)) kept.push_back(cp);
  return nfc(kept);
}

inline std::string strip_diacritics_utf8(std::string_view text) {
  return encode_utf8(strip_diacritics(decode_utf8(text)));
}

inline bool is_ascii(char32_t cp) { return cp < 0x80; }

}  // namespace translit
