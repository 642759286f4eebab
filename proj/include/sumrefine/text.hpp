// Copyright 2026 The sumrefine Authors
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

// Small UTF-8 and string helpers shared across modules.

#ifndef SUMREFINE_TEXT_HPP
#define SUMREFINE_TEXT_HPP

#include <cstddef>
#include <string>
#include <string_view>

namespace sumrefine::text {

/// Decodes one code point from the front of `s`. Returns the number of bytes
/// consumed (0 for empty input). On malformed input returns 1 and leaves `cp`
/// as the replacement character U+FFFD.
std::size_t decode_one(std::string_view s, char32_t& cp);

void append_utf8(std::string& out, char32_t cp);

/// Calls fn(code_point, valid) for each decoded code point.
template <typename Fn>
void for_each_code_point(std::string_view s, Fn&& fn) {
  while (!s.empty()) {
    char32_t cp = 0;
    std::size_t n = decode_one(s, cp);
    fn(cp, cp != U'\uFFFD' || s.substr(0, n) == "\xEF\xBF\xBD");
    s.remove_prefix(n);
  }
}

/// Strips ASCII whitespace from both ends.
std::string trim(std::string_view s);

std::string to_lower_ascii(std::string_view s);

bool iequals_ascii(std::string_view a, std::string_view b);

}  // namespace sumrefine::text

#endif  // SUMREFINE_TEXT_HPP
