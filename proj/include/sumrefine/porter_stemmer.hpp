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

#ifndef SUMREFINE_PORTER_STEMMER_HPP
#define SUMREFINE_PORTER_STEMMER_HPP

#include <string>
#include <string_view>

namespace sumrefine::metrics {

/// Porter stem of a lower-case ASCII word. Words containing anything other
/// than a-z are returned unchanged, as are words of two letters or fewer.
std::string porter_stem(std::string_view word);

}  // namespace sumrefine::metrics

#endif  // SUMREFINE_PORTER_STEMMER_HPP
