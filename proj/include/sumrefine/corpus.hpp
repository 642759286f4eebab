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

#ifndef SUMREFINE_CORPUS_HPP
#define SUMREFINE_CORPUS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sumrefine::corpus {

enum class DatasetTag { kCnnDailymail, kBillsum, kArxiv, kCustom };

std::string_view dataset_tag_name(DatasetTag tag);
std::optional<DatasetTag> parse_dataset_tag(std::string_view name);

struct Document {
  std::string id;
  std::string source;
  std::optional<std::string> reference_summary;
  DatasetTag dataset_tag = DatasetTag::kCustom;

  friend bool operator==(const Document&, const Document&) = default;
};

/// Word tokenizer shared by the judge heuristics, the metrics and the
/// summary-length constraint.
///
/// The input is decoded as UTF-8 and casefolded; tokens are maximal runs of
/// Unicode letters and digits. Every other code point is a boundary. Invalid
/// UTF-8 bytes are treated as boundaries.
std::vector<std::string> tokenize(std::string_view text);

/// Splits after '.', '!' or '?' when the terminator is followed by whitespace
/// and then an uppercase letter, or by whitespace up to the end of the text.
/// Abbreviations are not special-cased ("Dr. Smith" splits after "Dr.").
/// Returned sentences are trimmed and never empty.
std::vector<std::string> split_sentences(std::string_view text);

enum class CorpusFormat { kJsonl, kCsv };

std::optional<CorpusFormat> parse_corpus_format(std::string_view name);

/// Which record keys (JSONL) or header columns (CSV) carry which field.
struct FieldMap {
  std::string source = "article";
  std::string reference = "highlights";
  /// Empty: ids are synthesized from the 1-based record number.
  std::string id;

  /// Common distribution layouts of the bundled dataset tags.
  static FieldMap defaults_for(DatasetTag tag);
};

struct LoadOptions {
  CorpusFormat format = CorpusFormat::kJsonl;
  FieldMap fields;
  DatasetTag dataset_tag = DatasetTag::kCustom;
  /// Number of unparsable records tolerated before loading fails.
  std::size_t error_budget = 0;
};

struct LoadResult {
  std::vector<Document> documents;
  std::size_t skipped_empty = 0;
  std::size_t skipped_unparsable = 0;
  std::vector<std::string> warnings;
};

/// Reads a JSONL or CSV corpus, one Document per record in file order.
/// Records with an empty source are skipped with a warning.
/// Throws IngestionError for unreadable files, duplicate ids, or when the
/// number of unparsable records exceeds the error budget.
LoadResult load_corpus(const std::filesystem::path& path, const LoadOptions& options);

/// Same as load_corpus, over in-memory bytes.
LoadResult load_corpus_from_string(std::string_view bytes, const LoadOptions& options);

/// Parses RFC-4180 CSV into rows of fields. Throws IngestionError on an
/// unterminated quoted field.
std::vector<std::vector<std::string>> parse_csv(std::string_view bytes);

/// Deterministic subsample of at most `cap` documents, keeping corpus order.
/// The selection depends only on the seed and the corpus size.
std::vector<Document> sample_documents(const std::vector<Document>& docs, std::size_t cap,
                                       std::uint64_t seed);

}  // namespace sumrefine::corpus

#endif  // SUMREFINE_CORPUS_HPP
