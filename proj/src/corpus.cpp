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

#include "sumrefine/corpus.hpp"

#include <locale.h>
#include <wctype.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "sumrefine/error.hpp"
#include "sumrefine/text.hpp"

namespace sumrefine::corpus {
namespace {

using json = nlohmann::json;

// Process-wide UTF-8 ctype locale; the global C locale is never touched.
locale_t utf8_locale() {
  static const locale_t loc = [] {
    locale_t l = newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(nullptr));
    if (l == static_cast<locale_t>(nullptr)) {
      l = newlocale(LC_CTYPE_MASK, "en_US.UTF-8", static_cast<locale_t>(nullptr));
    }
    return l;
  }();
  return loc;
}

bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  locale_t loc = utf8_locale();
  return loc != static_cast<locale_t>(nullptr) && iswalnum_l(static_cast<wint_t>(cp), loc) != 0;
}

char32_t fold_case(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'A' && cp <= 'Z') ? cp + ('a' - 'A') : cp;
  }
  locale_t loc = utf8_locale();
  if (loc == static_cast<locale_t>(nullptr)) return cp;
  return static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), loc));
}

bool is_upper(char32_t cp) {
  if (cp < 0x80) return cp >= 'A' && cp <= 'Z';
  locale_t loc = utf8_locale();
  return loc != static_cast<locale_t>(nullptr) && iswupper_l(static_cast<wint_t>(cp), loc) != 0;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return is_space(c); });
}

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::vector<CsvRecord> parse_csv_records(std::string_view bytes) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t quote_line = 0;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&](std::size_t next_line) {
    end_field();
    // A lone empty field is a blank line, not a record.
    if (!(current.fields.size() == 1 && current.fields[0].empty())) {
      records.push_back(std::move(current));
    }
    current = CsvRecord{};
    current.line = next_line;
  };

  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const char c = bytes[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < bytes.size() && bytes[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started || field.empty()) {
          in_quotes = true;
          quote_line = line;
          field_started = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < bytes.size() && bytes[i + 1] == '\n') break;
        ++line;
        end_record(line);
        break;
      case '\n':
        ++line;
        end_record(line);
        break;
      default:
        field.push_back(c);
        field_started = true;
        break;
    }
  }
  if (in_quotes) throw IngestionError("unterminated quoted CSV field", quote_line);
  if (!field.empty() || field_started || !current.fields.empty()) end_record(line);
  return records;
}

std::optional<std::string> json_text_field(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw std::invalid_argument("field '" + key + "' is not a string");
}

class Collector {
 public:
  Collector(const LoadOptions& options) : options_(options) {}

  // Records a record that failed to parse; throws once the budget is spent.
  void unparsable(std::size_t line, const std::string& why) {
    ++result_.skipped_unparsable;
    if (result_.skipped_unparsable > options_.error_budget) {
      throw IngestionError("unparsable record: " + why, line);
    }
    result_.warnings.push_back("line " + std::to_string(line) + ": skipped unparsable record: " +
                               why);
  }

  void add(std::size_t line, std::optional<std::string> id, std::optional<std::string> source,
           std::optional<std::string> reference) {
    if (!source || is_blank(*source)) {
      ++result_.skipped_empty;
      result_.warnings.push_back("line " + std::to_string(line) + ": skipped record with empty '" +
                                 options_.fields.source + "'");
      return;
    }
    Document doc;
    doc.id = id ? std::move(*id) : std::to_string(line);
    if (!ids_.insert(doc.id).second) {
      throw IngestionError("duplicate document id '" + doc.id + "'", line);
    }
    doc.source = std::move(*source);
    if (reference && !is_blank(*reference)) doc.reference_summary = std::move(*reference);
    doc.dataset_tag = options_.dataset_tag;
    result_.documents.push_back(std::move(doc));
  }

  LoadResult take() { return std::move(result_); }

 private:
  const LoadOptions& options_;
  LoadResult result_;
  std::unordered_set<std::string> ids_;
};

LoadResult load_jsonl(std::string_view bytes, const LoadOptions& options) {
  Collector out(options);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) nl = bytes.size();
    std::string_view line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (is_blank(line)) continue;

    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      out.unparsable(line_no, "not a JSON object");
      continue;
    }
    try {
      std::optional<std::string> id;
      if (!options.fields.id.empty()) id = json_text_field(obj, options.fields.id);
      out.add(line_no, std::move(id), json_text_field(obj, options.fields.source),
              options.fields.reference.empty() ? std::nullopt
                                               : json_text_field(obj, options.fields.reference));
    } catch (const std::invalid_argument& e) {
      out.unparsable(line_no, e.what());
    }
  }
  return out.take();
}

LoadResult load_csv(std::string_view bytes, const LoadOptions& options) {
  Collector out(options);
  std::vector<CsvRecord> records = parse_csv_records(bytes);
  if (records.empty()) throw IngestionError("CSV corpus has no header row", 1);

  const std::vector<std::string>& header = records.front().fields;
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto source_col = column(options.fields.source);
  if (!source_col) {
    throw IngestionError("CSV header lacks source column '" + options.fields.source + "'", 1);
  }
  const auto reference_col = column(options.fields.reference);
  const auto id_col = column(options.fields.id);
  if (!options.fields.id.empty() && !id_col) {
    throw IngestionError("CSV header lacks id column '" + options.fields.id + "'", 1);
  }

  for (std::size_t r = 1; r < records.size(); ++r) {
    CsvRecord& rec = records[r];
    if (rec.fields.size() != header.size()) {
      out.unparsable(rec.line, "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(rec.fields.size()));
      continue;
    }
    std::optional<std::string> id;
    if (id_col) id = rec.fields[*id_col];
    std::optional<std::string> reference;
    if (reference_col) reference = rec.fields[*reference_col];
    out.add(rec.line, std::move(id), rec.fields[*source_col], std::move(reference));
  }
  return out.take();
}

}  // namespace

std::string_view dataset_tag_name(DatasetTag tag) {
  switch (tag) {
    case DatasetTag::kCnnDailymail:
      return "cnn_dailymail";
    case DatasetTag::kBillsum:
      return "billsum";
    case DatasetTag::kArxiv:
      return "arxiv";
    case DatasetTag::kCustom:
      break;
  }
  return "custom";
}

std::optional<DatasetTag> parse_dataset_tag(std::string_view name) {
  for (DatasetTag tag :
       {DatasetTag::kCnnDailymail, DatasetTag::kBillsum, DatasetTag::kArxiv, DatasetTag::kCustom}) {
    if (dataset_tag_name(tag) == name) return tag;
  }
  return std::nullopt;
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "csv") return CorpusFormat::kCsv;
  return std::nullopt;
}

FieldMap FieldMap::defaults_for(DatasetTag tag) {
  switch (tag) {
    case DatasetTag::kCnnDailymail:
      return {"article", "highlights", "id"};
    case DatasetTag::kBillsum:
      return {"text", "summary", ""};
    case DatasetTag::kArxiv:
      return {"article", "abstract", ""};
    case DatasetTag::kCustom:
      break;
  }
  return {"source", "reference", ""};
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  text::for_each_code_point(text, [&](char32_t cp, bool valid) {
    if (valid && is_word_char(cp)) {
      text::append_utf8(current, fold_case(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  });
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  auto emit = [&](std::string_view piece) {
    std::string trimmed = text::trim(piece);
    if (!trimmed.empty()) sentences.push_back(std::move(trimmed));
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (i + 1 >= text.size() || !is_space(text[i + 1])) continue;
    std::size_t next = i + 1;
    while (next < text.size() && is_space(text[next])) ++next;
    bool boundary = next == text.size();
    if (!boundary) {
      char32_t cp = 0;
      if (text::decode_one(text.substr(next), cp) > 0) boundary = is_upper(cp);
    }
    if (!boundary) continue;
    emit(text.substr(start, i + 1 - start));
    start = next;
    i = next == 0 ? 0 : next - 1;
  }
  if (start < text.size()) emit(text.substr(start));
  return sentences;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view bytes) {
  std::vector<std::vector<std::string>> rows;
  for (CsvRecord& rec : parse_csv_records(bytes)) rows.push_back(std::move(rec.fields));
  return rows;
}

LoadResult load_corpus_from_string(std::string_view bytes, const LoadOptions& options) {
  if (options.fields.source.empty()) throw IngestionError("field map has no source field", 0);
  switch (options.format) {
    case CorpusFormat::kJsonl:
      return load_jsonl(bytes, options);
    case CorpusFormat::kCsv:
      return load_csv(bytes, options);
  }
  throw IngestionError("unknown corpus format", 0);
}

LoadResult load_corpus(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot read corpus file " + path.string(), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IngestionError("error reading corpus file " + path.string(), 0);
  return load_corpus_from_string(buf.str(), options);
}

std::vector<Document> sample_documents(const std::vector<Document>& docs, std::size_t cap,
                                       std::uint64_t seed) {
  if (cap >= docs.size()) return docs;
  // Rank documents by a per-position draw from a fixed engine; the engine's
  // output sequence is fully specified, unlike the std distributions.
  std::mt19937_64 engine(seed);
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  keyed.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) keyed.emplace_back(engine(), i);
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(cap), keyed.end());
  std::vector<std::size_t> picked;
  picked.reserve(cap);
  for (std::size_t i = 0; i < cap; ++i) picked.push_back(keyed[i].second);
  std::sort(picked.begin(), picked.end());

  std::vector<Document> out;
  out.reserve(cap);
  for (std::size_t i : picked) out.push_back(docs[i]);
  return out;
}

}  // namespace sumrefine::corpus
