// Copyright 2026 The Muse Authors
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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace muse::corpus {

// Per-year citation counts, year -> count.
using YearCounts = std::map<int, int64_t>;

inline constexpr int kEarliestYear = 1665;

struct PaperRecord {
  std::string paper_id;
  std::string title;     // whitespace-trimmed, original casing (for prompts)
  std::string abstract;  // may be empty
  int year = 0;
  YearCounts citations_by_year;
  // Set when the source line carried no citation series.
  bool citations_missing = false;

  // Normalized title and abstract joined with a phrase break, the text that
  // concept extraction and matching run over.
  std::string document_text() const;
  int64_t total_citations() const;

  bool operator==(const PaperRecord&) const = default;
};

struct IngestStats {
  size_t lines = 0;
  size_t accepted = 0;
  size_t malformed = 0;        // not JSON, or wrong field types
  size_t missing_required = 0;  // no paper_id / title / year
  size_t out_of_range = 0;     // year before 1665 or after the cutoff
  size_t duplicates = 0;       // repeated paper_id, later occurrence dropped
  size_t missing_citations = 0;

  size_t skipped() const {
    return malformed + missing_required + out_of_range + duplicates;
  }
};

class Corpus {
 public:
  Corpus() = default;
  // Sorts by (year, paper_id); throws ValidationError on duplicate ids.
  Corpus(std::vector<PaperRecord> records, int cutoff_year,
         std::string source_label);

  const std::vector<PaperRecord>& records() const { return records_; }
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  int cutoff_year() const { return cutoff_year_; }
  const std::string& source_label() const { return source_label_; }

  // Nullptr when absent.
  const PaperRecord* find(const std::string& paper_id) const;

  bool operator==(const Corpus&) const = default;

 private:
  std::vector<PaperRecord> records_;
  int cutoff_year_ = 0;
  std::string source_label_;
  std::unordered_map<std::string, size_t> index_;
};

struct ParseResult {
  Corpus corpus;
  IngestStats stats;
};

// Parses one JSONL record; returns false (and bumps the matching tally) when
// the line is rejected. Year range is checked later, against the cutoff.
bool parse_record_line(const std::string& line, PaperRecord& out,
                       IngestStats& stats);

// Line-delimited JSON with fields paper_id, title, abstract, year,
// citations_by_year. Unreadable file -> IngestError; bad lines are skipped
// and tallied.
// A first line of the form {"muse_corpus":1,"cutoff_year":Y,...} (written by
// write_corpus) supplies the cutoff when none is given; with neither, the
// newest record year is used.
ParseResult parse_corpus(const std::string& path,
                         std::optional<int> cutoff_year = std::nullopt);
ParseResult parse_corpus_text(const std::string& text,
                              std::optional<int> cutoff_year,
                              const std::string& source_label);

nlohmann::json record_to_json(const PaperRecord& r);
// FormatError when required fields are missing or mistyped.
PaperRecord record_from_json(const nlohmann::json& j);

// Writes the canonical JSONL form (sorted, one record per line). Parsing the
// output with the same cutoff reproduces the corpus exactly.
std::string to_jsonl(const Corpus& corpus);
void write_corpus(const Corpus& corpus, const std::string& path);

}  // namespace muse::corpus
