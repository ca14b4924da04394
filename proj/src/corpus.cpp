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

#include "muse/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "muse/error.hpp"
#include "muse/text.hpp"

namespace muse::corpus {

using nlohmann::json;

std::string PaperRecord::document_text() const {
  std::string text = normalize_text(title);
  std::string abs = normalize_text(abstract);
  if (!abs.empty()) {
    // The period keeps phrases from spanning title and abstract.
    text += " . ";
    text += abs;
  }
  return text;
}

int64_t PaperRecord::total_citations() const {
  int64_t total = 0;
  for (const auto& [_, c] : citations_by_year) total += c;
  return total;
}

Corpus::Corpus(std::vector<PaperRecord> records, int cutoff_year,
               std::string source_label)
    : records_(std::move(records)),
      cutoff_year_(cutoff_year),
      source_label_(std::move(source_label)) {
  std::sort(records_.begin(), records_.end(),
            [](const PaperRecord& a, const PaperRecord& b) {
              if (a.year != b.year) return a.year < b.year;
              return a.paper_id < b.paper_id;
            });
  for (size_t i = 0; i < records_.size(); ++i) {
    if (!index_.emplace(records_[i].paper_id, i).second) {
      throw ValidationError("duplicate paper_id: " + records_[i].paper_id);
    }
  }
}

const PaperRecord* Corpus::find(const std::string& paper_id) const {
  auto it = index_.find(paper_id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

namespace {

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : trim(s)) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = true;
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

bool parse_year_key(const std::string& key, int& year) {
  if (key.empty() || key.size() > 6) return false;
  int v = 0;
  for (char c : key) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  year = v;
  return true;
}

}  // namespace

bool parse_record_line(const std::string& line, PaperRecord& out,
                       IngestStats& stats) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    ++stats.malformed;
    return false;
  }
  PaperRecord r;
  auto id = j.find("paper_id");
  auto title = j.find("title");
  auto year = j.find("year");
  if (id == j.end() || title == j.end() || year == j.end() || id->is_null() ||
      title->is_null() || year->is_null()) {
    ++stats.missing_required;
    return false;
  }
  if (!id->is_string() || !title->is_string() || !year->is_number_integer()) {
    ++stats.malformed;
    return false;
  }
  r.paper_id = id->get<std::string>();
  r.title = collapse_spaces(title->get<std::string>());
  r.year = year->get<int>();
  if (r.paper_id.empty() || normalize_text(r.title).empty()) {
    ++stats.missing_required;
    return false;
  }
  if (auto a = j.find("abstract"); a != j.end() && !a->is_null()) {
    if (!a->is_string()) {
      ++stats.malformed;
      return false;
    }
    r.abstract = collapse_spaces(a->get<std::string>());
  }
  auto cites = j.find("citations_by_year");
  if (cites == j.end() || cites->is_null()) {
    r.citations_missing = true;
  } else {
    if (!cites->is_object()) {
      ++stats.malformed;
      return false;
    }
    for (const auto& [key, value] : cites->items()) {
      int y = 0;
      if (!parse_year_key(key, y) || !value.is_number_integer() ||
          value.get<int64_t>() < 0) {
        ++stats.malformed;
        return false;
      }
      // Citations dated before publication (preprint era) count toward the
      // publication year.
      r.citations_by_year[std::max(y, r.year)] += value.get<int64_t>();
    }
  }
  out = std::move(r);
  return true;
}

ParseResult parse_corpus_text(const std::string& text,
                              std::optional<int> cutoff_year,
                              const std::string& source_label) {
  IngestStats stats;
  std::vector<PaperRecord> parsed;
  std::optional<int> header_cutoff;
  std::string header_label;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      first = false;
      continue;
    }
    if (first) {
      first = false;
      json h = json::parse(line, nullptr, false);
      if (!h.is_discarded() && h.is_object() && h.contains("muse_corpus")) {
        if (h.value("muse_corpus", 0) != 1) {
          throw IngestError("unsupported corpus file version");
        }
        if (h.contains("cutoff_year")) header_cutoff = h["cutoff_year"].get<int>();
        header_label = h.value("source_label", "");
        continue;
      }
    }
    ++stats.lines;
    PaperRecord r;
    if (parse_record_line(line, r, stats)) parsed.push_back(std::move(r));
  }

  int cutoff = 0;
  if (cutoff_year) {
    cutoff = *cutoff_year;
  } else if (header_cutoff) {
    cutoff = *header_cutoff;
  } else {
    cutoff = kEarliestYear;
    for (const auto& r : parsed) cutoff = std::max(cutoff, r.year);
  }

  std::vector<PaperRecord> kept;
  std::unordered_set<std::string> seen;
  for (auto& r : parsed) {
    if (r.year < kEarliestYear || r.year > cutoff) {
      ++stats.out_of_range;
      continue;
    }
    if (!seen.insert(r.paper_id).second) {
      ++stats.duplicates;
      continue;
    }
    for (auto it = r.citations_by_year.begin();
         it != r.citations_by_year.end();) {
      it = it->first > cutoff ? r.citations_by_year.erase(it) : std::next(it);
    }
    if (r.citations_missing) ++stats.missing_citations;
    kept.push_back(std::move(r));
  }
  stats.accepted = kept.size();
  std::string label = source_label.empty() ? header_label : source_label;
  return {Corpus(std::move(kept), cutoff, label), stats};
}

ParseResult parse_corpus(const std::string& path,
                         std::optional<int> cutoff_year) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read corpus file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IngestError("read error: " + path);
  return parse_corpus_text(ss.str(), cutoff_year, path);
}

json record_to_json(const PaperRecord& r) {
  json j = {{"paper_id", r.paper_id},
            {"title", r.title},
            {"abstract", r.abstract},
            {"year", r.year}};
  if (r.citations_missing) {
    j["citations_by_year"] = nullptr;
  } else {
    json c = json::object();
    for (const auto& [y, n] : r.citations_by_year) c[std::to_string(y)] = n;
    j["citations_by_year"] = c;
  }
  return j;
}

PaperRecord record_from_json(const json& j) {
  PaperRecord r;
  IngestStats stats;
  if (!parse_record_line(j.dump(), r, stats)) {
    throw FormatError("invalid paper record: " + j.dump().substr(0, 200));
  }
  return r;
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  json header = {{"muse_corpus", 1},
                 {"cutoff_year", corpus.cutoff_year()},
                 {"source_label", corpus.source_label()}};
  out += header.dump() + "\n";
  for (const auto& r : corpus.records()) out += record_to_json(r).dump() + "\n";
  return out;
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  write_file_atomic(path, to_jsonl(corpus));
}

}  // namespace muse::corpus
