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

#include "muse/profiles.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "muse/error.hpp"
#include "muse/matcher.hpp"
#include "muse/prompts.hpp"
#include "muse/text.hpp"

namespace muse::profiles {

using nlohmann::json;

namespace {

int newest_year(const std::vector<corpus::PaperRecord>& papers) {
  int newest = papers.front().year;
  for (const auto& p : papers) newest = std::max(newest, p.year);
  return newest;
}

double jaccard_distance(const std::set<std::string>& a,
                        const std::set<std::string>& b) {
  size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  const size_t uni = a.size() + b.size() - common;
  return 1.0 - static_cast<double>(common) / static_cast<double>(uni);
}

}  // namespace

std::vector<const corpus::PaperRecord*> ResearcherProfile::window_papers() const {
  std::vector<const corpus::PaperRecord*> out;
  if (papers.empty()) return out;
  const int newest = newest_year(papers);
  for (const auto& p : papers) {
    if (p.year > newest - window_years) out.push_back(&p);
  }
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
    return a->year != b->year ? a->year > b->year : a->paper_id < b->paper_id;
  });
  return out;
}

std::vector<std::string> ResearcherProfile::recent_titles() const {
  std::vector<std::string> out;
  for (const auto* p : window_papers()) out.push_back(p->title);
  return out;
}

std::set<std::string> extract_researcher_concepts(
    const std::vector<corpus::PaperRecord>& papers,
    const concepts::ConceptLexicon& lexicon, int window_years) {
  if (papers.empty()) throw ValidationError("researcher has no papers");
  if (window_years < 1) throw ValidationError("window_years must be >= 1");
  ConceptMatcher matcher(lexicon.concepts);
  const int newest = newest_year(papers);
  std::set<std::string> found;
  for (const auto& p : papers) {
    if (p.year <= newest - window_years) continue;
    auto m = matcher.longest_matches(p.document_text());
    found.insert(m.begin(), m.end());
  }
  return found;
}

std::string build_refinement_prompt(const std::vector<std::string>& titles,
                                    const std::set<std::string>& concepts) {
  std::string listing;
  for (size_t i = 0; i < titles.size(); ++i) {
    if (i) listing += '\n';
    listing += std::to_string(i) + ") " + titles[i];
  }
  std::string clist;
  for (const auto& c : concepts) {
    if (!clist.empty()) clist += ", ";
    clist += c;
  }
  return prompts::render(prompts::refine_concepts(),
                         {{"titles", listing}, {"concepts", clist}});
}

RefineResult refine_profile(const std::set<std::string>& raw,
                            const std::vector<std::string>& titles,
                            judge::JudgeClient& judge, int max_attempts) {
  RefineResult result;
  if (raw.empty()) return result;
  std::vector<std::string> items;
  try {
    std::string response = judge::complete_with_retry(
        judge, build_refinement_prompt(titles, raw), max_attempts);
    if (!judge::parse_bracket_list(response, items)) {
      return {raw, true};
    }
  } catch (const JudgeError&) {
    return {raw, true};
  }
  for (const auto& item : items) {
    std::string n = normalize_text(item);
    if (raw.count(n)) result.concepts.insert(n);
  }
  return result;
}

double semantic_distance_concepts(const std::set<std::string>& a,
                                  const std::set<std::string>& b) {
  if (a.empty() || b.empty()) {
    throw ValidationError("semantic distance needs non-empty concept sets");
  }
  return jaccard_distance(a, b);
}

std::set<std::string> expand_with_neighbors(const std::set<std::string>& concepts,
                                            const kg::GraphSnapshot& snapshot) {
  std::set<std::string> out = concepts;
  for (const auto& c : concepts) {
    auto n = snapshot.neighbors(c);
    out.insert(n.begin(), n.end());
  }
  return out;
}

double semantic_distance_neighborhood(const std::set<std::string>& a,
                                      const std::set<std::string>& b,
                                      const kg::GraphSnapshot& snapshot) {
  if (a.empty() || b.empty()) {
    throw ValidationError("semantic distance needs non-empty concept sets");
  }
  return jaccard_distance(expand_with_neighbors(a, snapshot),
                          expand_with_neighbors(b, snapshot));
}

std::vector<ResearcherInput> read_researchers(const std::string& text,
                                              const corpus::Corpus& corpus) {
  std::vector<ResearcherInput> out;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("researcher_id")) {
      throw FormatError("researcher line " + std::to_string(lineno) +
                        " lacks researcher_id");
    }
    ResearcherInput r;
    r.researcher_id = j["researcher_id"].get<std::string>();
    std::set<std::string> seen;
    if (j.contains("paper_ids")) {
      for (const auto& id : j["paper_ids"]) {
        const auto* rec = corpus.find(id.get<std::string>());
        if (rec == nullptr) {
          throw NotFoundError("researcher " + r.researcher_id +
                              ": paper not in corpus: " + id.get<std::string>());
        }
        if (seen.insert(rec->paper_id).second) r.papers.push_back(*rec);
      }
    }
    if (j.contains("papers")) {
      for (const auto& p : j["papers"]) {
        auto rec = corpus::record_from_json(p);
        if (seen.insert(rec.paper_id).second) r.papers.push_back(std::move(rec));
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ResearcherProfile> build_profiles(
    const std::vector<ResearcherInput>& inputs,
    const concepts::ConceptLexicon& lexicon, judge::JudgeClient* judge,
    const BuildOptions& options) {
  std::vector<ResearcherProfile> out;
  for (const auto& input : inputs) {
    ResearcherProfile p;
    p.researcher_id = input.researcher_id;
    p.papers = input.papers;
    p.window_years = options.window_years;
    if (p.papers.empty()) {
      throw ValidationError("researcher " + p.researcher_id + " has no papers");
    }
    p.raw_concepts =
        extract_researcher_concepts(p.papers, lexicon, options.window_years);
    if (judge != nullptr) {
      auto refined = refine_profile(p.raw_concepts, p.recent_titles(), *judge,
                                    options.max_attempts);
      p.concepts = std::move(refined.concepts);
      p.refinement_fallback = refined.fallback;
    } else {
      p.concepts = p.raw_concepts;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string serialize_profiles(const std::vector<ResearcherProfile>& profiles) {
  std::string out;
  for (const auto& p : profiles) {
    json papers = json::array();
    for (const auto& r : p.papers) papers.push_back(corpus::record_to_json(r));
    json j = {{"researcher_id", p.researcher_id},
              {"window_years", p.window_years},
              {"raw_concepts", p.raw_concepts},
              {"concepts", p.concepts},
              {"refinement_fallback", p.refinement_fallback},
              {"papers", papers}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<ResearcherProfile> parse_profiles(const std::string& text) {
  std::vector<ResearcherProfile> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw FormatError("bad profiles line");
    try {
      ResearcherProfile p;
      p.researcher_id = j.at("researcher_id").get<std::string>();
      p.window_years = j.at("window_years").get<int>();
      p.raw_concepts = j.at("raw_concepts").get<std::set<std::string>>();
      p.concepts = j.at("concepts").get<std::set<std::string>>();
      p.refinement_fallback = j.value("refinement_fallback", false);
      for (const auto& r : j.at("papers")) {
        p.papers.push_back(corpus::record_from_json(r));
      }
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw FormatError(std::string("bad profiles line: ") + e.what());
    }
  }
  return out;
}

}  // namespace muse::profiles
