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

#include "synth.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "muse/error.hpp"
#include "muse/hash.hpp"
#include "muse/text.hpp"

namespace muse::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("muse-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

const char* kAdjectives[] = {"photonic", "topological", "stochastic", "molecular",
                             "glacial",  "cortical",    "magnetic",   "catalytic"};
const char* kNouns[] = {"lattice", "plasma", "membrane", "soliton", "aerosol"};
const char* kGeneric[] = {"generic framework", "generic approach", "novel results"};
const char* kJoiners[] = {" for ", " in ", " of ", " with ", " and the "};

}  // namespace

SynthCorpus make_corpus(size_t n_papers, size_t n_researchers, uint64_t seed,
                        int first_year, int cutoff_year) {
  SynthCorpus out;
  for (const char* a : kAdjectives) {
    for (const char* n : kNouns) out.concepts.push_back(std::string(a) + " " + n);
  }
  for (const char* g : kGeneric) out.generic.push_back(g);

  std::mt19937_64 rng(seed);
  // A few concepts are popular so the graph has hubs.
  auto draw = [&]() -> const std::string& {
    const double u = uniform01(rng);
    const size_t k = static_cast<size_t>(u * u * static_cast<double>(out.concepts.size()));
    return out.concepts[std::min(k, out.concepts.size() - 1)];
  };
  std::vector<corpus::PaperRecord> records;
  const int span = cutoff_year - first_year + 1;
  for (size_t i = 0; i < n_papers; ++i) {
    corpus::PaperRecord r;
    char id[32];
    std::snprintf(id, sizeof id, "P%05zu", i);
    r.paper_id = id;
    r.year = first_year + static_cast<int>(rng() % static_cast<uint64_t>(span));
    const std::string& c1 = draw();
    std::string c2 = draw();
    while (c2 == c1) c2 = draw();
    r.title = c1 + kJoiners[rng() % 5] + c2;
    r.title[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(r.title[0])));
    std::string abstract = "We study " + draw() + " with " + draw() + ". ";
    if (rng() % 3 == 0) abstract += "A " + out.generic[rng() % out.generic.size()] + " is used. ";
    if (rng() % 4 == 0) abstract += "Samples measured 12 nm across. ";
    abstract.pop_back();
    r.abstract = abstract;
    for (int y = r.year; y <= cutoff_year; ++y) {
      const int64_t c = static_cast<int64_t>(rng() % 4);
      if (c > 0) r.citations_by_year[y] = c;
    }
    records.push_back(std::move(r));
  }
  out.corpus = corpus::Corpus(std::move(records), cutoff_year, "synthetic");

  // Each researcher owns a random handful of papers, two of them recent.
  const auto& recs = out.corpus.records();
  std::vector<size_t> recent;
  for (size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].year >= cutoff_year - 1) recent.push_back(i);
  }
  std::ostringstream jsonl;
  for (size_t r = 0; r < n_researchers; ++r) {
    const std::string rid = "R" + std::to_string(r + 1);
    out.researcher_ids.push_back(rid);
    std::set<std::string> ids;
    while (ids.size() < 2 && !recent.empty()) ids.insert(recs[recent[rng() % recent.size()]].paper_id);
    while (ids.size() < 9) ids.insert(recs[rng() % recs.size()].paper_id);
    nlohmann::json j = {{"researcher_id", rid}, {"paper_ids", ids}};
    jsonl << j.dump() << "\n";
  }
  out.researchers_jsonl = jsonl.str();
  return out;
}

kg::KnowledgeGraph random_graph(size_t n, double p, uint64_t seed, int year) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  std::vector<kg::VertexStats> vstats(n);
  for (size_t i = 0; i < n; ++i) names.push_back(fixture_concept_name(static_cast<int>(i)));
  std::vector<std::pair<kg::VertexId, kg::VertexId>> ends;
  std::vector<kg::EdgeStats> estats;
  for (kg::VertexId a = 0; a < n; ++a) {
    for (kg::VertexId b = a + 1; b < n; ++b) {
      if (uniform01(rng) < p) {
        ends.emplace_back(a, b);
        estats.push_back({kg::YearSeries(std::map<int, int64_t>{{year, 1}}), kg::YearSeries()});
      }
    }
  }
  return kg::KnowledgeGraph::from_parts(std::move(names), std::move(vstats), std::move(ends),
                                        std::move(estats), year);
}

std::string fixture_concept_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "k%03d", i);
  return buf;
}

std::vector<RawPaper> random_papers(size_t n_concepts, size_t n_papers, uint64_t seed,
                                    int first_year, int last_year) {
  std::mt19937_64 rng(seed);
  std::vector<RawPaper> out;
  for (size_t i = 0; i < n_papers; ++i) {
    RawPaper p;
    p.id = "W" + std::to_string(i);
    p.year = first_year + static_cast<int>(rng() % static_cast<uint64_t>(last_year - first_year + 1));
    const size_t k = 1 + rng() % 4;
    while (p.concepts.size() < k) p.concepts.insert(static_cast<int>(rng() % n_concepts));
    for (int y = p.year; y <= last_year; ++y) {
      if (rng() % 2) p.citations[y] = static_cast<int64_t>(1 + rng() % 5);
    }
    out.push_back(std::move(p));
  }
  return out;
}

corpus::Corpus raw_to_corpus(const std::vector<RawPaper>& papers, int cutoff_year) {
  std::vector<corpus::PaperRecord> records;
  for (const auto& p : papers) {
    corpus::PaperRecord r;
    r.paper_id = p.id;
    r.year = p.year;
    std::string title;
    for (int c : p.concepts) title += (title.empty() ? "" : ", ") + fixture_concept_name(c);
    r.title = title;
    r.citations_by_year = p.citations;
    records.push_back(std::move(r));
  }
  return corpus::Corpus(std::move(records), cutoff_year, "fixture");
}

namespace {

std::vector<std::string> bracket_items(const std::string& prompt) {
  std::vector<std::string> items;
  judge::parse_bracket_list(prompt, items);
  return items;
}

uint64_t hash64(const std::string& s) {
  return std::stoull(sha256_hex(s).substr(0, 15), nullptr, 16);
}

long quality_tag(const std::string& text) {
  static const std::regex re(R"(quality=(\d+))");
  std::smatch m;
  if (std::regex_search(text, m, re)) return std::stol(m[1].str());
  return -1;
}

}  // namespace

std::string scripted_response(const std::string& prompt) {
  if (prompt.rfind("Below is a list of candidate scientific concepts", 0) == 0) {
    std::string kept;
    for (const auto& item : bracket_items(prompt)) {
      if (item.find("generic") != std::string::npos) continue;
      kept += (kept.empty() ? "" : ", ") + item;
    }
    return "Here are the kept concepts:\nconcept list=[" + kept + "]";
  }
  if (prompt.rfind("A scientist has written the following papers", 0) == 0) {
    auto items = bracket_items(prompt);
    std::string kept;
    for (size_t i = 0; i < items.size(); ++i) {
      // drop every fourth concept so refinement is visible
      if (items.size() > 3 && i % 4 == 3) continue;
      kept += (kept.empty() ? "" : ", ") + items[i];
    }
    return "[" + kept + "]";
  }
  if (prompt.rfind("Two researchers A and B", 0) == 0) {
    const uint64_t h = hash64(prompt);
    std::ostringstream r;
    r << "concept1 is one field and concept2 is another.\n\n"
      << "A) contexts...\nB) critique...\nC) summary...\n\n"
      << "**Project Title:** Bridging study " << (h % 100000) << "\n\n"
      << "Objective: Combine both fields to test hypothesis " << (h % 997)
      << " (quality=" << (h % 1000) << ").\n\n"
      << "Research questions:\n- First question?\n- Second question?\n";
    return r.str();
  }
  if (prompt.rfind("I will present two research ideas", 0) == 0) {
    const auto s1 = prompt.find("Suggestion 1: ");
    const auto s2 = prompt.find("Suggestion 2: ");
    const long q1 = quality_tag(prompt.substr(s1, s2 - s1));
    const long q2 = quality_tag(prompt.substr(s2));
    int winner;
    if (q1 != q2 && q1 >= 0 && q2 >= 0) {
      winner = q1 > q2 ? 1 : 2;
    } else {
      winner = hash64(prompt) % 2 == 0 ? 1 : 2;
    }
    return "**Summary for Researcher A1**: ...\n**Summary for Researcher A2**: ...\n"
           "RESULT: SUGGESTION " + std::to_string(winner);
  }
  throw JudgeError("scripted judge: unknown prompt family");
}

std::vector<models::LabeledExample> planted_dataset(size_t n, size_t dims,
                                                    size_t informative, double noise,
                                                    uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<models::LabeledExample> out;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> x(dims);
    for (auto& v : x) v = gauss(rng);
    double s = 0.0;
    for (size_t k = 0; k < informative; ++k) s += x[k];
    s += noise * gauss(rng);
    // ratings 1..5 from the latent score; 4 and 5 are positive
    int rating = s > 1.2 ? 5 : s > 0.0 ? 4 : s > -1.2 ? 3 : s > -2.4 ? 2 : 1;
    out.push_back(models::make_example("x" + std::to_string(i), std::move(x), rating));
  }
  return out;
}

}  // namespace muse::testing
