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

#include "muse/ideation.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <random>
#include <sstream>

#include "muse/error.hpp"
#include "muse/hash.hpp"
#include "muse/prompts.hpp"
#include "muse/text.hpp"

namespace muse::ideation {

using nlohmann::json;

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::kRandomPair: return "random_pair";
    case Mode::kHighImpactPair: return "high_impact_pair";
    case Mode::kNoPair: return "no_pair";
  }
  return "no_pair";
}

Mode mode_from_name(const std::string& name) {
  if (name == "random_pair") return Mode::kRandomPair;
  if (name == "high_impact_pair") return Mode::kHighImpactPair;
  if (name == "no_pair") return Mode::kNoPair;
  throw ValidationError("unknown idea mode: " + name);
}

ConceptPair select_pair_random(const std::set<std::string>& a,
                               const std::set<std::string>& b, uint64_t seed) {
  if (a.empty() || b.empty()) throw ValidationError("empty concept set");
  size_t shared = 0;
  for (const auto& x : a) shared += b.count(x);
  const size_t valid = a.size() * b.size() - shared;
  if (valid == 0) throw ValidationError("no pair of distinct concepts");
  std::mt19937_64 rng(seed);
  // k-th valid pair in (c_A, c_B) order
  size_t k = std::uniform_int_distribution<size_t>(0, valid - 1)(rng);
  for (const auto& x : a) {
    const size_t row = b.size() - b.count(x);
    if (k >= row) {
      k -= row;
      continue;
    }
    for (const auto& y : b) {
      if (y == x) continue;
      if (k-- == 0) return {x, y};
    }
  }
  throw ConsistencyError("pair enumeration out of range");
}

ConceptPair select_pair_high_impact(const std::set<std::string>& a,
                                    const std::set<std::string>& b,
                                    const PairScorer& impact) {
  if (a.empty() || b.empty()) throw ValidationError("empty concept set");
  std::optional<ConceptPair> best;
  double best_score = 0.0;
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (x == y) continue;
      const double s = impact(x, y);
      // Iteration is already lexicographic, so only a strictly better score
      // replaces the incumbent.
      if (!best || s > best_score) {
        best = ConceptPair{x, y};
        best_score = s;
      }
    }
  }
  if (!best) throw ValidationError("no pair of distinct concepts");
  return *best;
}

std::vector<std::string> prompt_titles(const profiles::ResearcherProfile& p) {
  std::vector<const corpus::PaperRecord*> papers;
  for (const auto& r : p.papers) papers.push_back(&r);
  std::sort(papers.begin(), papers.end(), [](const auto* x, const auto* y) {
    return x->year != y->year ? x->year > y->year : x->paper_id < y->paper_id;
  });
  std::vector<std::string> out;
  for (const auto* r : papers) {
    if (out.size() == kMaxTitles) break;
    out.push_back(r->title);
  }
  return out;
}

std::string format_titles(const std::vector<std::string>& titles) {
  std::string out;
  for (size_t i = 0; i < titles.size(); ++i) {
    if (i) out += '\n';
    out += std::to_string(i + 1) + ": " + titles[i];
  }
  return out;
}

std::string build_idea_prompt(const std::optional<ConceptPair>& pair,
                              std::vector<std::string> titles_a,
                              std::vector<std::string> titles_b) {
  if (titles_a.empty() || titles_b.empty()) {
    throw ValidationError("idea prompt needs at least one title per researcher");
  }
  if (titles_a.size() > kMaxTitles) titles_a.resize(kMaxTitles);
  if (titles_b.size() > kMaxTitles) titles_b.resize(kMaxTitles);
  if (pair) {
    if (pair->first == pair->second) throw ValidationError("identical concept pair");
    return prompts::render(prompts::idea_with_pair(),
                           {{"concept1", pair->first},
                            {"concept2", pair->second},
                            {"titles_a", format_titles(titles_a)},
                            {"titles_b", format_titles(titles_b)}});
  }
  return prompts::render(prompts::idea_without_pair(),
                         {{"titles_a", format_titles(titles_a)},
                          {"titles_b", format_titles(titles_b)}});
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Drops markdown emphasis, heading marks and wrapping quotes.
std::string clean(std::string_view s) {
  std::string t(trim(s));
  auto strip = [](char c) { return c == '*' || c == '#' || c == '"' || c == '_'; };
  size_t b = 0, e = t.size();
  while (b < e && (strip(t[b]) || t[b] == ' ')) ++b;
  while (e > b && (strip(t[e - 1]) || t[e - 1] == ' ')) --e;
  return t.substr(b, e - b);
}

// Removes a leading "Objective:"-style label from a paragraph.
std::string drop_label(const std::string& para) {
  const auto colon = para.find(':');
  if (colon == std::string::npos || colon > 40) return para;
  const std::string label = lower(clean(para.substr(0, colon)));
  if (label.find("objective") == std::string::npos &&
      label.find("explanation") == std::string::npos &&
      label.find("description") == std::string::npos) {
    return para;
  }
  return clean(para.substr(colon + 1));
}

bool ends_objective(const std::string& line) {
  const std::string l = lower(line);
  return l.find("research question") != std::string::npos ||
         l.rfind("finally", 0) == 0 || clean(l).rfind("finally", 0) == 0;
}

}  // namespace

ParsedIdea parse_idea_response(const std::string& response) {
  std::vector<std::string> lines;
  {
    std::istringstream in(response);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }
  ParsedIdea out;
  std::optional<size_t> title_line;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string l = lower(lines[i]);
    if (l.find("title") != std::string::npos &&
        (l.find("project") != std::string::npos || clean(l).rfind("title", 0) == 0)) {
      title_line = i;
    }
  }
  if (!title_line) return out;
  size_t i = *title_line;
  const auto colon = lines[i].find(':');
  std::string title = colon == std::string::npos ? "" : clean(lines[i].substr(colon + 1));
  ++i;
  if (title.empty()) {
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
    if (i < lines.size()) title = clean(lines[i++]);
  }
  // Objective: the first paragraph after the title, skipping a bare label.
  std::string body;
  for (; i < lines.size(); ++i) {
    const std::string line(trim(lines[i]));
    if (line.empty()) {
      if (!body.empty()) break;
      continue;
    }
    if (ends_objective(line)) break;
    const std::string c = clean(line);
    if (body.empty() && c.size() && c.back() == ':' &&
        lower(c).find("objective") != std::string::npos) {
      continue;
    }
    if (!body.empty()) body += ' ';
    body += line;
  }
  out.title = title;
  out.body = clean(drop_label(clean(body)));
  out.ok = !out.title.empty() && !out.body.empty();
  return out;
}

std::string IdeaRecord::suggestion_text() const {
  if (parse_failed) return response;
  return idea_title + "\n" + idea_body;
}

json idea_to_json(const IdeaRecord& r) {
  json j = {{"idea_id", r.idea_id},
            {"researcher_a", r.researcher_a},
            {"researcher_b", r.researcher_b},
            {"mode", mode_name(r.mode)},
            {"concept_pair", nullptr},
            {"titles_a", r.titles_a},
            {"titles_b", r.titles_b},
            {"prompt", r.prompt},
            {"template_hash", r.template_hash},
            {"response", r.response},
            {"idea_title", r.idea_title},
            {"idea_body", r.idea_body},
            {"parse_failed", r.parse_failed},
            {"created_at", r.created_at},
            {"judge", r.judge},
            {"rating", nullptr},
            {"elo", nullptr},
            {"impact", nullptr},
            {"catalog_version", r.catalog_version},
            {"features", r.features}};
  if (r.concept_pair) j["concept_pair"] = {r.concept_pair->first, r.concept_pair->second};
  if (r.rating) j["rating"] = *r.rating;
  if (r.elo) j["elo"] = *r.elo;
  if (r.impact) j["impact"] = *r.impact;
  return j;
}

IdeaRecord idea_from_json(const json& j) {
  try {
    IdeaRecord r;
    r.idea_id = j.at("idea_id").get<std::string>();
    r.researcher_a = j.at("researcher_a").get<std::string>();
    r.researcher_b = j.at("researcher_b").get<std::string>();
    r.mode = mode_from_name(j.at("mode").get<std::string>());
    if (!j.at("concept_pair").is_null()) {
      auto p = j.at("concept_pair").get<std::vector<std::string>>();
      if (p.size() != 2) throw FormatError("concept_pair must have two entries");
      r.concept_pair = ConceptPair{p[0], p[1]};
    }
    if ((r.mode == Mode::kNoPair) != !r.concept_pair.has_value()) {
      throw FormatError("idea " + r.idea_id + ": mode and concept pair disagree");
    }
    r.titles_a = j.at("titles_a").get<std::vector<std::string>>();
    r.titles_b = j.at("titles_b").get<std::vector<std::string>>();
    r.prompt = j.at("prompt").get<std::string>();
    r.template_hash = j.value("template_hash", "");
    r.response = j.at("response").get<std::string>();
    r.idea_title = j.at("idea_title").get<std::string>();
    r.idea_body = j.at("idea_body").get<std::string>();
    r.parse_failed = j.value("parse_failed", false);
    r.created_at = j.value("created_at", "");
    r.judge = j.value("judge", "");
    if (j.contains("rating") && !j["rating"].is_null()) {
      const int rating = j["rating"].get<int>();
      if (rating < 1 || rating > 5) throw FormatError("rating out of range");
      r.rating = rating;
    }
    if (j.contains("elo") && !j["elo"].is_null()) r.elo = j["elo"].get<double>();
    if (j.contains("impact") && !j["impact"].is_null()) r.impact = j["impact"].get<double>();
    r.catalog_version = j.value("catalog_version", "");
    if (j.contains("features")) r.features = j["features"].get<std::vector<double>>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed idea record: ") + e.what());
  } catch (const ValidationError& e) {
    throw FormatError(e.what());
  }
}

std::string serialize_ideas(const std::vector<IdeaRecord>& ideas) {
  std::string out;
  for (const auto& r : ideas) out += idea_to_json(r).dump() + "\n";
  return out;
}

std::vector<IdeaRecord> parse_ideas(const std::string& text) {
  std::vector<IdeaRecord> out;
  std::istringstream in(text);
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw FormatError("ideas line " + std::to_string(n) + " is not JSON");
    out.push_back(idea_from_json(j));
  }
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

IdeaRecord generate_idea(const IdeaRequest& request, judge::JudgeClient& judge,
                         const Clock& clock, int max_attempts) {
  if ((request.mode == Mode::kNoPair) != !request.pair.has_value()) {
    throw ValidationError("mode and concept pair disagree");
  }
  IdeaRecord r;
  r.researcher_a = request.researcher_a;
  r.researcher_b = request.researcher_b;
  r.mode = request.mode;
  r.concept_pair = request.pair;
  r.titles_a = request.titles_a;
  r.titles_b = request.titles_b;
  if (r.titles_a.size() > kMaxTitles) r.titles_a.resize(kMaxTitles);
  if (r.titles_b.size() > kMaxTitles) r.titles_b.resize(kMaxTitles);
  r.prompt = build_idea_prompt(request.pair, r.titles_a, r.titles_b);
  r.template_hash = (request.pair ? prompts::idea_with_pair() : prompts::idea_without_pair()).hash();
  r.response = judge::complete_with_retry(judge, r.prompt, max_attempts);
  const auto parsed = parse_idea_response(r.response);
  r.parse_failed = !parsed.ok;
  r.idea_title = parsed.title;
  r.idea_body = parsed.body;
  r.judge = judge.describe();
  r.created_at = clock();
  r.idea_id = sha256_hex(r.researcher_a + '\x1f' + r.researcher_b + '\x1f' +
                         mode_name(r.mode) + '\x1f' + std::to_string(request.nonce) +
                         '\x1f' + r.prompt + '\x1f' + r.response)
                  .substr(0, 16);
  return r;
}

namespace {

std::set<std::string> usable(const std::set<std::string>& concepts,
                             const features::FeatureExtractor* extractor) {
  if (!extractor) return concepts;
  std::set<std::string> out;
  for (const auto& c : concepts) {
    if (extractor->graph().find(c)) out.insert(c);
  }
  return out;
}

bool has_valid_pair(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() || b.empty()) return false;
  if (a.size() > 1 || b.size() > 1) return true;
  return *a.begin() != *b.begin();
}

}  // namespace

std::vector<IdeaRecord> generate_batch(
    const std::vector<profiles::ResearcherProfile>& researchers,
    const BatchOptions& options, judge::JudgeClient& judge,
    const GraphContext& graph, const Clock& clock) {
  const auto& mix = options.mix;
  if (mix.random_pair < 0 || mix.high_impact_pair < 0 || mix.no_pair < 0) {
    throw ValidationError("negative mode count");
  }
  if (researchers.size() < 2) throw ValidationError("need at least two researchers");
  if (mix.high_impact_pair > 0 && (!graph.extractor || !graph.impact)) {
    throw ConfigError("high-impact pairs need a graph and an impact model");
  }
  std::vector<Mode> plan;
  plan.insert(plan.end(), static_cast<size_t>(mix.random_pair), Mode::kRandomPair);
  plan.insert(plan.end(), static_cast<size_t>(mix.high_impact_pair), Mode::kHighImpactPair);
  plan.insert(plan.end(), static_cast<size_t>(mix.no_pair), Mode::kNoPair);
  std::mt19937_64 rng(options.seed);
  std::shuffle(plan.begin(), plan.end(), rng);

  std::vector<std::set<std::string>> concepts;
  for (const auto& p : researchers) concepts.push_back(usable(p.concepts, graph.extractor));

  std::uniform_int_distribution<size_t> pick(0, researchers.size() - 1);
  std::vector<IdeaRecord> out;
  for (size_t i = 0; i < plan.size(); ++i) {
    const Mode mode = plan[i];
    size_t a = 0, b = 0;
    bool found = false;
    for (int tries = 0; tries < 1000 && !found; ++tries) {
      a = pick(rng);
      b = pick(rng);
      if (a == b) continue;
      found = mode == Mode::kNoPair || has_valid_pair(concepts[a], concepts[b]);
    }
    if (!found) throw ValidationError("no researcher pair shares a valid concept pair");
    const auto& pa = researchers[a];
    const auto& pb = researchers[b];

    IdeaRequest req;
    req.researcher_a = pa.researcher_id;
    req.researcher_b = pb.researcher_id;
    req.mode = mode;
    req.titles_a = prompt_titles(pa);
    req.titles_b = prompt_titles(pb);
    req.nonce = i;
    std::optional<double> impact;
    if (mode == Mode::kRandomPair) {
      req.pair = select_pair_random(concepts[a], concepts[b], rng());
    } else if (mode == Mode::kHighImpactPair) {
      req.pair = select_pair_high_impact(
          concepts[a], concepts[b], [&](const std::string& x, const std::string& y) {
            return graph.impact->score(*graph.extractor, x, y);
          });
    }
    auto record = generate_idea(req, judge, clock, options.max_attempts);
    if (req.pair && graph.extractor) {
      const auto& snap = graph.extractor->snapshot_at(0);
      features::PairContext ctx;
      ctx.distance_concepts = profiles::semantic_distance_concepts(concepts[a], concepts[b]);
      ctx.distance_neighborhood =
          profiles::semantic_distance_neighborhood(concepts[a], concepts[b], snap);
      if (graph.impact) {
        impact = graph.impact->score(*graph.extractor, req.pair->first, req.pair->second);
        ctx.impact = *impact;
      }
      const auto fv = graph.extractor->compute(req.pair->first, req.pair->second, ctx);
      record.features = fv.values;
      record.catalog_version = fv.catalog_version;
      record.impact = impact;
    }
    out.push_back(std::move(record));
  }
  return out;
}

}  // namespace muse::ideation
