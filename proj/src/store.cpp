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

#include "muse/store.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>

#include "muse/csv.hpp"
#include "muse/error.hpp"
#include "muse/features.hpp"
#include "muse/text.hpp"

namespace muse::service {

namespace fs = std::filesystem;
using ideation::IdeaRecord;
using ideation::Mode;
using nlohmann::json;

namespace {

constexpr const char* kEventsFile = "events.jsonl";
constexpr const char* kSnapshotFile = "snapshot.json";

json model_json(const models::InterestModel& m) {
  return json::parse(models::serialize_model(m));
}

}  // namespace

std::optional<std::vector<double>> top25_features(const IdeaRecord& idea) {
  const auto& catalog = features::FeatureCatalog::standard();
  if (idea.features.size() != catalog.size() || idea.catalog_version != catalog.version) {
    return std::nullopt;
  }
  features::FeatureVector fv{"", "", idea.features, idea.catalog_version};
  return fv.project(catalog, features::top25_ids());
}

void State::apply(const json& event) {
  const uint64_t seq = event.at("seq").get<uint64_t>();
  if (seq != this->seq + 1) {
    throw ConsistencyError("event sequence gap: expected " + std::to_string(this->seq + 1) +
                           ", got " + std::to_string(seq));
  }
  const std::string type = event.at("type").get<std::string>();
  if (type == "rater") {
    auto& r = raters[event.at("rater_id").get<std::string>()];
    r.token = event.value("token", "");
  } else if (type == "idea") {
    auto idea = ideation::idea_from_json(event.at("idea"));
    if (idea_index.count(idea.idea_id)) {
      throw ConsistencyError("duplicate idea " + idea.idea_id);
    }
    raters.try_emplace(idea.researcher_a);
    idea_index[idea.idea_id] = ideas.size();
    ideas.push_back(std::move(idea));
  } else if (type == "model") {
    model = models::parse_model(event.at("model").dump());
  } else if (type == "served") {
    auto it = raters.find(event.at("rater_id").get<std::string>());
    if (it == raters.end()) throw ConsistencyError("served event for unknown rater");
    for (const auto& id : event.at("idea_ids")) {
      if (!idea_index.count(id.get<std::string>())) {
        throw ConsistencyError("served event for unknown idea");
      }
      it->second.served.push_back(id.get<std::string>());
    }
  } else if (type == "rating") {
    const std::string idea = event.at("idea_id").get<std::string>();
    const std::string rater = event.at("rater_id").get<std::string>();
    const int rating = event.at("rating").get<int>();
    if (!idea_index.count(idea) || !raters.count(rater) || rating < 1 || rating > 5) {
      throw ConsistencyError("invalid rating event");
    }
    auto [it, fresh] = ratings.try_emplace({idea, rater});
    if (!fresh) it->second.previous.push_back(it->second.rating);
    it->second.rating = rating;
    it->second.submitted_at = event.value("submitted_at", "");
  } else {
    throw ConsistencyError("unknown event type: " + type);
  }
  this->seq = seq;
}

json State::to_json() const {
  json j;
  j["schema"] = kSchema;
  j["seq"] = seq;
  json ideas_j = json::array();
  for (const auto& i : ideas) ideas_j.push_back(ideation::idea_to_json(i));
  j["ideas"] = ideas_j;
  json raters_j = json::array();
  for (const auto& [id, r] : raters) {
    raters_j.push_back({{"rater_id", id}, {"token", r.token}, {"served", r.served}});
  }
  j["raters"] = raters_j;
  json ratings_j = json::array();
  for (const auto& [key, e] : ratings) {
    ratings_j.push_back({{"idea_id", key.first},
                         {"rater_id", key.second},
                         {"rating", e.rating},
                         {"submitted_at", e.submitted_at},
                         {"previous", e.previous}});
  }
  j["ratings"] = ratings_j;
  j["model"] = model ? model_json(*model) : json(nullptr);
  return j;
}

State State::from_json(const json& j) {
  try {
    State s;
    s.seq = j.at("seq").get<uint64_t>();
    for (const auto& i : j.at("ideas")) {
      auto idea = ideation::idea_from_json(i);
      s.idea_index[idea.idea_id] = s.ideas.size();
      s.ideas.push_back(std::move(idea));
    }
    for (const auto& r : j.at("raters")) {
      auto& rater = s.raters[r.at("rater_id").get<std::string>()];
      rater.token = r.at("token").get<std::string>();
      rater.served = r.at("served").get<std::vector<std::string>>();
    }
    for (const auto& r : j.at("ratings")) {
      RatingEntry e;
      e.rating = r.at("rating").get<int>();
      e.submitted_at = r.at("submitted_at").get<std::string>();
      e.previous = r.at("previous").get<std::vector<int>>();
      s.ratings[{r.at("idea_id").get<std::string>(), r.at("rater_id").get<std::string>()}] = e;
    }
    if (!j.at("model").is_null()) s.model = models::parse_model(j.at("model").dump());
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed snapshot: ") + e.what());
  }
}

Store::Store(StoreOptions options) : options_(std::move(options)) {}

Store::Store(const std::string& dir, StoreOptions options)
    : options_(std::move(options)), dir_(dir) {
  fs::create_directories(dir_);
  const fs::path snap = fs::path(dir_) / kSnapshotFile;
  if (fs::exists(snap)) {
    json j = json::parse(read_file(snap.string()), nullptr, false);
    if (j.is_discarded()) throw FormatError("snapshot is not JSON: " + snap.string());
    state_ = State::from_json(j);
  }
  const fs::path events = fs::path(dir_) / kEventsFile;
  if (fs::exists(events)) {
    const std::string text = read_file(events.string());
    const size_t end = text.rfind('\n');
    const size_t complete = end == std::string::npos ? 0 : end + 1;
    if (complete < text.size()) fs::resize_file(events, complete);  // torn write
    std::istringstream in(text.substr(0, complete));
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      json e = json::parse(line, nullptr, false);
      if (e.is_discarded()) throw FormatError("corrupt event line in " + events.string());
      if (e.at("seq").get<uint64_t>() <= state_.seq) continue;
      state_.apply(e);
      ++since_snapshot_;
    }
  }
  log_.open(events, std::ios::app | std::ios::binary);
  if (!log_) throw Error("cannot open event log: " + events.string());
}

Store::~Store() {
  if (!dir_.empty() && since_snapshot_ > 0) {
    try {
      write_snapshot();
    } catch (...) {
    }
  }
}

void Store::append(json event) {
  event["seq"] = state_.seq + 1;
  state_.apply(event);
  if (!dir_.empty()) {
    log_ << event.dump() << '\n';
    log_.flush();
    if (!log_) throw Error("event log write failed");
    ++since_snapshot_;
    if (options_.snapshot_every && since_snapshot_ >= options_.snapshot_every) {
      write_file_atomic((fs::path(dir_) / kSnapshotFile).string(), state_.to_json().dump());
      since_snapshot_ = 0;
    }
  }
}

void Store::register_rater(const std::string& rater_id, const std::string& token) {
  if (rater_id.empty()) throw ValidationError("empty rater id");
  std::unique_lock lock(mu_);
  append({{"type", "rater"}, {"rater_id", rater_id}, {"token", token}});
}

void Store::add_ideas(const std::vector<IdeaRecord>& ideas) {
  std::unique_lock lock(mu_);
  std::set<std::string> batch;
  for (const auto& i : ideas) {
    if (state_.idea_index.count(i.idea_id) || !batch.insert(i.idea_id).second) {
      throw ValidationError("duplicate idea id: " + i.idea_id);
    }
  }
  for (const auto& i : ideas) append({{"type", "idea"}, {"idea", ideation::idea_to_json(i)}});
}

void Store::set_model(const models::InterestModel& model) {
  std::unique_lock lock(mu_);
  append({{"type", "model"}, {"model", model_json(model)}});
}

double Store::predicted(const IdeaRecord& idea) const {
  if (!state_.model) return -std::numeric_limits<double>::infinity();
  const auto& m = *state_.model;
  const auto& catalog = features::FeatureCatalog::standard();
  if (idea.features.size() != catalog.size() || idea.catalog_version != catalog.version) {
    return -std::numeric_limits<double>::infinity();
  }
  features::FeatureVector fv{"", "", idea.features, idea.catalog_version};
  const auto& ids = m.feature_ids.empty() ? features::top25_ids() : m.feature_ids;
  return m.predict(fv.project(catalog, ids));
}

std::vector<IdeaRecord> Store::next_suggestions(const std::string& rater_id, size_t limit) {
  std::unique_lock lock(mu_);
  auto rit = state_.raters.find(rater_id);
  if (rit == state_.raters.end()) throw NotFoundError("unknown rater: " + rater_id);
  limit = std::min(limit, options_.serve_cap);
  const auto& served = rit->second.served;
  const std::set<std::string> served_set(served.begin(), served.end());
  auto rated = [&](const std::string& idea) {
    return state_.ratings.count({idea, rater_id}) > 0;
  };

  std::vector<std::string> pending;
  for (const auto& id : served) {
    if (!rated(id)) pending.push_back(id);
  }
  const size_t free = options_.serve_cap > served.size() ? options_.serve_cap - served.size() : 0;
  const size_t need = limit > pending.size() ? limit - pending.size() : 0;

  // Per-mode queues, best predicted first (insertion order without a model).
  std::vector<std::string> queues[3];
  for (const auto& idea : state_.ideas) {
    if (idea.researcher_a != rater_id || served_set.count(idea.idea_id) || rated(idea.idea_id)) {
      continue;
    }
    queues[static_cast<int>(idea.mode)].push_back(idea.idea_id);
  }
  for (auto& q : queues) {
    std::stable_sort(q.begin(), q.end(), [&](const std::string& a, const std::string& b) {
      return predicted(state_.ideas[state_.idea_index.at(a)]) >
             predicted(state_.ideas[state_.idea_index.at(b)]);
    });
  }
  std::vector<std::string> assigned;
  size_t pos[3] = {0, 0, 0};
  const size_t take = std::min(free, need);
  for (int mode = 0; assigned.size() < take;) {
    bool any = false;
    for (int k = 0; k < 3 && assigned.size() < take; ++k) {
      const int m = (mode + k) % 3;
      if (pos[m] < queues[m].size()) {
        assigned.push_back(queues[m][pos[m]++]);
        any = true;
      }
    }
    if (!any) break;
  }
  if (!assigned.empty()) {
    append({{"type", "served"}, {"rater_id", rater_id}, {"idea_ids", assigned}});
  }

  std::vector<std::string> out = pending;
  out.insert(out.end(), assigned.begin(), assigned.end());
  if (state_.model) {
    std::stable_sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
      return predicted(state_.ideas[state_.idea_index.at(a)]) >
             predicted(state_.ideas[state_.idea_index.at(b)]);
    });
  }
  if (out.size() > limit) out.resize(limit);
  std::vector<IdeaRecord> records;
  for (const auto& id : out) records.push_back(state_.ideas[state_.idea_index.at(id)]);
  return records;
}

SubmitResult Store::submit_rating(const RatingEvent& event) {
  if (event.rating < 1 || event.rating > 5) {
    throw ValidationError("rating must be an integer in 1..5");
  }
  std::unique_lock lock(mu_);
  if (!state_.idea_index.count(event.idea_id)) {
    throw NotFoundError("unknown idea: " + event.idea_id);
  }
  if (!state_.raters.count(event.rater_id)) {
    throw NotFoundError("unknown rater: " + event.rater_id);
  }
  SubmitResult result;
  if (auto it = state_.ratings.find({event.idea_id, event.rater_id}); it != state_.ratings.end()) {
    result.previous = it->second.rating;
  }
  append({{"type", "rating"},
          {"idea_id", event.idea_id},
          {"rater_id", event.rater_id},
          {"rating", event.rating},
          {"submitted_at",
           event.submitted_at.empty() ? options_.clock() : event.submitted_at}});
  return result;
}

ExportResult Store::export_training_set() const {
  std::shared_lock lock(mu_);
  csv::Table train, sanity;
  train.header = {"idea_id", "rater_id", "c_a", "c_b", "mode"};
  for (const auto& id : features::top25_ids()) train.header.push_back(id);
  train.header.push_back("rating");
  train.header.push_back("label");
  sanity.header = {"idea_id", "rater_id", "mode", "rating", "label"};
  ExportResult out;
  for (const auto& idea : state_.ideas) {
    for (auto it = state_.ratings.lower_bound({idea.idea_id, ""});
         it != state_.ratings.end() && it->first.first == idea.idea_id; ++it) {
      const int rating = it->second.rating;
      const std::string label = rating >= 4 ? "1" : "0";
      if (!idea.concept_pair) {
        sanity.rows.push_back({idea.idea_id, it->first.second, ideation::mode_name(idea.mode),
                               std::to_string(rating), label});
        continue;
      }
      auto f = top25_features(idea);
      if (!f) {
        ++out.skipped;
        continue;
      }
      csv::Row row = {idea.idea_id, it->first.second, idea.concept_pair->first,
                      idea.concept_pair->second, ideation::mode_name(idea.mode)};
      for (double v : *f) row.push_back(csv::format_double(v));
      row.push_back(std::to_string(rating));
      row.push_back(label);
      train.rows.push_back(std::move(row));
    }
  }
  out.training_rows = train.rows.size();
  out.sanity_rows = sanity.rows.size();
  out.training_csv = csv::write(train);
  out.sanity_csv = csv::write(sanity);
  return out;
}

json Store::stats(const std::optional<std::string>& rater_id) const {
  std::shared_lock lock(mu_);
  json j;
  j["schema"] = kSchema;
  j["ideas"] = state_.ideas.size();
  j["raters"] = state_.raters.size();
  j["ratings"] = state_.ratings.size();
  std::vector<int> hist(5, 0);
  std::map<std::string, std::vector<int>> by_mode;
  std::map<std::string, int> ideas_by_mode;
  for (const auto* m : {"random_pair", "high_impact_pair", "no_pair"}) {
    by_mode[m] = std::vector<int>(5, 0);
    ideas_by_mode[m] = 0;
  }
  for (const auto& i : state_.ideas) ++ideas_by_mode[ideation::mode_name(i.mode)];
  for (const auto& [key, e] : state_.ratings) {
    ++hist[static_cast<size_t>(e.rating - 1)];
    const auto& idea = state_.ideas[state_.idea_index.at(key.first)];
    ++by_mode[ideation::mode_name(idea.mode)][static_cast<size_t>(e.rating - 1)];
  }
  j["histogram"] = hist;
  json modes = json::object();
  for (const auto& [m, h] : by_mode) modes[m] = {{"ideas", ideas_by_mode[m]}, {"histogram", h}};
  j["by_mode"] = modes;
  if (rater_id) {
    auto it = state_.raters.find(*rater_id);
    if (it == state_.raters.end()) throw NotFoundError("unknown rater: " + *rater_id);
    std::vector<int> rh(5, 0);
    size_t rated = 0, assigned = 0;
    for (const auto& [key, e] : state_.ratings) {
      if (key.second != *rater_id) continue;
      ++rated;
      ++rh[static_cast<size_t>(e.rating - 1)];
    }
    for (const auto& i : state_.ideas) assigned += i.researcher_a == *rater_id;
    const size_t total = std::min(assigned, options_.serve_cap);
    j["rater"] = {{"rater_id", *rater_id},
                  {"rated", rated},
                  {"served", it->second.served.size()},
                  {"total", total},
                  {"remaining", total > rated ? total - rated : 0},
                  {"histogram", rh}};
  }
  return j;
}

std::vector<IdeaRecord> Store::ideas() const {
  std::shared_lock lock(mu_);
  std::vector<IdeaRecord> out = state_.ideas;
  for (auto& i : out) {
    if (auto it = state_.ratings.find({i.idea_id, i.researcher_a}); it != state_.ratings.end()) {
      i.rating = it->second.rating;
    }
  }
  return out;
}

bool Store::has_rater(const std::string& rater_id) const {
  std::shared_lock lock(mu_);
  return state_.raters.count(rater_id) > 0;
}

std::string Store::rater_token(const std::string& rater_id) const {
  std::shared_lock lock(mu_);
  auto it = state_.raters.find(rater_id);
  if (it == state_.raters.end()) throw NotFoundError("unknown rater: " + rater_id);
  return it->second.token;
}

json Store::snapshot() const {
  std::shared_lock lock(mu_);
  return state_.to_json();
}

void Store::write_snapshot() {
  std::unique_lock lock(mu_);
  if (dir_.empty()) return;
  write_file_atomic((fs::path(dir_) / kSnapshotFile).string(), state_.to_json().dump());
  since_snapshot_ = 0;
}

State Store::replay(const std::string& dir) {
  State s;
  const fs::path events = fs::path(dir) / kEventsFile;
  if (!fs::exists(events)) return s;
  std::istringstream in(read_file(events.string()));
  std::string line;
  while (std::getline(in, line)) {
    if (in.eof()) break;  // no trailing newline: torn write
    if (trim(line).empty()) continue;
    s.apply(json::parse(line));
  }
  return s;
}

std::vector<models::LabeledExample> parse_training_csv(const std::string& text) {
  const csv::Table t = csv::parse(text);
  const size_t idea = t.column("idea_id");
  const size_t rater = t.column("rater_id");
  const size_t rating = t.column("rating");
  const size_t label = t.column("label");
  std::vector<size_t> cols;
  for (const auto& id : features::top25_ids()) cols.push_back(t.column(id));
  std::vector<models::LabeledExample> out;
  for (const auto& row : t.rows) {
    std::vector<double> f;
    for (size_t c : cols) f.push_back(csv::parse_double(row[c]));
    int r = 0;
    try {
      r = std::stoi(row[rating]);
    } catch (const std::exception&) {
      throw FormatError("rating is not an integer: " + row[rating]);
    }
    auto ex = models::make_example(row[idea] + "/" + row[rater], std::move(f), r);
    if (std::to_string(ex.label()) != row[label]) {
      throw FormatError("label disagrees with rating for " + ex.id);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace muse::service
