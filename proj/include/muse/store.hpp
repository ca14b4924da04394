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
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "muse/ideation.hpp"
#include "muse/training.hpp"

namespace muse::service {

inline constexpr size_t kServeCap = 48;
inline constexpr const char* kSchema = "muse.v1";

struct RatingEvent {
  std::string idea_id;
  std::string rater_id;
  int rating = 0;
  std::string submitted_at;  // filled from the store clock when empty
};

struct RatingEntry {
  int rating = 0;
  std::string submitted_at;
  std::vector<int> previous;  // overwritten values, oldest first
};

// Everything the service knows, as a fold over events. Ideas keep insertion
// order.
struct State {
  uint64_t seq = 0;
  std::vector<ideation::IdeaRecord> ideas;
  std::map<std::string, size_t> idea_index;
  struct Rater {
    std::string token;
    std::vector<std::string> served;  // ideas handed out, in order
  };
  std::map<std::string, Rater> raters;
  std::map<std::pair<std::string, std::string>, RatingEntry> ratings;  // (idea, rater)
  std::optional<models::InterestModel> model;

  // Applies one event; ConsistencyError for events that do not fit the state.
  void apply(const nlohmann::json& event);
  // Canonical form; equal states give equal JSON.
  nlohmann::json to_json() const;
  static State from_json(const nlohmann::json& j);
};

struct StoreOptions {
  size_t serve_cap = kServeCap;
  size_t snapshot_every = 100;  // events between snapshots, 0 = never
  ideation::Clock clock = ideation::utc_now;
};

struct ExportResult {
  std::string training_csv;  // pair ideas: ids, top-25 features, rating, label
  std::string sanity_csv;    // no-pair ideas: ids, rating, label
  size_t training_rows = 0;
  size_t sanity_rows = 0;
  size_t skipped = 0;  // pair ideas rated but without a feature vector
};

struct SubmitResult {
  std::optional<int> previous;
};

// Embedded persistence: events.jsonl (append-only, one event per line) and
// snapshot.json in a directory. Opening loads the snapshot and applies the
// newer events; a torn last line is dropped. Thread-safe: writers are
// serialized, readers share.
class Store {
 public:
  // In-memory store, nothing written.
  explicit Store(StoreOptions options = {});
  // Directory-backed store, created when absent.
  explicit Store(const std::string& dir, StoreOptions options = {});
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  void register_rater(const std::string& rater_id, const std::string& token = "");
  // Researcher A of each idea is registered as its rater. ValidationError on
  // duplicate idea ids.
  void add_ideas(const std::vector<ideation::IdeaRecord>& ideas);
  void set_model(const models::InterestModel& model);

  // Unrated ideas addressed to the rater (researcher A), at most `limit`,
  // never more than serve_cap handed out in total. New ideas are assigned
  // round-robin across generation modes. Order: predicted interest
  // descending when a model is set, else assignment order.
  // NotFoundError for unknown raters.
  std::vector<ideation::IdeaRecord> next_suggestions(const std::string& rater_id,
                                                     size_t limit = kServeCap);
  // ValidationError for ratings outside 1..5; NotFoundError for unknown idea
  // or rater.
  SubmitResult submit_rating(const RatingEvent& event);

  ExportResult export_training_set() const;
  // Histogram, per-mode histograms and counts; per-rater progress when
  // rater_id is given (NotFoundError if unknown).
  nlohmann::json stats(const std::optional<std::string>& rater_id = std::nullopt) const;

  // Ideas with the evaluating researcher's rating filled in.
  std::vector<ideation::IdeaRecord> ideas() const;
  bool has_rater(const std::string& rater_id) const;
  // Empty token means no token configured.
  std::string rater_token(const std::string& rater_id) const;
  size_t serve_cap() const { return options_.serve_cap; }

  nlohmann::json snapshot() const;
  void write_snapshot();
  // Folds every event in dir from an empty state.
  static State replay(const std::string& dir);

 private:
  void append(nlohmann::json event);
  double predicted(const ideation::IdeaRecord& idea) const;

  StoreOptions options_;
  std::string dir_;
  mutable std::shared_mutex mu_;
  State state_;
  std::ofstream log_;
  size_t since_snapshot_ = 0;
};

// Reads export_training_set's training CSV back as labeled examples (id =
// idea_id/rater_id). FormatError when the top-25 columns are missing or the
// label column disagrees with the rating.
std::vector<models::LabeledExample> parse_training_csv(const std::string& text);

// Rating prediction input: top-25 projection of a full catalog vector.
std::optional<std::vector<double>> top25_features(const ideation::IdeaRecord& idea);

}  // namespace muse::service
