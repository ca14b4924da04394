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

// muse: command-line front end for the literature-mining toolkit.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "muse/analysis.hpp"
#include "muse/concepts.hpp"
#include "muse/corpus.hpp"
#include "muse/csv.hpp"
#include "muse/error.hpp"
#include "muse/features.hpp"
#include "muse/http_api.hpp"
#include "muse/ideation.hpp"
#include "muse/impact.hpp"
#include "muse/judge.hpp"
#include "muse/kgraph.hpp"
#include "muse/matcher.hpp"
#include "muse/metrics.hpp"
#include "muse/profiles.hpp"
#include "muse/store.hpp"
#include "muse/text.hpp"
#include "muse/tournament.hpp"
#include "muse/training.hpp"

using namespace muse;
using nlohmann::json;

namespace {

struct JudgeOptions {
  std::string transcript;  // replay from
  std::string record;      // record live exchanges to
};

void add_judge_options(CLI::App* cmd, JudgeOptions& o) {
  cmd->add_option("--transcript", o.transcript, "Replay judge answers from a transcript");
  cmd->add_option("--record", o.record,
                  "Call the live endpoint (MUSE_JUDGE_*) and record a transcript");
}

// Owns the judge for one command; saves the recording on finish().
class JudgeHandle {
 public:
  explicit JudgeHandle(const JudgeOptions& o) : record_path_(o.record) {
    if (!o.transcript.empty()) {
      judge_ = std::make_shared<judge::ReplayJudge>(judge::Transcript::load(o.transcript));
      return;
    }
    auto http = std::make_shared<judge::HttpJudge>(judge::HttpJudgeConfig::from_env());
    if (!record_path_.empty()) {
      recorder_ = std::make_shared<judge::RecordingJudge>(http);
      judge_ = recorder_;
    } else {
      judge_ = http;
    }
  }
  judge::JudgeClient& get() { return *judge_; }
  void finish() {
    if (recorder_) recorder_->transcript().save(record_path_);
  }

 private:
  std::string record_path_;
  std::shared_ptr<judge::JudgeClient> judge_;
  std::shared_ptr<judge::RecordingJudge> recorder_;
};

std::string data_path(const std::string& name) { return std::string(MUSE_DATA_DIR) + "/" + name; }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

service::Store* g_serving = nullptr;
service::ApiServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"muse: concept graphs, research-idea generation and interest ranking"};
  app.require_subcommand(1);

  // ingest
  std::string in_path, out_path;
  std::optional<int> cutoff;
  auto* ingest = app.add_subcommand("ingest", "Validate and normalize a paper corpus");
  ingest->add_option("--in", in_path, "Corpus JSONL")->required();
  ingest->add_option("--out", out_path, "Normalized corpus JSONL")->required();
  ingest->add_option("--cutoff", cutoff, "Data cutoff year");

  // concepts
  std::string corpus_path, lexicon_path, stopwords_path = data_path("stopwords.txt"),
                                         rules_path = data_path("rules.txt"),
                                         blocklist_path, whitelist_path, cache_path;
  int64_t min_df2 = 9, min_df3 = 6;
  bool no_llm = false;
  JudgeOptions judge_opts;
  auto* concepts_cmd = app.add_subcommand("concepts", "Build the concept lexicon");
  concepts_cmd->add_option("--corpus", corpus_path)->required();
  concepts_cmd->add_option("--out", lexicon_path)->required();
  concepts_cmd->add_option("--stopwords", stopwords_path);
  concepts_cmd->add_option("--rules", rules_path);
  concepts_cmd->add_option("--blocklist", blocklist_path);
  concepts_cmd->add_option("--whitelist", whitelist_path);
  concepts_cmd->add_option("--cache", cache_path, "Judge verdict cache (JSONL)");
  concepts_cmd->add_option("--min-df-2word", min_df2);
  concepts_cmd->add_option("--min-df-longer", min_df3);
  concepts_cmd->add_flag("--no-llm", no_llm, "Skip the judge filter stage");
  add_judge_options(concepts_cmd, judge_opts);

  // graph
  std::string graph_path;
  std::optional<int> year;
  auto* graph_cmd = app.add_subcommand("graph", "Knowledge graph operations");
  graph_cmd->require_subcommand(1);
  auto* graph_build = graph_cmd->add_subcommand("build", "Build the co-occurrence graph");
  graph_build->add_option("--corpus", corpus_path)->required();
  graph_build->add_option("--lexicon", lexicon_path)->required();
  graph_build->add_option("--out", graph_path)->required();
  auto* graph_stats = graph_cmd->add_subcommand("stats", "Summary of a graph slice");
  graph_stats->add_option("--graph", graph_path)->required();
  graph_stats->add_option("--year", year);
  auto* graph_csv = graph_cmd->add_subcommand("export-csv", "Per-concept CSV of a slice");
  graph_csv->add_option("--graph", graph_path)->required();
  graph_csv->add_option("--year", year);
  graph_csv->add_option("--out", out_path)->required();

  // profiles
  std::string researchers_path, profiles_path;
  int window = 2;
  bool no_refine = false;
  auto* profiles_cmd = app.add_subcommand("profiles", "Build researcher concept profiles");
  profiles_cmd->add_option("--corpus", corpus_path)->required();
  profiles_cmd->add_option("--lexicon", lexicon_path)->required();
  profiles_cmd->add_option("--researchers", researchers_path)->required();
  profiles_cmd->add_option("--out", profiles_path)->required();
  profiles_cmd->add_option("--window", window, "Years of recent papers");
  profiles_cmd->add_flag("--no-refine", no_refine, "Skip judge refinement");
  add_judge_options(profiles_cmd, judge_opts);

  // train-impact
  std::string impact_path;
  int horizon = 3;
  uint64_t seed = 1;
  auto* impact_cmd = app.add_subcommand("train-impact", "Train the impact proxy on a graph");
  impact_cmd->add_option("--graph", graph_path)->required();
  impact_cmd->add_option("--horizon", horizon);
  impact_cmd->add_option("--seed", seed);
  impact_cmd->add_option("--out", impact_path)->required();

  // ideate
  std::string ideas_path;
  int n_random = 0, n_high = 0, n_none = 0;
  auto* ideate = app.add_subcommand("ideate", "Generate research ideas");
  ideate->add_option("--profiles", profiles_path)->required();
  ideate->add_option("--graph", graph_path);
  ideate->add_option("--impact-model", impact_path);
  ideate->add_option("--random-pair", n_random);
  ideate->add_option("--high-impact-pair", n_high);
  ideate->add_option("--no-pair", n_none);
  ideate->add_option("--seed", seed);
  ideate->add_option("--out", ideas_path)->required();
  add_judge_options(ideate, judge_opts);

  // features / fig3
  auto* features_cmd = app.add_subcommand("features", "Feature matrix of the ideas' concept pairs");
  features_cmd->add_option("--ideas", ideas_path)->required();
  features_cmd->add_option("--out", out_path)->required();
  std::string store_dir;
  auto* fig3 = app.add_subcommand("fig3", "Binned interest-versus-feature curves");
  fig3->add_option("--store", store_dir)->required();
  fig3->add_option("--out", out_path)->required();

  // train / eval
  std::string data_path_opt, model_path, report_path;
  int epochs = 200;
  auto* train = app.add_subcommand("train", "Train the interest model");
  train->add_option("--data", data_path_opt, "Training CSV from export")->required();
  train->add_option("--out", model_path)->required();
  train->add_option("--epochs", epochs);
  train->add_option("--seed", seed);
  auto* eval = app.add_subcommand("eval", "Evaluate the interest model");
  eval->add_option("--data", data_path_opt)->required();
  eval->add_option("--model", model_path, "Score with this model; omit to run cross-validation");
  eval->add_option("--report", report_path)->required();
  eval->add_option("--seed", seed);

  // rank
  int n_matches = 0;
  double k_factor = tournament::kDefaultK;
  bool swiss = false;
  std::string log_path, curve_path;
  auto* rank = app.add_subcommand("rank", "Zero-shot ELO tournament over ideas");
  rank->add_option("--ideas", ideas_path)->required();
  rank->add_option("--matches", n_matches)->required();
  rank->add_option("--k", k_factor);
  rank->add_option("--seed", seed);
  rank->add_flag("--swiss", swiss);
  rank->add_option("--out", out_path, "Ranking CSV")->required();
  rank->add_option("--log", log_path, "Match log JSONL");
  rank->add_option("--auc-curve", curve_path, "AUC over matches CSV (needs rated ideas)");
  add_judge_options(rank, judge_opts);

  // store-facing commands
  std::string addr = "127.0.0.1:8080";
  auto* import = app.add_subcommand("import", "Add ideas to a rating store");
  import->add_option("--store", store_dir)->required();
  import->add_option("--ideas", ideas_path)->required();
  import->add_option("--model", model_path, "Interest model for serving order");
  auto* serve = app.add_subcommand("serve", "Run the rating HTTP API");
  serve->add_option("--store", store_dir)->required();
  serve->add_option("--addr", addr, "host:port");
  std::string sanity_path;
  auto* export_cmd = app.add_subcommand("export", "Export the labeled training set");
  export_cmd->add_option("--store", store_dir)->required();
  export_cmd->add_option("--out", out_path)->required();
  export_cmd->add_option("--sanity", sanity_path, "CSV of rated no-pair ideas");
  auto* stats_cmd = app.add_subcommand("stats", "Rating statistics");
  stats_cmd->add_option("--store", store_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      auto r = corpus::parse_corpus(in_path, cutoff);
      corpus::write_corpus(r.corpus, out_path);
      const auto& s = r.stats;
      print_json({{"lines", s.lines},
                  {"accepted", s.accepted},
                  {"malformed", s.malformed},
                  {"missing_required", s.missing_required},
                  {"out_of_range", s.out_of_range},
                  {"duplicates", s.duplicates},
                  {"missing_citations", s.missing_citations},
                  {"cutoff_year", r.corpus.cutoff_year()}});
    } else if (concepts_cmd->parsed()) {
      auto corpus = corpus::parse_corpus(corpus_path, std::nullopt).corpus;
      concepts::LexiconBuildOptions opts;
      opts.min_df_2word = min_df2;
      opts.min_df_longer = min_df3;
      opts.rules = concepts::RuleSet::load(rules_path);
      if (!blocklist_path.empty()) opts.rules.blocklist = read_word_list(blocklist_path);
      std::set<std::string> whitelist;
      if (!whitelist_path.empty()) whitelist = read_word_list(whitelist_path);
      concepts::VerdictCache cache;
      if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
        cache = concepts::VerdictCache::load(cache_path);
      }
      std::unique_ptr<JudgeHandle> judge;
      if (!no_llm) judge = std::make_unique<JudgeHandle>(judge_opts);
      auto build = concepts::build_lexicon(corpus, read_word_list(stopwords_path),
                                           judge ? &judge->get() : nullptr, &cache,
                                           whitelist, opts);
      if (judge) judge->finish();
      if (!cache_path.empty()) cache.save(cache_path);
      concepts::write_lexicon(build.lexicon, lexicon_path);
      json counts = build.lexicon.stage_counts.as_map();
      counts["removed_by_rule"] = build.cleanup.removed_by_rule;
      counts["undecided_batches"] = build.llm.undecided_batches;
      print_json(counts);
    } else if (graph_build->parsed()) {
      auto corpus = corpus::parse_corpus(corpus_path, std::nullopt).corpus;
      auto lexicon = concepts::read_lexicon(lexicon_path);
      auto usable = corpus::filter_usable(corpus, lexicon);
      auto g = kg::KnowledgeGraph::build(usable, lexicon);
      kg::write_graph(g, graph_path);
      print_json({{"papers", corpus.size()},
                  {"usable_papers", usable.size()},
                  {"vertices", g.vertex_count()},
                  {"edges", g.edge_count()},
                  {"cutoff_year", g.cutoff_year()}});
    } else if (graph_stats->parsed() || graph_csv->parsed()) {
      auto g = kg::read_graph(graph_path);
      const int y = year.value_or(g.cutoff_year());
      kg::GraphSnapshot snap(g, y);
      if (graph_csv->parsed()) {
        write_file_atomic(out_path, kg::node_stats_csv(snap));
      } else {
        size_t edges = 0, isolated = 0;
        for (kg::VertexId v = 0; v < g.vertex_count(); ++v) {
          edges += snap.degree(v);
          isolated += snap.degree(v) == 0;
        }
        print_json({{"year", y},
                    {"vertices", g.vertex_count()},
                    {"edges", edges / 2},
                    {"isolated_vertices", isolated}});
      }
    } else if (profiles_cmd->parsed()) {
      auto corpus = corpus::parse_corpus(corpus_path, std::nullopt).corpus;
      auto lexicon = concepts::read_lexicon(lexicon_path);
      auto inputs = profiles::read_researchers(read_file(researchers_path), corpus);
      std::unique_ptr<JudgeHandle> judge;
      if (!no_refine) judge = std::make_unique<JudgeHandle>(judge_opts);
      auto profiles = profiles::build_profiles(inputs, lexicon, judge ? &judge->get() : nullptr,
                                               {window, 3});
      if (judge) judge->finish();
      write_file_atomic(profiles_path, profiles::serialize_profiles(profiles));
      size_t fallbacks = 0;
      for (const auto& p : profiles) fallbacks += p.refinement_fallback;
      print_json({{"researchers", profiles.size()}, {"refinement_fallbacks", fallbacks}});
    } else if (impact_cmd->parsed()) {
      auto g = kg::read_graph(graph_path);
      models::ImpactOptions opts;
      opts.horizon_years = horizon;
      opts.seed = seed;
      auto m = models::train_impact_proxy(g, opts);
      write_file_atomic(impact_path, models::serialize_impact_model(m));
      print_json({{"horizon_years", m.horizon_years}, {"target_scale", m.target_scale}});
    } else if (ideate->parsed()) {
      auto profiles = profiles::parse_profiles(read_file(profiles_path));
      std::optional<kg::KnowledgeGraph> g;
      std::optional<features::FeatureExtractor> extractor;
      std::optional<models::ImpactModel> impact;
      if (!graph_path.empty()) {
        g = kg::read_graph(graph_path);
        extractor.emplace(*g, g->cutoff_year());
      }
      if (!impact_path.empty()) impact = models::parse_impact_model(read_file(impact_path));
      JudgeHandle judge(judge_opts);
      ideation::BatchOptions opts;
      opts.mix = {n_random, n_high, n_none};
      opts.seed = seed;
      auto ideas = ideation::generate_batch(
          profiles, opts, judge.get(),
          {extractor ? &*extractor : nullptr, impact ? &*impact : nullptr});
      judge.finish();
      write_file_atomic(ideas_path, ideation::serialize_ideas(ideas));
      size_t flagged = 0;
      for (const auto& i : ideas) flagged += i.parse_failed;
      print_json({{"ideas", ideas.size()}, {"parse_failed", flagged}});
    } else if (features_cmd->parsed()) {
      const auto& catalog = features::FeatureCatalog::standard();
      std::vector<features::FeatureVector> rows;
      for (const auto& i : ideation::parse_ideas(read_file(ideas_path))) {
        if (!i.concept_pair || i.features.size() != catalog.size()) continue;
        rows.push_back({i.concept_pair->first, i.concept_pair->second, i.features,
                        i.catalog_version});
      }
      write_file_atomic(out_path, features::feature_matrix_csv(catalog, rows));
      print_json({{"rows", rows.size()}, {"catalog_version", catalog.version}});
    } else if (fig3->parsed()) {
      service::Store store(store_dir);
      const auto& catalog = features::FeatureCatalog::standard();
      std::vector<std::vector<double>> columns(catalog.size());
      std::vector<double> interest, impact;
      for (const auto& i : store.ideas()) {
        if (!i.rating || i.features.size() != catalog.size()) continue;
        for (size_t f = 0; f < catalog.size(); ++f) columns[f].push_back(i.features[f]);
        interest.push_back(*i.rating);
        impact.push_back(i.impact.value_or(0.0));
      }
      auto curves = analysis::interest_curves(catalog.ids(), columns, interest, impact);
      write_file_atomic(out_path, analysis::interest_curves_csv(curves));
      print_json({{"rated_pairs", interest.size()}, {"curves", curves.size()}});
    } else if (train->parsed()) {
      auto data = service::parse_training_csv(read_file(data_path_opt));
      models::TrainConfig cfg;
      cfg.epochs = epochs;
      auto m = models::train_interest_model(data, features::top25_ids(),
                                            features::FeatureCatalog::standard().version, cfg,
                                            seed);
      models::write_model(m, model_path);
      print_json({{"examples", data.size()}, {"epochs", cfg.epochs}});
    } else if (eval->parsed()) {
      auto data = service::parse_training_csv(read_file(data_path_opt));
      std::vector<double> scores;
      std::vector<int> labels;
      json summary;
      std::vector<double> precision, hit, random_hit;
      if (!model_path.empty()) {
        auto m = models::read_model(model_path);
        for (const auto& e : data) {
          scores.push_back(m.predict(e.features));
          labels.push_back(e.label());
        }
        summary["auc"] = models::auc(scores, labels);
        const auto p = std::count(labels.begin(), labels.end(), 1);
        for (int n = 1; n <= 20 && n <= static_cast<int>(scores.size()); ++n) {
          precision.push_back(models::topn_precision(scores, labels, n));
          hit.push_back(models::topn_hit(scores, labels, n));
          random_hit.push_back(models::hypergeometric_hit_probability(
              static_cast<int64_t>(scores.size()), p, n));
        }
      } else {
        models::CvConfig cv;
        cv.seed = seed;
        auto r = models::mc_cross_validate(data, cv);
        scores = r.pooled_scores;
        labels = r.pooled_labels;
        precision = r.topn_precision;
        hit = r.topn_hit_model;
        random_hit = r.topn_hit_random;
        summary = {{"auc", r.mean_auc},
                   {"std_of_mean", r.std_of_mean},
                   {"iterations", r.iterations},
                   {"converged", r.converged}};
      }
      csv::Table t;
      t.header = {"section", "x", "y", "z"};
      for (const auto& pt : models::roc_curve(scores, labels)) {
        t.rows.push_back({"roc", csv::format_double(pt.fpr), csv::format_double(pt.tpr), ""});
      }
      t.rows.push_back({"auc", "", csv::format_double(summary["auc"].get<double>()), ""});
      for (size_t n = 0; n < precision.size(); ++n) {
        t.rows.push_back({"topn_precision", std::to_string(n + 1),
                          csv::format_double(precision[n]), ""});
        t.rows.push_back({"topn_hit", std::to_string(n + 1), csv::format_double(hit[n]),
                          csv::format_double(random_hit[n])});
      }
      write_file_atomic(report_path, csv::write(t));
      print_json(summary);
    } else if (rank->parsed()) {
      auto ideas = ideation::parse_ideas(read_file(ideas_path));
      JudgeHandle judge(judge_opts);
      tournament::TournamentOptions opts;
      opts.n_matches = n_matches;
      opts.k = k_factor;
      opts.seed = seed;
      opts.swiss = swiss;
      auto result = tournament::run_tournament(ideas, judge.get(), opts);
      judge.finish();
      write_file_atomic(out_path, tournament::ranking_csv(result.table));
      if (!log_path.empty()) {
        write_file_atomic(log_path, tournament::serialize_matches(result.table.history()));
      }
      json summary = {{"matches", result.table.history().size()},
                      {"discarded", result.discarded},
                      {"k_factor", result.table.k_factor()}};
      std::map<std::string, int> labels;
      for (const auto& i : ideas) {
        if (i.rating) labels[i.idea_id] = *i.rating >= 4;
      }
      bool both = false;
      for (const auto& [_, l] : labels) both |= l != labels.begin()->second;
      if (both) {
        summary["ranking_auc"] = tournament::ranking_auc(result.table, labels);
        if (!curve_path.empty()) {
          std::vector<size_t> marks;
          for (size_t m = 0; m <= result.table.history().size(); m += std::max<size_t>(1, ideas.size())) {
            marks.push_back(m);
          }
          csv::Table t;
          t.header = {"matches", "auc"};
          for (auto [m, a] : tournament::auc_over_matches(result.table, labels, marks)) {
            t.rows.push_back({std::to_string(m), csv::format_double(a)});
          }
          write_file_atomic(curve_path, csv::write(t));
        }
      }
      print_json(summary);
    } else if (import->parsed()) {
      service::Store store(store_dir);
      auto ideas = ideation::parse_ideas(read_file(ideas_path));
      store.add_ideas(ideas);
      if (!model_path.empty()) store.set_model(models::read_model(model_path));
      store.write_snapshot();
      print_json({{"imported", ideas.size()}});
    } else if (serve->parsed()) {
      const auto colon = addr.rfind(':');
      if (colon == std::string::npos) throw ConfigError("--addr must be host:port");
      service::Store store(store_dir);
      service::ApiServer server(store);
      const int port = server.bind(addr.substr(0, colon), std::stoi(addr.substr(colon + 1)));
      if (port < 0) throw ConfigError("cannot bind " + addr);
      g_serving = &store;
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << addr.substr(0, colon) << ":" << port << "\n";
      server.listen();
      store.write_snapshot();
    } else if (export_cmd->parsed()) {
      service::Store store(store_dir);
      auto r = store.export_training_set();
      write_file_atomic(out_path, r.training_csv);
      if (!sanity_path.empty()) write_file_atomic(sanity_path, r.sanity_csv);
      print_json({{"training_rows", r.training_rows},
                  {"sanity_rows", r.sanity_rows},
                  {"skipped", r.skipped}});
    } else if (stats_cmd->parsed()) {
      service::Store store(store_dir);
      print_json(store.stats());
    }
  } catch (const muse::Error& e) {
    std::cerr << "muse: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "muse: unexpected error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
