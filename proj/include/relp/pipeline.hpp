#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "relp/baselines.hpp"
#include "relp/classifier.hpp"
#include "relp/cooccurrence.hpp"
#include "relp/corpus.hpp"
#include "relp/evaluation.hpp"
#include "relp/features.hpp"
#include "relp/propagation.hpp"

namespace relp {

struct PipelineOptions {
  int min_tweets_per_user = 2;
  int n_buckets = 10;
  double alpha = 1.0;
  int kmeans_max_iterations = 100;
  int threads = 1;
};

struct RelpRun {
  Corpus corpus;  // after filtering
  CoocMatrix matrix;
  std::vector<TraceEvent> trace;
  FinalLabeling propagated;
  MNBModel model;
  std::vector<UserStanceResult> users;
  std::map<std::string, Stance> user_stances;
};

// Training documents for the supervised stage: features of every tweet that
// propagation labeled, tagged with its propagated stance.
inline std::vector<LabeledDoc> propagated_training_docs(const Corpus& corpus,
                                                        const FinalLabeling& labeling) {
  std::vector<LabeledDoc> docs;
  for (const Tweet& t : corpus.tweets()) {
    auto it = labeling.labeled.find(t.id);
    if (it != labeling.labeled.end()) docs.emplace_back(extract_features(t.text), it->second);
  }
  return docs;
}

// Full flow: filter, build the matrix, propagate from the seeds, train the
// classifier on the propagated labels, and label every user.
inline RelpRun run_relp(const Corpus& raw, const SeedSet& seeds, const PipelineOptions& opt = {}) {
  RelpRun run;
  run.corpus = filter_corpus(raw, opt.min_tweets_per_user);
  run.matrix = build_matrix(run.corpus, opt.threads);
  LabelTable table = init_labels(run.corpus, seeds);
  table = propagate(run.matrix, std::move(table), PropagationConfig{opt.n_buckets, true}, &run.trace);
  run.propagated = finalize(table, run.corpus);
  run.model = train(propagated_training_docs(run.corpus, run.propagated), opt.alpha);
  run.users = classify_users(run.corpus, run.propagated, run.model, opt.threads);
  run.user_stances = user_stance_map(run.users);
  return run;
}

// User stances from a model alone (used by B1 and B2): every tweet predicted,
// then the same per-user vote aggregation as the main flow.
inline std::map<std::string, Stance> users_from_model(const Corpus& corpus, const MNBModel& model,
                                                      int threads = 1) {
  return user_stance_map(classify_users(corpus, FinalLabeling{}, model, threads));
}

// Majority vote over per-tweet stances (used by B3); ties go to Against.
inline std::map<std::string, Stance> aggregate_tweet_labels(
    const Corpus& corpus, const std::map<std::string, Stance>& tweet_labels) {
  std::map<std::string, Stance> out;
  for (const auto& [user, ids] : corpus.users()) {
    int votes[2] = {0, 0};
    for (const std::string& id : ids) {
      auto it = tweet_labels.find(id);
      if (it != tweet_labels.end()) ++votes[stance_index(it->second)];
    }
    out.emplace(user, votes[0] > votes[1] ? Stance::For : Stance::Against);
  }
  return out;
}

}  // namespace relp
