#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relp/corpus.hpp"
#include "relp/detail/format.hpp"
#include "relp/detail/parallel.hpp"
#include "relp/features.hpp"
#include "relp/propagation.hpp"

namespace relp {

using LabeledDoc = std::pair<FeatureVector, Stance>;

// Multinomial naive Bayes over n-gram counts with Laplace smoothing. The
// likelihood table covers the full training vocabulary for both classes, so
// per-class likelihoods exponentiate and sum to one.
struct MNBModel {
  double alpha = 1.0;
  std::array<double, 2> class_log_prior{};  // indexed by stance_index
  std::map<std::string, std::array<double, 2>> feature_log_likelihood;

  bool in_vocabulary(const std::string& ngram) const {
    return feature_log_likelihood.count(ngram) > 0;
  }

  std::size_t vocabulary_size() const { return feature_log_likelihood.size(); }
};

// prior(c) = docs_c / docs, P(w|c) = (count(w,c) + alpha) / (tokens_c + alpha|V|).
inline MNBModel train(const std::vector<LabeledDoc>& docs, double alpha = 1.0) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  std::array<std::size_t, 2> doc_count{};
  std::array<long long, 2> token_total{};
  std::map<std::string, std::array<long long, 2>> word_count;
  for (const auto& [fv, stance] : docs) {
    const int c = stance_index(stance);
    ++doc_count[c];
    for (const auto& [w, count] : fv) {
      word_count[w][static_cast<std::size_t>(c)] += count;
      token_total[c] += count;
    }
  }
  if (doc_count[0] == 0 || doc_count[1] == 0) throw std::runtime_error("degenerate training set");

  MNBModel model;
  model.alpha = alpha;
  const double total_docs = static_cast<double>(doc_count[0] + doc_count[1]);
  for (int c = 0; c < 2; ++c)
    model.class_log_prior[c] = std::log(static_cast<double>(doc_count[c]) / total_docs);
  const double vocab = static_cast<double>(word_count.size());
  for (const auto& [w, counts] : word_count) {
    std::array<double, 2> ll{};
    for (int c = 0; c < 2; ++c)
      ll[c] = std::log((static_cast<double>(counts[c]) + alpha) /
                       (static_cast<double>(token_total[c]) + alpha * vocab));
    model.feature_log_likelihood.emplace(w, ll);
  }
  return model;
}

struct Prediction {
  Stance stance = Stance::Against;
  std::array<double, 2> log_scores{};

  // log_score(For) - log_score(Against); positive favors For
  double margin() const { return log_scores[0] - log_scores[1]; }
};

// Scores both classes over the in-vocabulary n-grams; out-of-vocabulary
// n-grams are ignored. Each occurrence contributes one log term and the
// per-class terms are sorted before summing, so mirrored inputs produce
// bitwise-equal scores and exact ties resolve consistently; ties go to
// Against.
inline Prediction predict(const MNBModel& model, const FeatureVector& fv) {
  std::array<std::vector<double>, 2> terms;
  for (int c = 0; c < 2; ++c) terms[c].push_back(model.class_log_prior[c]);
  for (const auto& [w, count] : fv) {
    auto it = model.feature_log_likelihood.find(w);
    if (it == model.feature_log_likelihood.end()) continue;
    for (int c = 0; c < 2; ++c)
      for (int rep = 0; rep < count; ++rep) terms[c].push_back(it->second[c]);
  }
  Prediction p;
  for (int c = 0; c < 2; ++c) {
    std::sort(terms[c].begin(), terms[c].end());
    double sum = 0.0;
    for (double t : terms[c]) sum += t;
    p.log_scores[c] = sum;
  }
  p.stance = p.log_scores[0] > p.log_scores[1] ? Stance::For : Stance::Against;
  return p;
}

enum class LabelSource { Propagated, Classified, Mixed };

inline const char* to_string(LabelSource s) {
  switch (s) {
    case LabelSource::Propagated: return "propagated";
    case LabelSource::Classified: return "classified";
    default: return "mixed";
  }
}

struct UserStanceResult {
  std::string user_id;
  Stance stance = Stance::Against;
  std::array<int, 2> tweet_votes{};  // indexed by stance_index
  LabelSource source = LabelSource::Classified;
};

// Labels every tweet — the propagated stance where available, the model's
// prediction otherwise — then aggregates per user by majority vote. Vote ties
// fall back to the summed log-score margins, where a propagated tweet counts
// as ±1; a zero margin sum goes to Against.
inline std::vector<UserStanceResult> classify_users(const Corpus& corpus,
                                                    const FinalLabeling& final_labels,
                                                    const MNBModel& model, int threads = 1) {
  struct TweetLabel {
    Stance stance = Stance::Against;
    double margin = 0.0;
    bool propagated = false;
  };
  const auto& tweets = corpus.tweets();
  std::vector<TweetLabel> labels(tweets.size());
  detail::parallel_for(tweets.size(), threads, [&](std::size_t i) {
    const Tweet& t = tweets[i];
    auto it = final_labels.labeled.find(t.id);
    if (it != final_labels.labeled.end()) {
      labels[i] = {it->second, it->second == Stance::For ? 1.0 : -1.0, true};
    } else {
      const Prediction p = predict(model, extract_features(t.text));
      labels[i] = {p.stance, p.margin(), false};
    }
  });

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < tweets.size(); ++i) position.emplace(tweets[i].id, i);

  std::vector<UserStanceResult> out;
  out.reserve(corpus.users().size());
  for (const auto& [user, ids] : corpus.users()) {
    UserStanceResult r;
    r.user_id = user;
    double margin_sum = 0.0;
    int propagated = 0;
    int classified = 0;
    for (const std::string& id : ids) {
      const TweetLabel& tl = labels[position.at(id)];
      ++r.tweet_votes[stance_index(tl.stance)];
      margin_sum += tl.margin;
      ++(tl.propagated ? propagated : classified);
    }
    if (r.tweet_votes[0] != r.tweet_votes[1])
      r.stance = r.tweet_votes[0] > r.tweet_votes[1] ? Stance::For : Stance::Against;
    else
      r.stance = margin_sum > 0.0 ? Stance::For : Stance::Against;
    r.source = classified == 0  ? LabelSource::Propagated
               : propagated == 0 ? LabelSource::Classified
                                 : LabelSource::Mixed;
    out.push_back(std::move(r));
  }
  return out;
}

inline std::map<std::string, Stance> user_stance_map(const std::vector<UserStanceResult>& results) {
  std::map<std::string, Stance> out;
  for (const UserStanceResult& r : results) out.emplace(r.user_id, r.stance);
  return out;
}

// Prior header followed by one line per (class, ngram), sorted; fixed six
// decimals so dumps diff cleanly.
inline void dump_model(const MNBModel& model, std::ostream& out) {
  out << "alpha\t" << detail::format_fixed(model.alpha, 6) << '\n';
  for (const char* cls : {"against", "for"}) {
    const int c = cls[0] == 'f' ? 0 : 1;
    out << "prior\t" << cls << '\t' << detail::format_fixed(model.class_log_prior[c], 6) << '\n';
  }
  for (const char* cls : {"against", "for"}) {
    const int c = cls[0] == 'f' ? 0 : 1;
    for (const auto& [w, ll] : model.feature_log_likelihood)
      out << cls << '\t' << w << '\t' << detail::format_fixed(ll[c], 6) << '\n';
  }
}

}  // namespace relp
