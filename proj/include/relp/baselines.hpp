#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relp/classifier.hpp"
#include "relp/corpus.hpp"
#include "relp/features.hpp"

namespace relp {

// Partisan hashtags marking training examples for the hashtag baseline.
struct HashtagSeeds {
  std::set<std::string> for_tags;
  std::set<std::string> against_tags;

  bool contains(const std::string& tag) const {
    return for_tags.count(tag) > 0 || against_tags.count(tag) > 0;
  }
};

// Headerless CSV tag,stance; tags are lowercased and must start with '#'.
inline HashtagSeeds load_hashtag_seeds(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open hashtag file: " + path);
  HashtagSeeds tags;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected tag,stance");
    std::string tag = line.substr(0, comma);
    for (char& c : tag) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (tag.empty() || tag[0] != '#')
      throw std::runtime_error("line " + std::to_string(lineno) + ": hashtag must start with '#'");
    Stance stance;
    try {
      stance = stance_from_string(line.substr(comma + 1));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
    const auto& other = stance == Stance::For ? tags.against_tags : tags.for_tags;
    if (other.count(tag)) throw std::runtime_error("hashtag '" + tag + "' listed on both sides");
    (stance == Stance::For ? tags.for_tags : tags.against_tags).insert(tag);
  }
  if (tags.for_tags.empty() || tags.against_tags.empty())
    throw std::runtime_error("hashtag seeds must cover both stances");
  return tags;
}

// B1: naive Bayes trained on the seed users' original tweets only.
inline MNBModel train_b1(const Corpus& corpus, const SeedSet& seeds, double alpha = 1.0) {
  std::vector<LabeledDoc> docs;
  for (const Tweet& t : corpus.tweets()) {
    if (t.is_retweet()) continue;
    if (auto stance = seeds.stance_of(t.user_id))
      docs.emplace_back(extract_features(t.text), *stance);
  }
  return train(docs, alpha);
}

// B2 training set: tweets carrying tags from exactly one side, labeled by that
// side, with every seed tag removed from the tokens before feature extraction
// so the label keys never appear in the features.
inline std::vector<LabeledDoc> build_b2_training(const Corpus& corpus, const HashtagSeeds& tags) {
  std::vector<LabeledDoc> docs;
  std::array<std::size_t, 2> per_class{};
  for (const Tweet& t : corpus.tweets()) {
    const TokenSequence tokens = tokenize(t.text);
    bool has_for = false;
    bool has_against = false;
    for (const std::string& tok : tokens) {
      if (tags.for_tags.count(tok)) has_for = true;
      if (tags.against_tags.count(tok)) has_against = true;
    }
    if (has_for == has_against) continue;  // untagged, or tags from both sides
    TokenSequence kept;
    kept.reserve(tokens.size());
    for (const std::string& tok : tokens)
      if (!tags.contains(tok)) kept.push_back(tok);
    const Stance stance = has_for ? Stance::For : Stance::Against;
    ++per_class[static_cast<std::size_t>(stance_index(stance))];
    docs.emplace_back(extract_ngrams(kept), stance);
  }
  if (per_class[0] == 0 || per_class[1] == 0)
    throw std::runtime_error("hashtag seeds matched no tweets");
  return docs;
}

inline MNBModel train_b2(const Corpus& corpus, const HashtagSeeds& tags, double alpha = 1.0) {
  return train(build_b2_training(corpus, tags), alpha);
}

struct KMeansConfig {
  int max_iterations = 100;  // k is fixed at 2; distance is cosine over unit vectors
};

struct KMeansResult {
  std::map<std::string, Stance> labels;
  std::vector<double> objective_history;  // summed cosine distance per assignment pass
  int iterations = 0;
};

namespace detail {

using SparseVec = std::vector<std::pair<std::string, double>>;  // sorted by key

inline SparseVec unit_vector(const FeatureVector& fv) {
  double norm_sq = 0.0;
  for (const auto& [w, count] : fv) norm_sq += static_cast<double>(count) * count;
  SparseVec v;
  v.reserve(fv.size());
  const double norm = std::sqrt(norm_sq);
  for (const auto& [w, count] : fv) v.emplace_back(w, count / norm);
  return v;  // empty input stays the zero vector
}

inline double sparse_dot(const SparseVec& a, const SparseVec& b) {
  // tweet vectors are tiny and centroids are wide, so probe the larger side
  // by binary search from the smaller one
  const SparseVec& small = a.size() <= b.size() ? a : b;
  const SparseVec& large = a.size() <= b.size() ? b : a;
  double dot = 0.0;
  auto it = large.begin();
  for (const auto& [key, value] : small) {
    it = std::lower_bound(it, large.end(), key,
                          [](const auto& entry, const std::string& k) { return entry.first < k; });
    if (it == large.end()) break;
    if (it->first == key) dot += value * it->second;
  }
  return dot;
}

inline double sparse_norm(const SparseVec& v) {
  double s = 0.0;
  for (const auto& [w, x] : v) s += x * x;
  return std::sqrt(s);
}

// 1 - cos(v, c); a zero vector on either side counts as distance 1.
inline double cosine_distance(const SparseVec& v, const SparseVec& centroid) {
  const double nv = sparse_norm(v);
  const double nc = sparse_norm(centroid);
  if (nv == 0.0 || nc == 0.0) return 1.0;
  return 1.0 - sparse_dot(v, centroid) / (nv * nc);
}

}  // namespace detail

// B3: two-means over unit-length feature vectors of every tweet. Initial
// centroids are the means of each side's seed-tweet vectors and clusters keep
// the stance of the seed centroid they started from. Lloyd iterations stop
// when assignments stabilize; an empty cluster keeps its previous centroid.
// Distance ties assign to the Against cluster. Fully deterministic.
inline KMeansResult run_b3(const Corpus& corpus, const SeedSet& seeds, const KMeansConfig& cfg = {}) {
  const auto& tweets = corpus.tweets();
  std::vector<detail::SparseVec> vecs;
  vecs.reserve(tweets.size());
  for (const Tweet& t : tweets) vecs.push_back(detail::unit_vector(extract_features(t.text)));

  // seed centroids: mean of each side's seed users' original tweet vectors
  std::array<std::map<std::string, double>, 2> sums;
  std::array<std::size_t, 2> seed_tweets{};
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const Tweet& t = tweets[i];
    if (t.is_retweet()) continue;
    auto stance = seeds.stance_of(t.user_id);
    if (!stance) continue;
    const auto c = static_cast<std::size_t>(stance_index(*stance));
    ++seed_tweets[c];
    for (const auto& [w, x] : vecs[i]) sums[c][w] += x;
  }
  for (int c = 0; c < 2; ++c)
    if (seed_tweets[static_cast<std::size_t>(c)] == 0)
      throw std::runtime_error(std::string("no seed tweets for stance '") +
                               to_string(stance_at(c)) + "'");

  std::array<detail::SparseVec, 2> centroids;
  for (std::size_t c = 0; c < 2; ++c) {
    centroids[c].reserve(sums[c].size());
    for (const auto& [w, s] : sums[c])
      centroids[c].emplace_back(w, s / static_cast<double>(seed_tweets[c]));
  }

  KMeansResult result;
  std::vector<int> assignment(tweets.size(), -1);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    double objective = 0.0;
    bool changed = false;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      const double d0 = detail::cosine_distance(vecs[i], centroids[0]);
      const double d1 = detail::cosine_distance(vecs[i], centroids[1]);
      const int cluster = d0 < d1 ? 0 : 1;
      objective += cluster == 0 ? d0 : d1;
      if (assignment[i] != cluster) {
        assignment[i] = cluster;
        changed = true;
      }
    }
    result.objective_history.push_back(objective);
    ++result.iterations;
    if (!changed) break;

    std::array<std::map<std::string, double>, 2> acc;
    std::array<std::size_t, 2> members{};
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      const auto c = static_cast<std::size_t>(assignment[i]);
      ++members[c];
      for (const auto& [w, x] : vecs[i]) acc[c][w] += x;
    }
    for (std::size_t c = 0; c < 2; ++c) {
      if (members[c] == 0) continue;  // empty cluster keeps its centroid
      centroids[c].clear();
      centroids[c].reserve(acc[c].size());
      for (const auto& [w, s] : acc[c])
        centroids[c].emplace_back(w, s / static_cast<double>(members[c]));
    }
  }

  for (std::size_t i = 0; i < tweets.size(); ++i)
    result.labels.emplace(tweets[i].id, stance_at(assignment[i]));
  return result;
}

}  // namespace relp
