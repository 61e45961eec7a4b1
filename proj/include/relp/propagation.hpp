#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "relp/cooccurrence.hpp"
#include "relp/corpus.hpp"

namespace relp {

// Per-tweet (for, against) mass; both fields stay within [0, 1].
struct LabelState {
  double for_value = 0.0;
  double against_value = 0.0;

  double max_value() const { return std::max(for_value, against_value); }

  friend bool operator==(const LabelState&, const LabelState&) = default;
};

struct PropagationConfig {
  int n_buckets = 10;  // resolution of the selection hash
  bool clamp = true;   // cap each field at 1.0 after every update
};

// Tweets still accumulating mass vs tweets whose labels are frozen. The two
// key sets are disjoint and a finalized entry never changes. Pinned tweets
// (the seed-initialized ones) never receive incoming mass.
class LabelTable {
 public:
  const std::map<std::string, LabelState>& active() const { return active_; }
  const std::map<std::string, LabelState>& finalized() const { return finalized_; }
  const std::set<std::string>& pinned() const { return pinned_; }

  void insert_active(std::string tweet_id, LabelState state, bool pin = false) {
    if (pin) pinned_.insert(tweet_id);
    active_.emplace(std::move(tweet_id), state);
  }

  bool is_pinned(const std::string& tweet_id) const { return pinned_.count(tweet_id) > 0; }

  LabelState* find_active(const std::string& tweet_id) {
    auto it = active_.find(tweet_id);
    return it == active_.end() ? nullptr : &it->second;
  }

  void move_to_finalized(const std::string& tweet_id) {
    auto it = active_.find(tweet_id);
    if (it == active_.end()) throw std::logic_error("tweet not active: " + tweet_id);
    finalized_.emplace(tweet_id, it->second);
    active_.erase(it);
  }

 private:
  std::map<std::string, LabelState> active_;
  std::map<std::string, LabelState> finalized_;
  std::set<std::string> pinned_;
};

// Discrete outcome: stances for the tweets propagation decided, everything
// else (never selected, or an exact tie) left to the supervised stage.
struct FinalLabeling {
  std::map<std::string, Stance> labeled;
  std::set<std::string> unlabeled;
};

// One record per finalization, in order.
struct TraceEvent {
  int iteration = 0;
  std::string tweet_id;
  LabelState state;
};

// Seed users' original tweets start at full mass for their stance and are
// pinned so incoming cross-mass can never tie them away from it; everything
// else starts at zero. Retweets by seed users are plain edges, not labels.
inline LabelTable init_labels(const Corpus& corpus, const SeedSet& seeds) {
  if (corpus.empty()) throw std::invalid_argument("corpus is empty");
  LabelTable table;
  bool any_seed_tweet = false;
  for (const Tweet& t : corpus.tweets()) {
    LabelState state;
    bool pin = false;
    if (!t.is_retweet()) {
      if (auto stance = seeds.stance_of(t.user_id)) {
        state = *stance == Stance::For ? LabelState{1.0, 0.0} : LabelState{0.0, 1.0};
        any_seed_tweet = true;
        pin = true;
      }
    }
    table.insert_active(t.id, state, pin);
  }
  if (!any_seed_tweet) throw std::runtime_error("no seed tweets present");
  return table;
}

// h(v) = floor(v * n) after clamping v into [0, 1]; the result is in [0, n].
inline int hash_bucket(double v, int n) {
  v = std::clamp(v, 0.0, 1.0);
  return static_cast<int>(std::floor(v * n));
}

// Returns the active tweets in the highest occupied bucket of
// h(max(for_value, against_value)). Bucket 0 is never returned: once the
// untouched zero-mass tweets are all that remain, selection ends the loop.
inline std::set<std::string> seed_selection(const LabelTable& table, const PropagationConfig& cfg) {
  int best = 0;
  for (const auto& [id, state] : table.active())
    best = std::max(best, hash_bucket(state.max_value(), cfg.n_buckets));
  std::set<std::string> out;
  if (best <= 0) return out;
  for (const auto& [id, state] : table.active())
    if (hash_bucket(state.max_value(), cfg.n_buckets) == best) out.insert(id);
  return out;
}

// Outer propagation loop: repeatedly select the top bucket, push each selected
// tweet's mass to its co-occurring active neighbors weighted by M, and freeze
// the selected tweet. Batch members are processed in ascending id order and
// pushes land only on still-active, unpinned tweets, so each tweet pushes
// exactly once, finalized labels never change, and seed tweets keep their
// stance. Terminates after at most one iteration per tweet.
inline LabelTable propagate(const CoocMatrix& matrix, LabelTable table,
                            const PropagationConfig& cfg,
                            std::vector<TraceEvent>* trace = nullptr) {
  int iteration = 0;
  for (;;) {
    const std::set<std::string> batch = seed_selection(table, cfg);
    if (batch.empty()) break;
    ++iteration;
    for (const std::string& t_i : batch) {
      // live value: earlier members of this batch may already have pushed here
      const LabelState mass = *table.find_active(t_i);
      for (const auto& [t_j, weight] : matrix.row(t_i)) {
        if (table.is_pinned(t_j)) continue;  // seed labels stay exactly as given
        if (LabelState* s = table.find_active(t_j)) {
          s->for_value += mass.for_value * weight;
          s->against_value += mass.against_value * weight;
          if (cfg.clamp) {
            s->for_value = std::min(s->for_value, 1.0);
            s->against_value = std::min(s->against_value, 1.0);
          }
        }
      }
      table.move_to_finalized(t_i);
      if (trace) trace->push_back({iteration, t_i, table.finalized().at(t_i)});
    }
  }
  return table;
}

// Labels each finalized tweet by whichever field is strictly higher; exact
// ties and never-finalized tweets are unlabeled. Covers the corpus exactly.
inline FinalLabeling finalize(const LabelTable& table, const Corpus& corpus) {
  FinalLabeling out;
  for (const Tweet& t : corpus.tweets()) {
    auto it = table.finalized().find(t.id);
    if (it != table.finalized().end()) {
      const LabelState& s = it->second;
      if (s.for_value > s.against_value) {
        out.labeled.emplace(t.id, Stance::For);
        continue;
      }
      if (s.against_value > s.for_value) {
        out.labeled.emplace(t.id, Stance::Against);
        continue;
      }
    }
    out.unlabeled.insert(t.id);
  }
  return out;
}

}  // namespace relp
