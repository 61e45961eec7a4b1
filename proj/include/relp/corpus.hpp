#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace relp {

// Binary debate position. Serialized as "for" / "against" everywhere.
enum class Stance { For, Against };

inline const char* to_string(Stance s) { return s == Stance::For ? "for" : "against"; }

inline Stance stance_from_string(const std::string& s) {
  if (s == "for") return Stance::For;
  if (s == "against") return Stance::Against;
  throw std::runtime_error("unknown stance '" + s + "'");
}

// Index used for stance-keyed arrays: For = 0, Against = 1.
inline int stance_index(Stance s) { return s == Stance::For ? 0 : 1; }

inline Stance stance_at(int index) { return index == 0 ? Stance::For : Stance::Against; }

// One post. A tweet with retweet_of set is a retweet of that id; the referent
// may be absent from the corpus until filtering drops such dangling links.
struct Tweet {
  std::string id;
  std::string user_id;
  std::string text;
  std::optional<std::string> retweet_of;
  std::int64_t timestamp = 0;

  bool is_retweet() const { return retweet_of.has_value(); }

  friend bool operator==(const Tweet&, const Tweet&) = default;
};

// Immutable tweet collection plus derived indexes. Input order is preserved;
// the indexes are rebuilt from the tweet list on construction.
class Corpus {
 public:
  Corpus() = default;

  explicit Corpus(std::vector<Tweet> tweets) : tweets_(std::move(tweets)) {
    for (std::size_t i = 0; i < tweets_.size(); ++i) {
      const Tweet& t = tweets_[i];
      if (!by_id_.emplace(t.id, i).second)
        throw std::invalid_argument("duplicate tweet id '" + t.id + "'");
      users_[t.user_id].push_back(t.id);
      // a user counts once per original even if they retweeted it repeatedly
      if (t.retweet_of) retweeters_[*t.retweet_of].insert(t.user_id);
    }
  }

  const std::vector<Tweet>& tweets() const { return tweets_; }
  std::size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }

  const Tweet* find(const std::string& tweet_id) const {
    auto it = by_id_.find(tweet_id);
    return it == by_id_.end() ? nullptr : &tweets_[it->second];
  }

  // user_id -> that user's tweet ids in input order
  const std::map<std::string, std::vector<std::string>>& users() const { return users_; }

  // users who retweeted the given tweet id (empty if nobody did)
  const std::set<std::string>& retweeters(const std::string& tweet_id) const {
    static const std::set<std::string> kEmpty;
    auto it = retweeters_.find(tweet_id);
    return it == retweeters_.end() ? kEmpty : it->second;
  }

  const std::map<std::string, std::set<std::string>>& retweeter_index() const {
    return retweeters_;
  }

 private:
  std::vector<Tweet> tweets_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::vector<std::string>> users_;
  std::map<std::string, std::set<std::string>> retweeters_;
};

enum class ParseMode { Strict, Lenient };

// Reads a line-delimited JSON corpus: one object per line with fields
// id, user_id, text (strings), timestamp (integer) and optional retweet_of.
// Unknown fields are ignored. Strict mode fails on the first malformed line;
// lenient mode skips it and reports the count through skipped_lines.
inline Corpus load_corpus(const std::string& path, ParseMode mode = ParseMode::Strict,
                          std::size_t* skipped_lines = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);

  std::vector<Tweet> tweets;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t lineno = 0;
  std::size_t skipped = 0;

  auto malformed = [&](const std::string& why) {
    if (mode == ParseMode::Strict)
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + why);
    ++skipped;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      malformed("empty line");
      continue;
    }
    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      malformed("invalid JSON object");
      continue;
    }

    Tweet t;
    bool ok = true;
    auto require_string = [&](const char* field, std::string& out) {
      auto it = j.find(field);
      if (it == j.end()) {
        malformed(std::string("missing field ") + field);
        ok = false;
      } else if (!it->is_string()) {
        malformed(std::string("field ") + field + " must be a string");
        ok = false;
      } else {
        out = it->get<std::string>();
      }
    };
    require_string("id", t.id);
    if (ok) require_string("user_id", t.user_id);
    if (ok) require_string("text", t.text);
    if (ok) {
      auto it = j.find("timestamp");
      if (it == j.end()) {
        malformed("missing field timestamp");
        ok = false;
      } else if (!it->is_number_integer()) {
        malformed("field timestamp must be an integer");
        ok = false;
      } else {
        t.timestamp = it->get<std::int64_t>();
      }
    }
    if (ok) {
      auto it = j.find("retweet_of");
      if (it != j.end() && !it->is_null()) {
        if (!it->is_string()) {
          malformed("field retweet_of must be a string");
          ok = false;
        } else {
          t.retweet_of = it->get<std::string>();
        }
      }
    }
    if (ok && !seen_ids.insert(t.id).second) {
      malformed("duplicate tweet id '" + t.id + "'");
      ok = false;
    }
    if (ok) tweets.push_back(std::move(t));
  }

  if (skipped_lines) *skipped_lines = skipped;
  return Corpus(std::move(tweets));
}

// Writes the corpus back in the same line-delimited format with a fixed key
// order, so load -> save -> load preserves every retained field.
inline void save_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Tweet& t : corpus.tweets()) {
    nlohmann::ordered_json j;
    j["id"] = t.id;
    j["user_id"] = t.user_id;
    j["text"] = t.text;
    if (t.retweet_of) j["retweet_of"] = *t.retweet_of;
    j["timestamp"] = t.timestamp;
    out << j.dump() << '\n';
  }
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  save_corpus(corpus, out);
}

// Caller-supplied pre-filter (language checks and similar live outside this
// library): keeps the tweets the predicate accepts and rebuilds the indexes.
template <typename KeepFn>
inline Corpus filter_tweets(const Corpus& corpus, KeepFn&& keep) {
  std::vector<Tweet> kept;
  kept.reserve(corpus.size());
  for (const Tweet& t : corpus.tweets())
    if (keep(t)) kept.push_back(t);
  return Corpus(std::move(kept));
}

// Keeps tweets of users with at least min_tweets_per_user tweets and drops
// retweets whose referent is gone. The two prunes feed each other (dropping a
// user can dangle a retweet, dropping a retweet can push its author below the
// threshold), so they run to a fixpoint; the result is stable under
// re-filtering with the same threshold.
inline Corpus filter_corpus(const Corpus& corpus, int min_tweets_per_user) {
  if (min_tweets_per_user < 1) throw std::invalid_argument("min_tweets_per_user must be >= 1");
  std::vector<Tweet> kept = corpus.tweets();
  for (bool changed = true; changed;) {
    changed = false;

    std::map<std::string, int> per_user;
    for (const Tweet& t : kept) ++per_user[t.user_id];
    std::vector<Tweet> next;
    next.reserve(kept.size());
    for (Tweet& t : kept)
      if (per_user[t.user_id] >= min_tweets_per_user) next.push_back(std::move(t));
    if (next.size() != kept.size()) changed = true;
    kept = std::move(next);

    std::set<std::string> present;
    for (const Tweet& t : kept) present.insert(t.id);
    next.clear();
    next.reserve(kept.size());
    for (Tweet& t : kept)
      if (!t.retweet_of || present.count(*t.retweet_of)) next.push_back(std::move(t));
    if (next.size() != kept.size()) changed = true;
    kept = std::move(next);
  }
  return Corpus(std::move(kept));
}

// Hand-labeled users anchoring propagation; must cover both stances.
struct SeedSet {
  std::map<std::string, Stance> entries;

  std::optional<Stance> stance_of(const std::string& user_id) const {
    auto it = entries.find(user_id);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  }
};

// Reads a headerless user_id,stance CSV. Identical duplicates collapse;
// conflicting duplicates are an error.
inline std::map<std::string, Stance> load_stance_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open stance file: " + path);
  std::map<std::string, Stance> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.rfind(',');
    if (comma == std::string::npos)
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected user_id,stance");
    std::string user = line.substr(0, comma);
    Stance stance;
    try {
      stance = stance_from_string(line.substr(comma + 1));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
    }
    auto [it, inserted] = entries.emplace(user, stance);
    if (!inserted && it->second != stance)
      throw std::runtime_error("conflicting stance for user '" + user + "'");
  }
  return entries;
}

inline SeedSet load_seeds(const std::string& path) {
  SeedSet seeds{load_stance_csv(path)};
  bool has_for = false;
  bool has_against = false;
  for (const auto& [user, stance] : seeds.entries)
    (stance == Stance::For ? has_for : has_against) = true;
  if (!has_for || !has_against) throw std::runtime_error("seed set must cover both stances");
  return seeds;
}

}  // namespace relp
