#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "relp/corpus.hpp"

namespace relp {

struct IntRange {
  int lo = 1;
  int hi = 1;
};

// Planted two-community debate corpus: each side has its own vocabulary plus a
// shared one, seed users' originals get elevated retweet exposure, and users
// retweet same-side offers with p_retweet_in vs cross-side with
// p_retweet_cross. Output is fully determined by rng_seed.
struct SynthConfig {
  int users_per_side = 200;
  IntRange tweets_per_user{3, 5};
  int seed_users_per_side = 3;
  double p_retweet_in = 0.9;
  double p_retweet_cross = 0.02;
  int vocab_size_shared = 120;
  int vocab_size_side = 150;
  IntRange tokens_per_tweet{6, 12};
  std::uint64_t rng_seed = 1;
};

struct SynthOutput {
  Corpus corpus;
  std::map<std::string, Stance> gold;
  SeedSet seeds;
};

namespace detail {

// Samplers layered on mt19937_64: the engine is fully specified by the
// standard, library distributions are not, and synth output must be
// bit-stable across platforms.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : eng_(seed) {}

  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  int uniform_int(const IntRange& r) { return uniform_int(r.lo, r.hi); }
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform01() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform_int(0, static_cast<int>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 eng_;
};

inline std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace detail

inline void validate(const SynthConfig& cfg) {
  if (cfg.users_per_side < 1) throw std::invalid_argument("users_per_side must be >= 1");
  if (cfg.seed_users_per_side < 1 || cfg.seed_users_per_side > cfg.users_per_side)
    throw std::invalid_argument("seed_users_per_side must be in [1, users_per_side]");
  if (!(0.0 <= cfg.p_retweet_cross && cfg.p_retweet_cross < cfg.p_retweet_in &&
        cfg.p_retweet_in <= 1.0))
    throw std::invalid_argument("require 0 <= p_retweet_cross < p_retweet_in <= 1");
  if (cfg.tweets_per_user.lo < 1 || cfg.tweets_per_user.lo > cfg.tweets_per_user.hi)
    throw std::invalid_argument("tweets_per_user range invalid");
  if (cfg.tokens_per_tweet.lo < 1 || cfg.tokens_per_tweet.lo > cfg.tokens_per_tweet.hi)
    throw std::invalid_argument("tokens_per_tweet range invalid");
  if (cfg.vocab_size_shared < 1 || cfg.vocab_size_side < 1)
    throw std::invalid_argument("vocabulary sizes must be >= 1");
}

inline SynthOutput generate(const SynthConfig& cfg) {
  validate(cfg);
  detail::SynthRng rng(cfg.rng_seed);

  constexpr double kSideTokenShare = 0.35;    // side vs shared vocabulary mix
  constexpr double kOppositeTokenShare = 0.12;  // side draws that quote the other side
  constexpr int kExtraSameSideOffers = 4;     // non-seed same-side originals offered per user
  constexpr int kExtraCrossOffers = 2;        // opposite-side originals offered per user
  constexpr std::int64_t kBaseTimestamp = 1366000000;

  const int user_width =
      std::max(3, static_cast<int>(std::to_string(cfg.users_per_side - 1).size()));

  SynthOutput out;
  std::array<std::vector<std::string>, 2> side_users;
  for (int c = 0; c < 2; ++c) {
    const Stance stance = stance_at(c);
    for (int k = 0; k < cfg.users_per_side; ++k) {
      std::string user =
          (stance == Stance::For ? "for_u" : "agn_u") + detail::zero_pad(k, user_width);
      side_users[static_cast<std::size_t>(c)].push_back(user);
      out.gold.emplace(user, stance);
      if (k < cfg.seed_users_per_side) out.seeds.entries.emplace(user, stance);
    }
  }

  auto side_token = [&](int c, int i) {
    if (i == 0) return std::string(c == 0 ? "#fortag" : "#againsttag");
    return (c == 0 ? "fw" : "aw") + std::to_string(i);
  };
  auto shared_token = [](int i) { return "sw" + std::to_string(i); };

  struct Original {
    std::string id;
    std::string author;
    int side;
    std::string text;
  };

  std::vector<Tweet> tweets;
  int counter = 0;
  auto next_id = [&] { return "t" + detail::zero_pad(counter++, 7); };

  // pass 1: originals
  std::vector<Original> originals;
  std::array<std::vector<int>, 2> seed_originals;      // per seed-side: indices into originals
  std::array<std::vector<int>, 2> nonseed_originals;   // per side
  std::array<std::vector<int>, 2> all_side_originals;  // per side
  std::map<std::string, std::vector<int>> by_author;
  // sides interleave so tweet ids do not correlate with either community
  for (int k = 0; k < cfg.users_per_side; ++k) {
    for (int c = 0; c < 2; ++c) {
      const std::string& user = side_users[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
      const int n_tweets = rng.uniform_int(cfg.tweets_per_user);
      for (int t = 0; t < n_tweets; ++t) {
        const int len = rng.uniform_int(cfg.tokens_per_tweet);
        std::string text;
        for (int w = 0; w < len; ++w) {
          if (!text.empty()) text += ' ';
          if (rng.chance(kSideTokenShare)) {
            // mostly own-side words; a few quote the opposite side, so the
            // text signal is learnable but noisy while the graph stays clean
            const int src = rng.chance(kOppositeTokenShare) ? 1 - c : c;
            text += side_token(src, rng.uniform_int(0, cfg.vocab_size_side - 1));
          } else {
            text += shared_token(rng.uniform_int(0, cfg.vocab_size_shared - 1));
          }
        }
        Original o{next_id(), user, c, text};
        tweets.push_back(Tweet{o.id, user, text, std::nullopt, kBaseTimestamp + counter});
        const int idx = static_cast<int>(originals.size());
        if (k < cfg.seed_users_per_side) seed_originals[static_cast<std::size_t>(c)].push_back(idx);
        else nonseed_originals[static_cast<std::size_t>(c)].push_back(idx);
        all_side_originals[static_cast<std::size_t>(c)].push_back(idx);
        by_author[user].push_back(idx);
        originals.push_back(std::move(o));
      }
    }
  }

  // pass 2: retweets; each user is offered one original per seed user (both
  // sides) plus random same-side and cross-side originals
  for (int k = 0; k < cfg.users_per_side; ++k) {
    for (int c = 0; c < 2; ++c) {
      const std::string& user = side_users[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
      std::set<int> taken;
      auto offer = [&](int idx) {
        const Original& o = originals[static_cast<std::size_t>(idx)];
        if (o.author == user || taken.count(idx)) return;
        const double p = o.side == c ? cfg.p_retweet_in : cfg.p_retweet_cross;
        if (!rng.chance(p)) return;
        taken.insert(idx);
        tweets.push_back(Tweet{next_id(), user, "RT @" + o.author + ": " + o.text, o.id,
                               kBaseTimestamp + counter});
      };
      for (int sc = 0; sc < 2; ++sc)
        for (int s = 0; s < cfg.seed_users_per_side; ++s) {
          const std::string& seed_user =
              side_users[static_cast<std::size_t>(sc)][static_cast<std::size_t>(s)];
          if (seed_user == user) continue;
          offer(rng.pick(by_author.at(seed_user)));
        }
      const auto& same = nonseed_originals[static_cast<std::size_t>(c)];
      for (int i = 0; i < kExtraSameSideOffers && !same.empty(); ++i) offer(rng.pick(same));
      const auto& cross = all_side_originals[static_cast<std::size_t>(1 - c)];
      for (int i = 0; i < kExtraCrossOffers && !cross.empty(); ++i) offer(rng.pick(cross));
    }
  }

  out.corpus = Corpus(std::move(tweets));
  return out;
}

// Writes tweets.jsonl, seeds.csv and gold.csv under dir.
inline void write_synth_files(const SynthOutput& out, const std::string& dir) {
  std::filesystem::create_directories(dir);
  save_corpus(out.corpus, dir + "/tweets.jsonl");
  auto write_csv = [&](const std::string& path, const std::map<std::string, Stance>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    for (const auto& [user, stance] : rows) f << user << ',' << to_string(stance) << '\n';
  };
  write_csv(dir + "/seeds.csv", out.seeds.entries);
  write_csv(dir + "/gold.csv", out.gold);
}

}  // namespace relp
