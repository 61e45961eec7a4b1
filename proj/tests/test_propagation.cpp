#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "relp/cooccurrence.hpp"
#include "relp/propagation.hpp"

using Catch::Matchers::ContainsSubstring;
using relp::Corpus;
using relp::FinalLabeling;
using relp::LabelState;
using relp::LabelTable;
using relp::PropagationConfig;
using relp::SeedSet;
using relp::Stance;
using relp::Tweet;

namespace {

SeedSet seeds_u1_for_u2_against() {
  SeedSet s;
  s.entries.emplace("u1", Stance::For);
  s.entries.emplace("u2", Stance::Against);
  return s;
}

// two originals retweeted so that M[t1][t2] = 0.5 and M[t2][t1] = 1.0
Corpus two_tweet_instance() {
  std::vector<Tweet> tweets{
      {"t1", "u1", "one", std::nullopt, 1},  {"t2", "u9", "two", std::nullopt, 2},
      {"r1", "ua", "rt", "t1", 3},           {"r2", "ua", "rt", "t2", 4},
      {"r3", "ub", "rt", "t2", 5},
  };
  return Corpus(std::move(tweets));
}

}  // namespace

TEST_CASE("hash_bucket floors into n+1 buckets") {
  CHECK(relp::hash_bucket(0.55, 10) == 5);
  CHECK(relp::hash_bucket(0.0, 10) == 0);
  CHECK(relp::hash_bucket(1.0, 10) == 10);
  CHECK(relp::hash_bucket(0.09, 10) == 0);
  CHECK(relp::hash_bucket(-0.5, 10) == 0);   // clamped
  CHECK(relp::hash_bucket(1.5, 10) == 10);   // clamped
  CHECK(relp::hash_bucket(0.99, 1) == 0);
  CHECK(relp::hash_bucket(1.0, 1) == 1);
}

TEST_CASE("init_labels marks seed originals and nothing else") {
  Corpus c(std::vector<Tweet>{
      {"t1", "u1", "a", std::nullopt, 1},
      {"t2", "u1", "b", std::nullopt, 2},
      {"t3", "u3", "c", std::nullopt, 3},
      {"r1", "u2", "rt", "t3", 4},  // the Against seed only retweets
  });
  LabelTable table = relp::init_labels(c, seeds_u1_for_u2_against());
  CHECK(table.active().at("t1") == LabelState{1.0, 0.0});
  CHECK(table.active().at("t2") == LabelState{1.0, 0.0});
  CHECK(table.active().at("t3") == LabelState{0.0, 0.0});
  CHECK(table.active().at("r1") == LabelState{0.0, 0.0});  // seed retweet is only an edge
  CHECK(table.finalized().empty());
}

TEST_CASE("init_labels requires at least one seed original") {
  Corpus c(std::vector<Tweet>{
      {"t1", "u3", "a", std::nullopt, 1},
      {"r1", "u1", "rt", "t1", 2},
      {"r2", "u2", "rt", "t1", 3},
  });
  CHECK_THROWS_WITH(relp::init_labels(c, seeds_u1_for_u2_against()),
                    ContainsSubstring("no seed tweets present"));
}

TEST_CASE("seed_selection returns the highest occupied bucket") {
  LabelTable t;
  t.insert_active("t1", {0.73, 0.10});
  t.insert_active("t2", {0.35, 0.20});
  t.insert_active("t3", {0.35, 0.41});
  CHECK(relp::seed_selection(t, {10, true}) == std::set<std::string>{"t1"});

  LabelTable zero;
  zero.insert_active("t1", {0.0, 0.0});
  zero.insert_active("t2", {0.05, 0.0});  // still bucket 0
  CHECK(relp::seed_selection(zero, {10, true}).empty());

  LabelTable tie;
  tie.insert_active("t1", {0.72, 0.0});
  tie.insert_active("t2", {0.0, 0.79});
  tie.insert_active("t3", {0.3, 0.3});
  CHECK(relp::seed_selection(tie, {10, true}) == std::set<std::string>{"t1", "t2"});
}

TEST_CASE("propagate follows the two-tweet hand trace") {
  Corpus c = two_tweet_instance();
  SeedSet seeds;
  seeds.entries.emplace("u1", Stance::For);
  seeds.entries.emplace("uz", Stance::Against);  // no original: add one
  std::vector<Tweet> tweets = c.tweets();
  tweets.push_back({"t9", "uz", "isolated", std::nullopt, 9});
  c = Corpus(std::move(tweets));

  std::vector<relp::TraceEvent> trace;
  LabelTable table = relp::propagate(relp::build_matrix(c), relp::init_labels(c, seeds),
                                     {10, true}, &trace);

  // iteration 1 selects {t1, t9}; t1 pushes 0.5 for-mass into t2; iteration 2
  // finalizes t2 at (0.5, 0) without touching the finalized t1
  CHECK(table.finalized().at("t1") == LabelState{1.0, 0.0});
  CHECK(table.finalized().at("t2") == LabelState{0.5, 0.0});
  CHECK(table.finalized().at("t9") == LabelState{0.0, 1.0});
  REQUIRE(trace.size() == 3);
  CHECK(trace[0].iteration == 1);
  CHECK(trace[2].iteration == 2);
  CHECK(trace[2].tweet_id == "t2");

  FinalLabeling fl = relp::finalize(table, c);
  CHECK(fl.labeled.at("t1") == Stance::For);
  CHECK(fl.labeled.at("t2") == Stance::For);
  CHECK(fl.labeled.at("t9") == Stance::Against);
  // the retweet records never gained mass
  CHECK(fl.unlabeled == std::set<std::string>{"r1", "r2", "r3"});
}

TEST_CASE("isolated seeds finalize alone") {
  Corpus c(std::vector<Tweet>{
      {"t1", "u1", "a", std::nullopt, 1},
      {"t2", "u2", "b", std::nullopt, 2},
      {"t3", "u3", "c", std::nullopt, 3},
      {"r1", "u4", "rt", "t3", 4},
  });
  LabelTable table = relp::propagate(relp::build_matrix(c),
                                     relp::init_labels(c, seeds_u1_for_u2_against()), {10, true});
  CHECK(table.finalized().size() == 2);
  FinalLabeling fl = relp::finalize(table, c);
  CHECK(fl.labeled.size() == 2);
  CHECK(fl.unlabeled.size() == 2);
}

TEST_CASE("accumulated mass clamps at one") {
  // t3 is co-retweeted with both seed originals; each contributes 0.7 and 0.6
  std::vector<Tweet> tweets{
      {"t1", "u1", "a", std::nullopt, 1},  {"t2", "u5", "b", std::nullopt, 2},
      {"t3", "u6", "c", std::nullopt, 3},
  };
  int n = 0;
  auto rt = [&](const std::string& user, const std::string& of) {
    tweets.push_back({"r" + std::to_string(n++), user, "rt", of, 10 + n});
  };
  // retweeters(t3) = {v0..v9}; 7 of them also retweet t1, 6 also retweet t2
  for (int i = 0; i < 10; ++i) rt("v" + std::to_string(i), "t3");
  for (int i = 0; i < 7; ++i) rt("v" + std::to_string(i), "t1");
  for (int i = 4; i < 10; ++i) rt("v" + std::to_string(i), "t2");
  tweets.push_back({"t4", "u7", "d", std::nullopt, 99});
  Corpus c(std::move(tweets));
  SeedSet seeds;
  seeds.entries.emplace("u1", Stance::For);      // authors t1
  seeds.entries.emplace("u5", Stance::For);      // authors t2
  seeds.entries.emplace("u7", Stance::Against);  // authors the isolated t4

  LabelTable table = relp::propagate(relp::build_matrix(c), relp::init_labels(c, seeds), {10, true});
  CHECK(table.finalized().at("t3").for_value == 1.0);  // 0.7 + 0.6 clamped
}

TEST_CASE("finalize labels by the strictly higher field") {
  Corpus c(std::vector<Tweet>{{"t1", "u1", "a", std::nullopt, 1}});
  LabelTable table;
  table.insert_active("t1", {0.0, 0.0});
  table.move_to_finalized("t1");

  LabelTable for_t;
  for_t.insert_active("t1", {0.5, 0.2});
  for_t.move_to_finalized("t1");
  CHECK(relp::finalize(for_t, c).labeled.at("t1") == Stance::For);

  LabelTable tie;
  tie.insert_active("t1", {0.3, 0.3});
  tie.move_to_finalized("t1");
  CHECK(relp::finalize(tie, c).unlabeled.count("t1") == 1);

  LabelTable never;
  never.insert_active("t1", {0.04, 0.0});  // bucket 0, never selected
  CHECK(relp::finalize(never, c).unlabeled.count("t1") == 1);
}

TEST_CASE("engine matches the straight-line transliteration exactly") {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 60) {
    Corpus c = oracle::random_corpus(rng, {20, 8, 0.6, 0.0});
    auto seeds = oracle::pick_seeds(c);
    if (!seeds || c.retweeter_index().empty()) continue;
    bool seed_has_original = false;
    for (const Tweet& t : c.tweets())
      if (!t.is_retweet() && seeds->entries.count(t.user_id)) seed_has_original = true;
    if (!seed_has_original) continue;
    bool any_column = false;
    for (const Tweet& t : c.tweets())
      if (!c.retweeters(t.id).empty()) any_column = true;
    if (!any_column) continue;
    ++checked;

    LabelTable table = relp::propagate(relp::build_matrix(c), relp::init_labels(c, *seeds),
                                       {10, true});
    FinalLabeling fl = relp::finalize(table, c);
    oracle::PropagationOracleResult expect = oracle::run_propagation_oracle(c, *seeds, 10);

    CHECK(fl.labeled == expect.labeled);
    CHECK(fl.unlabeled == expect.unlabeled);
    REQUIRE(table.finalized().size() == expect.final_values.size());
    for (const auto& [id, state] : table.finalized()) {
      auto it = expect.final_values.find(id);
      REQUIRE(it != expect.final_values.end());
      CHECK(state.for_value == it->second.first);      // bitwise
      CHECK(state.against_value == it->second.second);
    }
  }
}

TEST_CASE("termination, monotone finalization and clamp invariants hold") {
  std::mt19937_64 rng(32);
  int checked = 0;
  while (checked < 40) {
    Corpus c = oracle::random_corpus(rng, {60, 12, 0.6, 0.0});
    auto seeds = oracle::pick_seeds(c);
    if (!seeds || c.retweeter_index().empty()) continue;
    bool seed_has_original = false;
    for (const Tweet& t : c.tweets())
      if (!t.is_retweet() && seeds->entries.count(t.user_id)) seed_has_original = true;
    if (!seed_has_original) continue;
    ++checked;

    std::vector<relp::TraceEvent> trace;
    LabelTable table = relp::propagate(relp::build_matrix(c), relp::init_labels(c, *seeds),
                                       {10, true}, &trace);

    // each tweet finalized (pushed) at most once
    std::set<std::string> seen;
    int max_iteration = 0;
    for (const auto& e : trace) {
      CHECK(seen.insert(e.tweet_id).second);
      CHECK(e.iteration >= max_iteration);  // iterations only move forward
      max_iteration = std::max(max_iteration, e.iteration);
      // the recorded value is the frozen one
      CHECK(table.finalized().at(e.tweet_id) == e.state);
    }
    CHECK(static_cast<std::size_t>(max_iteration) <= c.size());
    CHECK(trace.size() == table.finalized().size());

    // disjoint active/finalized covering the corpus; all fields clamped
    CHECK(table.active().size() + table.finalized().size() == c.size());
    for (const auto& [id, s] : table.active()) {
      CHECK(table.finalized().count(id) == 0);
      CHECK((s.for_value >= 0.0 && s.for_value <= 1.0));
      CHECK((s.against_value >= 0.0 && s.against_value <= 1.0));
    }
    for (const auto& [id, s] : table.finalized()) {
      CHECK((s.for_value >= 0.0 && s.for_value <= 1.0));
      CHECK((s.against_value >= 0.0 && s.against_value <= 1.0));
    }

    // seed fidelity: every seed original finalized with its seed stance
    FinalLabeling fl = relp::finalize(table, c);
    for (const Tweet& t : c.tweets()) {
      if (t.is_retweet()) continue;
      auto stance = seeds->stance_of(t.user_id);
      if (!stance) continue;
      REQUIRE(fl.labeled.count(t.id) == 1);
      CHECK(fl.labeled.at(t.id) == *stance);
    }
  }
}
