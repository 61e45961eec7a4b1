#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "relp/pipeline.hpp"
#include "relp/synthgen.hpp"

using relp::PipelineOptions;
using relp::RelpRun;
using relp::Stance;
using relp::SynthConfig;
using relp::SynthOutput;

namespace {

SynthOutput small_bench() {
  SynthConfig cfg;
  cfg.users_per_side = 40;
  cfg.seed_users_per_side = 2;
  cfg.rng_seed = 5;
  return relp::generate(cfg);
}

}  // namespace

TEST_CASE("run_relp labels every user and stays accurate on synthetic data") {
  SynthOutput bench = small_bench();
  RelpRun run = relp::run_relp(bench.corpus, bench.seeds, {});

  CHECK_FALSE(run.propagated.labeled.empty());
  CHECK(run.propagated.labeled.size() + run.propagated.unlabeled.size() == run.corpus.size());
  CHECK(run.propagated.unlabeled.size() > 0);  // propagation alone does not label everything
  CHECK(run.user_stances.size() == bench.gold.size());

  relp::MetricsReport r = relp::evaluate(run.user_stances, bench.gold);
  CHECK(r.macro.f1 > 0.8);
}

TEST_CASE("run_relp is deterministic including across thread counts") {
  SynthOutput bench = small_bench();
  PipelineOptions one;
  PipelineOptions four;
  four.threads = 4;
  RelpRun a = relp::run_relp(bench.corpus, bench.seeds, one);
  RelpRun b = relp::run_relp(bench.corpus, bench.seeds, one);
  RelpRun c = relp::run_relp(bench.corpus, bench.seeds, four);

  CHECK(a.user_stances == b.user_stances);
  CHECK(a.user_stances == c.user_stances);
  CHECK(a.propagated.labeled == c.propagated.labeled);
  std::ostringstream ma, mc;
  relp::dump_model(a.model, ma);
  relp::dump_model(c.model, mc);
  CHECK(ma.str() == mc.str());
}

TEST_CASE("propagated training docs carry the propagated stances") {
  SynthOutput bench = small_bench();
  RelpRun run = relp::run_relp(bench.corpus, bench.seeds, {});
  auto docs = relp::propagated_training_docs(run.corpus, run.propagated);
  CHECK(docs.size() == run.propagated.labeled.size());
  int by_class[2] = {0, 0};
  for (const auto& [fv, stance] : docs) ++by_class[relp::stance_index(stance)];
  CHECK(by_class[0] > 0);
  CHECK(by_class[1] > 0);
}

TEST_CASE("baseline aggregation helpers vote per user") {
  using relp::Tweet;
  relp::Corpus c(std::vector<Tweet>{
      {"t1", "u1", "x", std::nullopt, 1},
      {"t2", "u1", "y", std::nullopt, 2},
      {"t3", "u1", "z", std::nullopt, 3},
      {"t4", "u2", "w", std::nullopt, 4},
  });
  std::map<std::string, Stance> tweet_labels{
      {"t1", Stance::For}, {"t2", Stance::For}, {"t3", Stance::Against},
      {"t4", Stance::Against}};
  auto users = relp::aggregate_tweet_labels(c, tweet_labels);
  CHECK(users.at("u1") == Stance::For);
  CHECK(users.at("u2") == Stance::Against);

  // a vote tie goes Against
  std::map<std::string, Stance> tied{{"t1", Stance::For}, {"t2", Stance::Against},
                                     {"t3", Stance::For}, {"t4", Stance::For}};
  relp::Corpus two(std::vector<Tweet>{
      {"t1", "u1", "x", std::nullopt, 1},
      {"t2", "u1", "y", std::nullopt, 2},
  });
  CHECK(relp::aggregate_tweet_labels(two, tied).at("u1") == Stance::Against);
}
