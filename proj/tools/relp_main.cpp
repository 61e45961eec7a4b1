// relp — retweet-based label propagation pipeline for stance classification.
//
// Subcommands wire the library stages together: synth generates a planted
// two-community corpus, pipeline runs the full flow, baselines appends B1-B3
// metrics, and build-matrix / propagate / evaluate expose single stages.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "relp/baselines.hpp"
#include "relp/detail/format.hpp"
#include "relp/evaluation.hpp"
#include "relp/pipeline.hpp"
#include "relp/synthgen.hpp"

namespace {

bool log_info_enabled() {
  const char* v = std::getenv("RELP_LOG");
  if (!v) return false;
  const std::string s(v);
  return s == "info" || s == "debug";
}

void log_info(const std::string& msg) {
  if (log_info_enabled()) std::cerr << "relp: " << msg << '\n';
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

relp::Corpus load_filtered(const std::string& path, bool lenient, int min_tweets) {
  std::size_t skipped = 0;
  relp::Corpus raw = relp::load_corpus(
      path, lenient ? relp::ParseMode::Lenient : relp::ParseMode::Strict, &skipped);
  if (skipped > 0) std::cerr << "relp: warning: skipped " << skipped << " malformed lines\n";
  log_info("loaded " + std::to_string(raw.size()) + " tweets from " + path);
  return relp::filter_corpus(raw, min_tweets);
}

std::string stances_csv(const std::map<std::string, relp::Stance>& stances) {
  std::string out;
  for (const auto& [user, stance] : stances) out += user + ',' + relp::to_string(stance) + '\n';
  return out;
}

std::string users_csv(const std::vector<relp::UserStanceResult>& users) {
  std::string out;
  for (const relp::UserStanceResult& r : users)
    out += r.user_id + ',' + relp::to_string(r.stance) + ',' + relp::to_string(r.source) + '\n';
  return out;
}

std::string trace_tsv(const std::vector<relp::TraceEvent>& trace) {
  std::string out;
  for (const relp::TraceEvent& e : trace)
    out += std::to_string(e.iteration) + '\t' + e.tweet_id + '\t' +
           relp::detail::format_fixed(e.state.for_value, 6) + '\t' +
           relp::detail::format_fixed(e.state.against_value, 6) + '\n';
  return out;
}

// Appends metric rows for one method; creates the file with a header first.
void append_metrics(const std::string& path, const std::string& method, const std::string& group,
                    const relp::MetricsReport& report) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (fresh) out << "method,group,class,precision,recall,f1\n";
  auto row = [&](const std::string& cls, const relp::ClassMetrics& m) {
    out << method << ',' << group << ',' << cls << ',' << relp::detail::format_fixed(m.precision, 6)
        << ',' << relp::detail::format_fixed(m.recall, 6) << ','
        << relp::detail::format_fixed(m.f1, 6) << '\n';
  };
  row("for", report.per_class[0]);
  row("against", report.per_class[1]);
  row("macro", report.macro);
}

// Reads user,stance rows, tolerating the extra source column that
// user_stances.csv carries.
std::map<std::string, relp::Stance> load_pred_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open prediction file: " + path);
  std::map<std::string, relp::Stance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t pos = 0; pos <= line.size(); ++pos) {
      if (pos == line.size() || line[pos] == ',') {
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
      }
    }
    auto is_stance = [](const std::string& s) { return s == "for" || s == "against"; };
    std::size_t stance_at = fields.size();
    for (std::size_t i = fields.size(); i-- > 1;)
      if (is_stance(fields[i])) {
        stance_at = i;
        break;
      }
    if (stance_at == fields.size())
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected user_id,stance");
    std::string user = fields[0];
    for (std::size_t i = 1; i < stance_at; ++i) user += ',' + fields[i];
    const relp::Stance stance = relp::stance_from_string(fields[stance_at]);
    auto [it, inserted] = out.emplace(user, stance);
    if (!inserted && it->second != stance)
      throw std::runtime_error("conflicting stance for user '" + user + "'");
  }
  return out;
}

struct CommonOpts {
  std::string corpus_path;
  std::string seeds_path;
  std::string gold_path;
  std::string out_dir;
  int min_tweets_per_user = 2;
  int threads = 1;
  bool lenient = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"retweet-based label propagation for debate stance classification"};
  app.require_subcommand(1);
  // reproducible runs keep every knob in one file: `relp --config run.cfg
  // <subcommand>` reads key=value lines under a [subcommand] section, and
  // explicit flags always win
  app.set_config("--config", "", "key-value config file with a [subcommand] section; flags win");
  app.allow_config_extras(false);

  std::string stage = "start";

  // ---- synth ----------------------------------------------------------
  relp::SynthConfig synth_cfg;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic debate corpus");
  synth->add_option("--out-dir", synth_out, "output directory")->required();
  synth->add_option("--users-per-side", synth_cfg.users_per_side);
  synth->add_option("--tweets-per-user-min", synth_cfg.tweets_per_user.lo);
  synth->add_option("--tweets-per-user-max", synth_cfg.tweets_per_user.hi);
  synth->add_option("--seed-users-per-side", synth_cfg.seed_users_per_side);
  synth->add_option("--p-retweet-in", synth_cfg.p_retweet_in);
  synth->add_option("--p-retweet-cross", synth_cfg.p_retweet_cross);
  synth->add_option("--vocab-size-shared", synth_cfg.vocab_size_shared);
  synth->add_option("--vocab-size-side", synth_cfg.vocab_size_side);
  synth->add_option("--tokens-per-tweet-min", synth_cfg.tokens_per_tweet.lo);
  synth->add_option("--tokens-per-tweet-max", synth_cfg.tokens_per_tweet.hi);
  synth->add_option("--rng-seed", synth_cfg.rng_seed);
  synth->callback([&] {
    stage = "generate";
    relp::SynthOutput out = relp::generate(synth_cfg);
    stage = "write-output";
    relp::write_synth_files(out, synth_out);
    log_info("wrote " + std::to_string(out.corpus.size()) + " tweets to " + synth_out);
  });

  // ---- pipeline -------------------------------------------------------
  CommonOpts pl;
  relp::PipelineOptions pl_opt;
  bool pl_trace = false;
  CLI::App* pipeline = app.add_subcommand("pipeline", "run the full propagation pipeline");
  pipeline->add_option("--corpus", pl.corpus_path, "tweet JSONL file")
      ->required()
      ->check(CLI::ExistingFile);
  pipeline->add_option("--seeds", pl.seeds_path, "seed user CSV")
      ->required()
      ->check(CLI::ExistingFile);
  pipeline->add_option("--gold", pl.gold_path, "gold user stance CSV")->check(CLI::ExistingFile);
  pipeline->add_option("--out-dir", pl.out_dir, "output directory")->required();
  pipeline->add_option("--min-tweets-per-user", pl_opt.min_tweets_per_user);
  pipeline->add_option("--n-buckets", pl_opt.n_buckets);
  pipeline->add_option("--alpha", pl_opt.alpha);
  pipeline->add_option("--threads", pl_opt.threads);
  pipeline->add_flag("--lenient", pl.lenient, "skip malformed corpus lines");
  pipeline->add_flag("--trace", pl_trace, "write the propagation trace");
  pipeline->callback([&] {
    stage = "load-corpus";
    std::size_t skipped = 0;
    relp::Corpus raw = relp::load_corpus(
        pl.corpus_path, pl.lenient ? relp::ParseMode::Lenient : relp::ParseMode::Strict, &skipped);
    if (skipped > 0) std::cerr << "relp: warning: skipped " << skipped << " malformed lines\n";
    stage = "load-seeds";
    relp::SeedSet seeds = relp::load_seeds(pl.seeds_path);
    stage = "run";
    relp::RelpRun run = relp::run_relp(raw, seeds, pl_opt);
    log_info("propagation labeled " + std::to_string(run.propagated.labeled.size()) + " of " +
             std::to_string(run.corpus.size()) + " tweets");
    stage = "write-output";
    std::filesystem::create_directories(pl.out_dir);
    write_file(pl.out_dir + "/propagated.csv", stances_csv(run.propagated.labeled));
    std::ostringstream model_out;
    relp::dump_model(run.model, model_out);
    write_file(pl.out_dir + "/model.txt", model_out.str());
    write_file(pl.out_dir + "/user_stances.csv", users_csv(run.users));
    if (pl_trace) write_file(pl.out_dir + "/trace.tsv", trace_tsv(run.trace));
    if (!pl.gold_path.empty()) {
      stage = "evaluate";
      const auto gold = relp::load_stance_csv(pl.gold_path);
      relp::MetricsReport report = relp::evaluate(run.user_stances, gold);
      const std::string metrics = pl.out_dir + "/metrics.csv";
      std::filesystem::remove(metrics);
      append_metrics(metrics, "relp", "all", report);
      std::cout << relp::report_table({{"relp", report}}).text;
    }
  });

  // ---- baselines ------------------------------------------------------
  CommonOpts bl;
  std::string hashtags_path;
  double bl_alpha = 1.0;
  int bl_kmeans_iters = 100;
  CLI::App* baselines = app.add_subcommand("baselines", "run B1-B3 and append metrics");
  baselines->add_option("--corpus", bl.corpus_path)->required()->check(CLI::ExistingFile);
  baselines->add_option("--seeds", bl.seeds_path)->required()->check(CLI::ExistingFile);
  baselines->add_option("--gold", bl.gold_path)->required()->check(CLI::ExistingFile);
  baselines->add_option("--hashtags", hashtags_path, "partisan hashtag CSV for B2")
      ->check(CLI::ExistingFile);
  baselines->add_option("--out-dir", bl.out_dir)->required();
  baselines->add_option("--min-tweets-per-user", bl.min_tweets_per_user);
  baselines->add_option("--alpha", bl_alpha);
  baselines->add_option("--kmeans-max-iterations", bl_kmeans_iters);
  baselines->add_option("--threads", bl.threads);
  baselines->add_flag("--lenient", bl.lenient);
  baselines->callback([&] {
    stage = "load-corpus";
    relp::Corpus corpus = load_filtered(bl.corpus_path, bl.lenient, bl.min_tweets_per_user);
    stage = "load-seeds";
    relp::SeedSet seeds = relp::load_seeds(bl.seeds_path);
    const auto gold = relp::load_stance_csv(bl.gold_path);
    std::filesystem::create_directories(bl.out_dir);
    const std::string metrics = bl.out_dir + "/metrics.csv";
    std::map<std::string, relp::MetricsReport> table;

    stage = "b1";
    relp::MNBModel b1 = relp::train_b1(corpus, seeds, bl_alpha);
    auto b1_users = relp::users_from_model(corpus, b1, bl.threads);
    write_file(bl.out_dir + "/user_stances_b1.csv", stances_csv(b1_users));
    table["b1"] = relp::evaluate(b1_users, gold);
    append_metrics(metrics, "b1", "all", table["b1"]);

    stage = "b2";
    if (hashtags_path.empty()) {
      std::cerr << "relp: warning: no --hashtags file given, skipping B2\n";
    } else {
      relp::HashtagSeeds tags = relp::load_hashtag_seeds(hashtags_path);
      relp::MNBModel b2 = relp::train_b2(corpus, tags, bl_alpha);
      auto b2_users = relp::users_from_model(corpus, b2, bl.threads);
      write_file(bl.out_dir + "/user_stances_b2.csv", stances_csv(b2_users));
      table["b2"] = relp::evaluate(b2_users, gold);
      append_metrics(metrics, "b2", "all", table["b2"]);
    }

    stage = "b3";
    relp::KMeansResult b3 = relp::run_b3(corpus, seeds, relp::KMeansConfig{bl_kmeans_iters});
    auto b3_users = relp::aggregate_tweet_labels(corpus, b3.labels);
    write_file(bl.out_dir + "/user_stances_b3.csv", stances_csv(b3_users));
    table["b3"] = relp::evaluate(b3_users, gold);
    append_metrics(metrics, "b3", "all", table["b3"]);

    std::cout << relp::report_table(table).text;
  });

  // ---- build-matrix ---------------------------------------------------
  CommonOpts bm;
  std::string bm_out;
  CLI::App* build_matrix = app.add_subcommand("build-matrix", "dump the co-occurrence matrix");
  build_matrix->add_option("--corpus", bm.corpus_path)->required()->check(CLI::ExistingFile);
  build_matrix->add_option("--min-tweets-per-user", bm.min_tweets_per_user);
  build_matrix->add_option("--threads", bm.threads);
  build_matrix->add_flag("--lenient", bm.lenient);
  build_matrix->add_option("--out", bm_out, "output TSV path")->required();
  build_matrix->callback([&] {
    stage = "load-corpus";
    relp::Corpus corpus = load_filtered(bm.corpus_path, bm.lenient, bm.min_tweets_per_user);
    stage = "build-matrix";
    relp::CoocMatrix m = relp::build_matrix(corpus, bm.threads);
    stage = "write-output";
    std::ostringstream out;
    m.dump(out);
    write_file(bm_out, out.str());
  });

  // ---- propagate ------------------------------------------------------
  CommonOpts pr;
  std::string pr_out;
  std::string pr_trace;
  int pr_buckets = 10;
  CLI::App* propagate_cmd = app.add_subcommand("propagate", "run label propagation only");
  propagate_cmd->add_option("--corpus", pr.corpus_path)->required()->check(CLI::ExistingFile);
  propagate_cmd->add_option("--seeds", pr.seeds_path)->required()->check(CLI::ExistingFile);
  propagate_cmd->add_option("--min-tweets-per-user", pr.min_tweets_per_user);
  propagate_cmd->add_option("--n-buckets", pr_buckets);
  propagate_cmd->add_flag("--lenient", pr.lenient);
  propagate_cmd->add_option("--out", pr_out, "propagated labels CSV")->required();
  propagate_cmd->add_option("--trace", pr_trace, "trace TSV path");
  propagate_cmd->callback([&] {
    stage = "load-corpus";
    relp::Corpus corpus = load_filtered(pr.corpus_path, pr.lenient, pr.min_tweets_per_user);
    stage = "load-seeds";
    relp::SeedSet seeds = relp::load_seeds(pr.seeds_path);
    stage = "propagate";
    relp::CoocMatrix m = relp::build_matrix(corpus);
    std::vector<relp::TraceEvent> trace;
    relp::LabelTable table = relp::propagate(m, relp::init_labels(corpus, seeds),
                                             relp::PropagationConfig{pr_buckets, true}, &trace);
    relp::FinalLabeling labeling = relp::finalize(table, corpus);
    stage = "write-output";
    write_file(pr_out, stances_csv(labeling.labeled));
    if (!pr_trace.empty()) write_file(pr_trace, trace_tsv(trace));
  });

  // ---- evaluate -------------------------------------------------------
  std::string ev_pred;
  std::string ev_gold;
  std::string ev_method = "method";
  std::string ev_group = "all";
  std::string ev_csv;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "score predictions against gold labels");
  evaluate_cmd->add_option("--pred", ev_pred, "predicted user stance CSV")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--gold", ev_gold)->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--method", ev_method);
  evaluate_cmd->add_option("--group", ev_group);
  evaluate_cmd->add_option("--csv", ev_csv, "append rows to this metrics CSV");
  evaluate_cmd->callback([&] {
    stage = "evaluate";
    relp::MetricsReport report =
        relp::evaluate(load_pred_csv(ev_pred), relp::load_stance_csv(ev_gold));
    if (!ev_csv.empty()) append_metrics(ev_csv, ev_method, ev_group, report);
    std::cout << relp::report_table({{ev_method, report}}, ev_group).text;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "relp " << app.get_subcommands().front()->get_name() << ": " << stage << ": "
              << e.what() << '\n';
    return 1;
  }
  return 0;
}
