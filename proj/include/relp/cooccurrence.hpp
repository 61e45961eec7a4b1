#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relp/corpus.hpp"
#include "relp/detail/parallel.hpp"

namespace relp {

// Column-normalized retweet co-occurrence matrix. M[i][j] is the number of
// users who retweeted both t_i and t_j divided by the number who retweeted
// t_j. Entries are stored as exact count ratios: column j holds
// (t_i, |retweeters(i) ∩ retweeters(j)|) pairs plus the shared denominator
// |retweeters(j)|, and materializes to floating point on read. The diagonal
// is never stored and a column exists exactly for the retweeted tweets.
class CoocMatrix {
 public:
  struct Column {
    std::uint32_t denominator = 0;
    std::vector<std::pair<std::string, std::uint32_t>> entries;  // (t_i, numerator), sorted by t_i
  };

  using Weighted = std::vector<std::pair<std::string, double>>;

  const std::map<std::string, Column>& columns() const { return columns_; }

  const Column* find_column(const std::string& tweet_id) const {
    auto it = columns_.find(tweet_id);
    return it == columns_.end() ? nullptr : &it->second;
  }

  // Incoming entries of t_j: pairs (t_i, M[i][j]). Empty if t_j has no column.
  Weighted column(const std::string& t_j) const {
    Weighted out;
    const Column* col = find_column(t_j);
    if (!col) return out;
    out.reserve(col->entries.size());
    for (const auto& [t_i, num] : col->entries)
      out.emplace_back(t_i, static_cast<double>(num) / static_cast<double>(col->denominator));
    return out;
  }

  // Outgoing entries of t_i: pairs (t_j, M[i][j]). The nonzero pattern is
  // symmetric, so t_i's neighbors are exactly its stored column's ids while
  // each weight is normalized by the neighbor's own retweeter count.
  Weighted row(const std::string& t_i) const {
    Weighted out;
    const Column* col = find_column(t_i);
    if (!col) return out;
    out.reserve(col->entries.size());
    for (const auto& [t_j, num] : col->entries) {
      const Column& cj = columns_.at(t_j);  // num > 0 implies t_j is retweeted
      out.emplace_back(t_j, static_cast<double>(num) / static_cast<double>(cj.denominator));
    }
    return out;
  }

  std::size_t column_count() const { return columns_.size(); }

  std::size_t entry_count() const {
    std::size_t n = 0;
    for (const auto& [id, col] : columns_) n += col.entries.size();
    return n;
  }

  // One line per stored entry: t_i <TAB> t_j <TAB> numerator <TAB> denominator,
  // sorted by (t_j, t_i).
  void dump(std::ostream& out) const {
    for (const auto& [t_j, col] : columns_)
      for (const auto& [t_i, num] : col.entries)
        out << t_i << '\t' << t_j << '\t' << num << '\t' << col.denominator << '\n';
  }

 private:
  friend CoocMatrix build_matrix(const Corpus&, int);
  std::map<std::string, Column> columns_;
};

// Builds the matrix over the retweeted tweets present in the corpus. Column
// construction is independent per column and may run on several threads; the
// result is identical regardless of thread count.
inline CoocMatrix build_matrix(const Corpus& corpus, int threads = 1) {
  std::vector<std::pair<std::string, const std::set<std::string>*>> cols;
  for (const Tweet& t : corpus.tweets()) {
    const auto& r = corpus.retweeters(t.id);
    if (!r.empty()) cols.emplace_back(t.id, &r);
  }
  if (cols.empty()) throw std::runtime_error("no retweet structure");
  std::sort(cols.begin(), cols.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // user -> ascending column indices of the tweets that user retweeted
  std::map<std::string, std::vector<std::uint32_t>> by_user;
  for (std::uint32_t i = 0; i < cols.size(); ++i)
    for (const std::string& u : *cols[i].second) by_user[u].push_back(i);

  std::vector<CoocMatrix::Column> built(cols.size());
  detail::parallel_for(cols.size(), threads, [&](std::size_t j) {
    std::map<std::uint32_t, std::uint32_t> inter;
    for (const std::string& u : *cols[j].second)
      for (std::uint32_t i : by_user.at(u))
        if (i != j) ++inter[i];
    CoocMatrix::Column& col = built[j];
    col.denominator = static_cast<std::uint32_t>(cols[j].second->size());
    col.entries.reserve(inter.size());
    for (const auto& [i, count] : inter) col.entries.emplace_back(cols[i].first, count);
  });

  CoocMatrix m;
  for (std::size_t j = 0; j < cols.size(); ++j) m.columns_[cols[j].first] = std::move(built[j]);
  return m;
}

}  // namespace relp
