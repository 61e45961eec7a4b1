#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "relp/corpus.hpp"
#include "relp/detail/format.hpp"

namespace relp {

// User-level confusion over the gold set, by (gold, predicted) stance pair,
// plus per-gold-class counts of users the method never labeled.
struct ConfusionCounts {
  std::array<std::array<std::size_t, 2>, 2> counts{};  // [gold][pred]
  std::array<std::size_t, 2> unpredicted{};            // [gold]

  std::size_t total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1] + unpredicted[0] +
           unpredicted[1];
  }
  std::size_t gold_total(int c) const {
    const auto u = static_cast<std::size_t>(c);
    return counts[u][0] + counts[u][1] + unpredicted[u];
  }
  std::size_t predicted_total(int c) const {
    const auto u = static_cast<std::size_t>(c);
    return counts[0][u] + counts[1][u];
  }
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  std::array<ClassMetrics, 2> per_class{};  // indexed by stance_index
  ClassMetrics macro;                       // unweighted mean over the two classes
  ConfusionCounts confusion;
};

// Scores predictions against gold users. Users missing from pred count as
// unpredicted and therefore as recall misses for their gold class; users
// absent from gold are ignored. A class with no predicted users has precision
// 0; a class with no gold users has recall 0. Macro F1 is the mean of the
// per-class F1 values, not the harmonic mean of macro precision and recall.
inline MetricsReport evaluate(const std::map<std::string, Stance>& predicted,
                              const std::map<std::string, Stance>& gold) {
  if (gold.empty()) throw std::invalid_argument("gold labels are empty");
  MetricsReport r;
  for (const auto& [user, g] : gold) {
    auto it = predicted.find(user);
    const auto gi = static_cast<std::size_t>(stance_index(g));
    if (it == predicted.end())
      ++r.confusion.unpredicted[gi];
    else
      ++r.confusion.counts[gi][static_cast<std::size_t>(stance_index(it->second))];
  }
  for (int c = 0; c < 2; ++c) {
    const auto u = static_cast<std::size_t>(c);
    const double tp = static_cast<double>(r.confusion.counts[u][u]);
    const std::size_t pred_c = r.confusion.predicted_total(c);
    const std::size_t gold_c = r.confusion.gold_total(c);
    ClassMetrics& m = r.per_class[u];
    m.precision = pred_c ? tp / static_cast<double>(pred_c) : 0.0;
    m.recall = gold_c ? tp / static_cast<double>(gold_c) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
  }
  r.macro.precision = (r.per_class[0].precision + r.per_class[1].precision) / 2.0;
  r.macro.recall = (r.per_class[0].recall + r.per_class[1].recall) / 2.0;
  r.macro.f1 = (r.per_class[0].f1 + r.per_class[1].f1) / 2.0;
  return r;
}

struct RenderedReport {
  std::string text;  // macro values as percentages, two decimals
  std::string csv;   // method,group,class,precision,recall,f1 with raw six-decimal values
};

namespace detail {
inline std::string percent_cell(double v) { return format_fixed(v * 100.0, 2); }
}

// Renders results keyed by method then group. Methods are rows; each group
// contributes a macro precision/recall/F1 column block.
inline RenderedReport report_table(
    const std::map<std::string, std::map<std::string, MetricsReport>>& results) {
  if (results.empty()) throw std::invalid_argument("no methods to report");

  std::vector<std::string> groups;
  for (const auto& [method, by_group] : results)
    for (const auto& [group, report] : by_group)
      if (std::find(groups.begin(), groups.end(), group) == groups.end())
        groups.push_back(group);
  std::sort(groups.begin(), groups.end());

  std::size_t name_w = 6;  // "method"
  for (const auto& [method, by_group] : results) name_w = std::max(name_w, method.size());

  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };

  RenderedReport out;
  const std::size_t cell = 10;
  out.text = pad("method", name_w + 2);
  for (const std::string& g : groups) out.text += pad(g, 3 * cell);
  out.text += '\n';
  out.text += pad("", name_w + 2);
  for (std::size_t i = 0; i < groups.size(); ++i)
    out.text += pad("precision", cell) + pad("recall", cell) + pad("f1", cell);
  out.text += '\n';
  for (const auto& [method, by_group] : results) {
    out.text += pad(method, name_w + 2);
    for (const std::string& g : groups) {
      auto it = by_group.find(g);
      if (it == by_group.end()) {
        out.text += pad("-", cell) + pad("-", cell) + pad("-", cell);
      } else {
        const ClassMetrics& m = it->second.macro;
        out.text += pad(detail::percent_cell(m.precision), cell) +
                    pad(detail::percent_cell(m.recall), cell) +
                    pad(detail::percent_cell(m.f1), cell);
      }
    }
    out.text += '\n';
  }

  out.csv = "method,group,class,precision,recall,f1\n";
  for (const auto& [method, by_group] : results) {
    for (const auto& [group, report] : by_group) {
      auto row = [&](const std::string& cls, const ClassMetrics& m) {
        out.csv += method + ',' + group + ',' + cls + ',' + detail::format_fixed(m.precision, 6) + ',' +
                   detail::format_fixed(m.recall, 6) + ',' + detail::format_fixed(m.f1, 6) + '\n';
      };
      row("for", report.per_class[0]);
      row("against", report.per_class[1]);
      row("macro", report.macro);
    }
  }
  return out;
}

inline RenderedReport report_table(const std::map<std::string, MetricsReport>& results,
                                   const std::string& group = "all") {
  std::map<std::string, std::map<std::string, MetricsReport>> nested;
  for (const auto& [method, report] : results) nested[method][group] = report;
  return report_table(nested);
}

}  // namespace relp
