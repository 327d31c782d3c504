#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "dbowsum/common.hpp"
#include "dbowsum/text.hpp"

namespace dbowsum {

// Counting units (n-grams, skip-bigrams) keyed by tokens joined with an
// unlikely separator byte; values are multiplicities.
using UnitCounts = std::unordered_map<std::string, int>;

constexpr char kUnitSep = '\x1f';

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline UnitCounts ngram_counts(const std::vector<std::string>& tokens, int n) {
  if (n < 1) throw Error("n must be >= 1");
  UnitCounts out;
  if (tokens.size() < static_cast<std::size_t>(n)) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key += kUnitSep;
      key += tokens[i + j];
    }
    ++out[key];
  }
  return out;
}

// Ordered pairs (tokens[i], tokens[j]) with i < j and j - i <= d_max.
inline UnitCounts skip_bigram_counts(const std::vector<std::string>& tokens, int d_max = 4) {
  if (d_max < 1) throw Error("d_max must be >= 1");
  UnitCounts out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::size_t hi = std::min(tokens.size(), i + 1 + static_cast<std::size_t>(d_max));
    for (std::size_t j = i + 1; j < hi; ++j) {
      std::string key = tokens[i];
      key += kUnitSep;
      key += tokens[j];
      ++out[key];
    }
  }
  return out;
}

// Unigrams plus skip-bigrams in one multiset, tagged so the two unit kinds
// cannot collide.
inline UnitCounts su4_units(const std::vector<std::string>& tokens, int d_max = 4) {
  UnitCounts out;
  for (const std::string& token : tokens) {
    std::string key = "u";
    key += kUnitSep;
    key += token;
    ++out[key];
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::size_t hi = std::min(tokens.size(), i + 1 + static_cast<std::size_t>(d_max));
    for (std::size_t j = i + 1; j < hi; ++j) {
      std::string key = "b";
      key += kUnitSep;
      key += tokens[i];
      key += kUnitSep;
      key += tokens[j];
      ++out[key];
    }
  }
  return out;
}

inline std::size_t unit_total(const UnitCounts& units) {
  std::size_t total = 0;
  for (const auto& [key, count] : units) total += static_cast<std::size_t>(count);
  return total;
}

// Clipped matching: each unit contributes min(candidate count, reference
// count). Empty denominators score 0 rather than dividing by zero.
inline RougeScore score_from_counts(const UnitCounts& cand, const UnitCounts& ref) {
  std::size_t match = 0;
  for (const auto& [key, count] : cand) {
    auto it = ref.find(key);
    if (it != ref.end()) match += static_cast<std::size_t>(std::min(count, it->second));
  }
  const std::size_t cand_total = unit_total(cand);
  const std::size_t ref_total = unit_total(ref);
  RougeScore s;
  s.precision = cand_total ? static_cast<double>(match) / static_cast<double>(cand_total) : 0.0;
  s.recall = ref_total ? static_cast<double>(match) / static_cast<double>(ref_total) : 0.0;
  s.f1 = (s.precision + s.recall > 0.0)
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

namespace detail {

template <class UnitsFn>
RougeScore mean_over_references(const std::vector<std::string>& candidate,
                                const std::vector<std::vector<std::string>>& references,
                                UnitsFn&& units) {
  if (references.empty()) throw Error("no references");
  const UnitCounts cand_units = units(candidate);
  RougeScore mean;
  for (const std::vector<std::string>& ref : references) {
    const RougeScore s = score_from_counts(cand_units, units(ref));
    mean.precision += s.precision;
    mean.recall += s.recall;
    mean.f1 += s.f1;
  }
  const double n = static_cast<double>(references.size());
  mean.precision /= n;
  mean.recall /= n;
  mean.f1 /= n;
  return mean;
}

}  // namespace detail

// Multi-reference scores are the plain per-reference mean of P, R and F
// (no jackknifing), so expect small deltas against ROUGE-1.5.5.
inline RougeScore rouge_n(const std::vector<std::string>& candidate,
                          const std::vector<std::vector<std::string>>& references, int n) {
  return detail::mean_over_references(
      candidate, references,
      [n](const std::vector<std::string>& tokens) { return ngram_counts(tokens, n); });
}

inline RougeScore rouge_su4(const std::vector<std::string>& candidate,
                            const std::vector<std::vector<std::string>>& references) {
  return detail::mean_over_references(
      candidate, references,
      [](const std::vector<std::string>& tokens) { return su4_units(tokens); });
}

struct EvalInput {
  std::string set_id;
  std::string candidate_text;
  std::vector<std::string> reference_texts;
};

struct SetEvaluation {
  std::string set_id;
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore su4;
};

struct EvalReport {
  std::vector<SetEvaluation> sets;
  SetEvaluation mean;
};

// Candidates are truncated to max_words whitespace-delimited words before
// tokenization; references are scored in full.
inline EvalReport evaluate_corpus(const std::vector<EvalInput>& inputs, int max_words = 250) {
  if (inputs.empty()) throw Error("no document sets to evaluate");
  EvalReport report;
  report.mean.set_id = "MEAN";
  for (const EvalInput& input : inputs) {
    if (input.reference_texts.empty()) {
      throw Error("missing references for set: " + input.set_id);
    }
    const std::vector<std::string> cand =
        tokenize(truncate_words(input.candidate_text, max_words));
    std::vector<std::vector<std::string>> refs;
    refs.reserve(input.reference_texts.size());
    for (const std::string& text : input.reference_texts) refs.push_back(tokenize(text));

    SetEvaluation ev;
    ev.set_id = input.set_id;
    ev.rouge1 = rouge_n(cand, refs, 1);
    ev.rouge2 = rouge_n(cand, refs, 2);
    ev.su4 = rouge_su4(cand, refs);
    report.sets.push_back(std::move(ev));
  }
  const double n = static_cast<double>(report.sets.size());
  auto fold = [n](RougeScore SetEvaluation::*metric, EvalReport& rep) {
    RougeScore sum;
    for (const SetEvaluation& ev : rep.sets) {
      sum.precision += (ev.*metric).precision;
      sum.recall += (ev.*metric).recall;
      sum.f1 += (ev.*metric).f1;
    }
    (rep.mean.*metric) = {sum.precision / n, sum.recall / n, sum.f1 / n};
  };
  fold(&SetEvaluation::rouge1, report);
  fold(&SetEvaluation::rouge2, report);
  fold(&SetEvaluation::su4, report);
  return report;
}

inline void write_eval_tsv(const std::string& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << "set_id\tmetric\tprecision\trecall\tf1\n";
  auto row = [&out](const std::string& id, const char* metric, const RougeScore& s) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s\t%s\t%.6f\t%.6f\t%.6f\n", id.c_str(), metric,
                  s.precision, s.recall, s.f1);
    out << buf;
  };
  for (const SetEvaluation& ev : report.sets) {
    row(ev.set_id, "ROUGE-1", ev.rouge1);
    row(ev.set_id, "ROUGE-2", ev.rouge2);
    row(ev.set_id, "ROUGE-SU4", ev.su4);
  }
  row("MEAN", "ROUGE-1", report.mean.rouge1);
  row("MEAN", "ROUGE-2", report.mean.rouge2);
  row("MEAN", "ROUGE-SU4", report.mean.su4);
  if (!out) throw Error("cannot write file: " + path);
}

}  // namespace dbowsum
