#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dbowsum/common.hpp"
#include "dbowsum/corpus.hpp"
#include "dbowsum/model.hpp"
#include "dbowsum/vecmath.hpp"

namespace dbowsum {

struct CandidateSentence {
  Sentence sentence;
  EmbeddingVector vector;
  double recon_error = 0.0;
};

// A (partial) summary. vector is empty and recon_error infinite until a
// sentence is selected; complete means no unused candidate still fits the
// word budget.
struct SummaryState {
  std::vector<CandidateSentence> selected;
  int word_count = 0;
  EmbeddingVector vector;
  double recon_error = std::numeric_limits<double>::infinity();
  bool complete = false;
};

enum class Mode { basic, sentence_selection, beam };

struct SummarizerConfig {
  Mode mode = Mode::basic;
  int max_words = 250;
  double theta = 0.7;
  int beam_width = 10;
};

inline const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::sentence_selection: return "ss";
    case Mode::beam: return "beam";
    case Mode::basic: break;
  }
  return "basic";
}

inline std::optional<Mode> parse_mode(const std::string& name) {
  if (name == "basic") return Mode::basic;
  if (name == "ss") return Mode::sentence_selection;
  if (name == "beam") return Mode::beam;
  return std::nullopt;
}

// Re-infers a summary vector from the concatenated tokens of a growing
// selection. Seam for tests that need fixed vectors instead of the model.
using SummaryInferFn = std::function<EmbeddingVector(const std::vector<std::string>&)>;

inline SummaryInferFn summary_infer_fn(const DbowModel& model) {
  return [&model](const std::vector<std::string>& tokens) {
    return model.infer_vector(tokens);
  };
}

namespace detail {

inline bool has_in_vocab_token(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  for (const std::string& token : tokens) {
    if (vocab.index_of(token)) return true;
  }
  return false;
}

}  // namespace detail

// Mean of the per-document inferred vectors. Documents with no
// in-vocabulary token are skipped and counted, not fatal.
inline EmbeddingVector docset_centroid(const DocSet& set, const DbowModel& model,
                                       std::size_t* docs_skipped = nullptr) {
  std::vector<EmbeddingVector> vectors;
  std::size_t skipped = 0;
  for (const TokenizedDocument& doc : set.documents) {
    if (!detail::has_in_vocab_token(doc.tokens, model.vocab())) {
      ++skipped;
      continue;
    }
    vectors.push_back(model.infer_vector(doc.tokens));
  }
  if (docs_skipped) *docs_skipped = skipped;
  return centroid(vectors);
}

// All sentences of the set in (document, position) order. String-identical
// sentences (wire-copy duplicates across articles) are kept once.
inline std::vector<Sentence> candidate_sentences(const DocSet& set) {
  std::vector<Sentence> out;
  std::unordered_set<std::string> seen;
  for (const TokenizedDocument& doc : set.documents) {
    for (const Sentence& sentence : doc.sentences) {
      if (seen.insert(sentence.text).second) out.push_back(sentence);
    }
  }
  return out;
}

// Infers a vector per sentence and sorts ascending by reconstruction error
// against the centroid, ties broken by (doc_id, position). Sentences with
// no in-vocabulary token are dropped and counted.
inline std::vector<CandidateSentence> rank_candidates(const std::vector<Sentence>& sentences,
                                                      const DbowModel& model,
                                                      const EmbeddingVector& c,
                                                      std::size_t* dropped = nullptr) {
  std::vector<CandidateSentence> out;
  std::size_t skipped = 0;
  for (const Sentence& sentence : sentences) {
    if (!detail::has_in_vocab_token(sentence.tokens, model.vocab())) {
      ++skipped;
      continue;
    }
    CandidateSentence cand;
    cand.sentence = sentence;
    cand.vector = model.infer_vector(sentence.tokens);
    cand.recon_error = recon_error(c, cand.vector);
    out.push_back(std::move(cand));
  }
  if (dropped) *dropped = skipped;
  std::sort(out.begin(), out.end(), [](const CandidateSentence& a, const CandidateSentence& b) {
    if (a.recon_error != b.recon_error) return a.recon_error < b.recon_error;
    if (a.sentence.doc_id != b.sentence.doc_id) return a.sentence.doc_id < b.sentence.doc_id;
    return a.sentence.position < b.sentence.position;
  });
  return out;
}

// Greedy scan over the ranked list: a candidate is added iff it fits the
// word budget and its cosine to every selected sentence is <= theta.
// Rejection does not stop the scan.
inline SummaryState select_sentences(const std::vector<CandidateSentence>& ranked,
                                     const SummarizerConfig& cfg) {
  SummaryState state;
  std::vector<char> used(ranked.size(), 0);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const CandidateSentence& cand = ranked[i];
    if (state.word_count + cand.sentence.word_count > cfg.max_words) continue;
    bool redundant = false;
    for (const CandidateSentence& sel : state.selected) {
      if (cosine_sim(cand.vector, sel.vector) > cfg.theta) {
        redundant = true;
        break;
      }
    }
    if (redundant) continue;
    state.selected.push_back(cand);
    state.word_count += cand.sentence.word_count;
    used[i] = 1;
  }
  state.complete = true;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (!used[i] && state.word_count + ranked[i].sentence.word_count <= cfg.max_words) {
      state.complete = false;
      break;
    }
  }
  return state;
}

// Beam search over ordered selections. Starts from the empty summary;
// every incomplete state is expanded by every unused candidate that fits,
// the expanded summary vector is re-inferred from the concatenated tokens,
// and the top beam_width states by reconstruction error survive (ties by
// lexicographic selected-index list). Stops when all survivors are
// complete.
inline SummaryState beam_search(const std::vector<CandidateSentence>& candidates,
                                const EmbeddingVector& c, const SummarizerConfig& cfg,
                                const SummaryInferFn& infer) {
  if (cfg.beam_width < 1) throw Error("beam_width must be >= 1");
  struct Node {
    std::vector<std::uint32_t> sel;
    int words = 0;
    EmbeddingVector vec;
    double err = std::numeric_limits<double>::infinity();
    bool complete = false;
  };
  std::vector<Node> beam(1);
  while (true) {
    bool all_complete = true;
    for (const Node& node : beam) {
      if (!node.complete) {
        all_complete = false;
        break;
      }
    }
    if (all_complete) break;

    std::vector<Node> next;
    for (Node& node : beam) {
      if (node.complete) {
        next.push_back(std::move(node));
        continue;
      }
      bool expanded = false;
      for (std::uint32_t i = 0; i < candidates.size(); ++i) {
        if (std::find(node.sel.begin(), node.sel.end(), i) != node.sel.end()) continue;
        const CandidateSentence& cand = candidates[i];
        if (node.words + cand.sentence.word_count > cfg.max_words) continue;
        expanded = true;
        Node child;
        child.sel = node.sel;
        child.sel.push_back(i);
        child.words = node.words + cand.sentence.word_count;
        std::vector<std::string> tokens;
        for (std::uint32_t j : child.sel) {
          const std::vector<std::string>& t = candidates[j].sentence.tokens;
          tokens.insert(tokens.end(), t.begin(), t.end());
        }
        child.vec = infer(tokens);
        child.err = recon_error(c, child.vec);
        next.push_back(std::move(child));
      }
      if (!expanded) {
        node.complete = true;
        next.push_back(std::move(node));
      }
    }
    std::sort(next.begin(), next.end(), [](const Node& a, const Node& b) {
      if (a.err != b.err) return a.err < b.err;
      return a.sel < b.sel;
    });
    if (next.size() > static_cast<std::size_t>(cfg.beam_width)) {
      next.resize(static_cast<std::size_t>(cfg.beam_width));
    }
    beam = std::move(next);
  }

  const Node& best = beam.front();
  SummaryState state;
  state.selected.reserve(best.sel.size());
  for (std::uint32_t i : best.sel) state.selected.push_back(candidates[i]);
  state.word_count = best.words;
  state.vector = best.vec;
  state.recon_error = best.err;
  state.complete = true;
  return state;
}

inline SummaryState beam_search(const std::vector<CandidateSentence>& candidates,
                                const DbowModel& model, const EmbeddingVector& c,
                                const SummarizerConfig& cfg) {
  return beam_search(candidates, c, cfg, summary_infer_fn(model));
}

// Fills in the summary-level vector and reconstruction error from the
// concatenated tokens of the selection. Greedy modes report their error
// through this, so numbers are comparable with beam output.
inline void finalize_summary(SummaryState& state, const EmbeddingVector& c,
                             const SummaryInferFn& infer) {
  if (state.selected.empty()) {
    state.vector.clear();
    state.recon_error = std::numeric_limits<double>::infinity();
    return;
  }
  std::vector<std::string> tokens;
  for (const CandidateSentence& cand : state.selected) {
    tokens.insert(tokens.end(), cand.sentence.tokens.begin(), cand.sentence.tokens.end());
  }
  state.vector = infer(tokens);
  state.recon_error = recon_error(c, state.vector);
}

struct SummarizeStats {
  std::size_t docs_skipped = 0;
  std::size_t sentences_dropped = 0;
};

inline SummaryState summarize(const DocSet& set, const DbowModel& model,
                              const SummarizerConfig& cfg, SummarizeStats* stats = nullptr) {
  SummarizeStats local;
  const EmbeddingVector c = docset_centroid(set, model, &local.docs_skipped);
  const std::vector<Sentence> sentences = candidate_sentences(set);
  const std::vector<CandidateSentence> ranked =
      rank_candidates(sentences, model, c, &local.sentences_dropped);

  SummaryState state;
  if (cfg.mode == Mode::beam) {
    state = beam_search(ranked, c, cfg, summary_infer_fn(model));
  } else {
    SummarizerConfig effective = cfg;
    if (cfg.mode == Mode::basic) effective.theta = 1.0;
    state = select_sentences(ranked, effective);
    finalize_summary(state, c, summary_infer_fn(model));
  }
  if (stats) *stats = local;
  return state;
}

// Round-robin leading sentences: sentence 0 of every document in doc_id
// order, then sentence 1, and so on, keeping whatever fits the budget.
inline SummaryState lead_baseline(const DocSet& set, int max_words) {
  if (set.documents.empty()) throw Error("no documents");
  std::vector<const TokenizedDocument*> docs;
  docs.reserve(set.documents.size());
  for (const TokenizedDocument& doc : set.documents) docs.push_back(&doc);
  std::sort(docs.begin(), docs.end(), [](const TokenizedDocument* a, const TokenizedDocument* b) {
    return a->doc_id < b->doc_id;
  });
  std::size_t max_len = 0;
  for (const TokenizedDocument* doc : docs) max_len = std::max(max_len, doc->sentences.size());

  SummaryState state;
  for (std::size_t round = 0; round < max_len; ++round) {
    for (const TokenizedDocument* doc : docs) {
      if (round >= doc->sentences.size()) continue;
      const Sentence& sentence = doc->sentences[round];
      if (state.word_count + sentence.word_count > max_words) continue;
      state.selected.push_back({sentence, {}, 0.0});
      state.word_count += sentence.word_count;
    }
  }
  state.complete = true;
  return state;
}

// Uniform choice among the still-fitting sentences until nothing fits.
inline SummaryState random_baseline(const DocSet& set, int max_words, std::uint64_t seed) {
  if (set.documents.empty()) throw Error("no documents");
  std::vector<const Sentence*> all;
  for (const TokenizedDocument& doc : set.documents) {
    for (const Sentence& sentence : doc.sentences) all.push_back(&sentence);
  }
  SplitMix64 rng(seed);
  std::vector<char> used(all.size(), 0);
  SummaryState state;
  while (true) {
    std::vector<std::size_t> fits;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!used[i] && state.word_count + all[i]->word_count <= max_words) fits.push_back(i);
    }
    if (fits.empty()) break;
    std::size_t pick = fits[rng.next_below(fits.size())];
    used[pick] = 1;
    state.selected.push_back({*all[pick], {}, 0.0});
    state.word_count += all[pick]->word_count;
  }
  state.complete = true;
  return state;
}

inline void write_summary_file(const std::string& path, const std::string& set_id,
                               const std::string& mode, const SummaryState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  char buf[64];
  if (std::isinf(state.recon_error)) {
    std::snprintf(buf, sizeof(buf), "inf");
  } else {
    std::snprintf(buf, sizeof(buf), "%.9g", state.recon_error);
  }
  out << "# set=" << set_id << " mode=" << mode << " recon_error=" << buf
      << " words=" << state.word_count << "\n";
  for (const CandidateSentence& cand : state.selected) out << cand.sentence.text << "\n";
  if (!out) throw Error("cannot write file: " + path);
}

}  // namespace dbowsum
