#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "dbowsum/common.hpp"
#include "dbowsum/corpus.hpp"
#include "dbowsum/rng.hpp"
#include "dbowsum/vecmath.hpp"
#include "dbowsum/vocab.hpp"

namespace dbowsum {

struct DbowHyperparams {
  int dim = 300;
  int window = 8;  // kept for config-grid parity; does not change which pairs exist
  int negatives = 5;
  int epochs = 10;
  double alpha0 = 0.025;
  double alpha_min = 1e-4;
  int infer_epochs = 50;
  std::uint64_t seed = 1;
};

struct TrainingReport {
  double final_avg_loss = 0.0;
  std::uint64_t pairs_seen = 0;
  std::uint64_t oov_dropped = 0;
  std::vector<double> epoch_avg_loss;
};

namespace detail {

inline void write_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

inline void write_u16(std::ostream& out, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  write_bytes(out, b, 2);
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  write_bytes(out, b, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  write_bytes(out, b, 8);
}

inline void write_f32(std::ostream& out, float v) {
  write_u32(out, std::bit_cast<std::uint32_t>(v));
}

inline void read_bytes(std::istream& in, void* data, std::size_t n) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw Error("corrupt model file");
}

inline std::uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  read_bytes(in, b, 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

inline std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  read_bytes(in, b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

inline std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  read_bytes(in, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

inline float read_f32(std::istream& in) { return std::bit_cast<float>(read_u32(in)); }

}  // namespace detail

// Distributed bag-of-words paragraph-vector model: a document-vector matrix
// D and an output word-weight matrix U, trained with negative sampling so
// that each document's vector predicts the words it contains. Templated on
// the scalar type; float is the production instantiation, double exists for
// numeric verification at higher precision.
template <class Real>
class DbowModelT {
  static_assert(std::is_floating_point_v<Real>);

 public:
  static constexpr double kInferAlpha0 = 0.025;
  static constexpr double kInferAlphaMin = 1e-4;

  DbowModelT(Vocabulary vocab, const std::vector<std::string>& doc_ids,
             DbowHyperparams hyper)
      : vocab_(std::move(vocab)), hyper_(hyper) {
    if (hyper_.dim < 2) throw Error("dim must be >= 2");
    if (hyper_.window < 1) throw Error("window must be >= 1");
    if (hyper_.negatives < 0) throw Error("negatives must be >= 0");
    if (hyper_.epochs < 1) throw Error("epochs must be >= 1");
    if (hyper_.infer_epochs < 1) throw Error("infer_epochs must be >= 1");
    if (!(hyper_.alpha0 > hyper_.alpha_min) || !(hyper_.alpha_min > 0)) {
      throw Error("require alpha0 > alpha_min > 0");
    }
    if (doc_ids.empty()) throw Error("no document ids");
    word_weights_.assign(vocab_.size() * dim(), Real(0));
    add_documents(doc_ids);
  }

  std::size_t dim() const { return static_cast<std::size_t>(hyper_.dim); }
  const Vocabulary& vocab() const { return vocab_; }
  const DbowHyperparams& hyper() const { return hyper_; }
  DbowHyperparams& hyper() { return hyper_; }
  std::size_t doc_count() const { return doc_ids_.size(); }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }

  std::optional<std::size_t> doc_row(const std::string& doc_id) const {
    auto it = doc_index_.find(doc_id);
    if (it == doc_index_.end()) return std::nullopt;
    return it->second;
  }

  std::span<Real> doc_vector(std::size_t row) {
    return {doc_vectors_.data() + row * dim(), dim()};
  }
  std::span<const Real> doc_vector(std::size_t row) const {
    return {doc_vectors_.data() + row * dim(), dim()};
  }
  std::span<Real> word_weight(std::size_t word) {
    return {word_weights_.data() + word * dim(), dim()};
  }
  std::span<const Real> word_weight(std::size_t word) const {
    return {word_weights_.data() + word * dim(), dim()};
  }

  // Appends rows for new doc ids; an already-known id has its row
  // re-initialized (fine-tuning re-randomizes target-set vectors). Row
  // initialization depends only on (seed, doc_id), uniform in
  // (-0.5/dim, 0.5/dim); word weights start at zero.
  void add_documents(const std::vector<std::string>& doc_ids) {
    for (const std::string& id : doc_ids) {
      auto it = doc_index_.find(id);
      std::size_t row;
      if (it == doc_index_.end()) {
        row = doc_ids_.size();
        doc_ids_.push_back(id);
        doc_index_[id] = row;
        doc_vectors_.resize(doc_ids_.size() * dim());
      } else {
        row = it->second;
      }
      SplitMix64 rng(mix_seed(hyper_.seed, fnv1a64({id})));
      auto d = doc_vector(row);
      for (std::size_t j = 0; j < dim(); ++j) {
        d[j] = static_cast<Real>((rng.next_real() - 0.5) / static_cast<double>(dim()));
      }
    }
  }

  // Negative-sampling loss for one (document, target word) observation:
  //   -log sigmoid(u_t . d) - sum_n log sigmoid(-u_n . d)
  double pair_loss(std::size_t doc_row, std::size_t target,
                   std::span<const std::uint32_t> negatives) const {
    const Real* d = doc_vectors_.data() + doc_row * dim();
    double loss = detail::softplus(-dot(word_weights_.data() + target * dim(), d, dim()));
    for (std::uint32_t n : negatives) {
      loss += detail::softplus(dot(word_weights_.data() + n * dim(), d, dim()));
    }
    return loss;
  }

  // One SGD step on the pair. All right-hand sides use pre-update values:
  //   u_t += alpha * (1 - sigmoid(u_t.d)) * d
  //   u_n -= alpha * sigmoid(u_n.d) * d
  //   d   += alpha * ((1 - sigmoid(u_t.d)) * u_t - sum_n sigmoid(u_n.d) * u_n)
  // Returns the loss at the pre-update parameters. Callers must not list the
  // target among the negatives.
  double train_pair(std::size_t doc_row, std::size_t target,
                    std::span<const std::uint32_t> negatives, double alpha) {
    std::vector<Real> grad(dim());
    std::vector<double> sig(negatives.size());
    return step_pair<true>(doc_vectors_.data() + doc_row * dim(), word_weights_.data(),
                           target, negatives, alpha, grad, sig);
  }

  // One pass of SGD per epoch over every document: each in-vocabulary token
  // that survives subsampling becomes one (document, word) pair. The
  // learning rate decays linearly from alpha0 to alpha_min over the full
  // schedule of epochs * positions. workers > 1 updates the shared matrices
  // without locks; workers == 1 is bit-deterministic for a fixed seed.
  TrainingReport train(const std::vector<TokenizedDocument>& corpus, int workers = 1) {
    if (workers < 1) throw Error("workers must be >= 1");
    const std::size_t n_docs = corpus.size();
    std::vector<std::size_t> rows(n_docs);
    std::vector<std::vector<std::uint32_t>> doc_tokens(n_docs);
    TrainingReport report;
    std::uint64_t total_positions = 0;
    for (std::size_t i = 0; i < n_docs; ++i) {
      const std::string id = qualified_doc_id(corpus[i]);
      auto row = doc_row(id);
      if (!row) row = doc_row(corpus[i].doc_id);  // ids may be unqualified
      if (!row) throw Error("unknown doc_id: " + id);
      rows[i] = *row;
      doc_tokens[i].reserve(corpus[i].tokens.size());
      for (const std::string& token : corpus[i].tokens) {
        if (auto w = vocab_.index_of(token)) {
          doc_tokens[i].push_back(static_cast<std::uint32_t>(*w));
        } else {
          ++report.oov_dropped;
        }
      }
      total_positions += doc_tokens[i].size();
    }
    if (total_positions == 0) throw Error("no in-vocabulary tokens in corpus");

    const int epochs = hyper_.epochs;
    const double total_ticks =
        static_cast<double>(total_positions) * static_cast<double>(epochs);
    std::atomic<std::uint64_t> tick{0};
    std::vector<std::vector<double>> epoch_loss(workers, std::vector<double>(epochs, 0.0));
    std::vector<std::vector<std::uint64_t>> epoch_pairs(
        workers, std::vector<std::uint64_t>(epochs, 0));

    auto run_worker = [&](int w) {
      SplitMix64 rng(mix_seed(hyper_.seed, 0x545241494eULL + static_cast<std::uint64_t>(w)));
      std::vector<Real> grad(dim());
      std::vector<double> sig;
      std::vector<std::uint32_t> negatives;
      for (int epoch = 0; epoch < epochs; ++epoch) {
        for (std::size_t i = static_cast<std::size_t>(w); i < n_docs;
             i += static_cast<std::size_t>(workers)) {
          Real* d = doc_vectors_.data() + rows[i] * dim();
          for (std::uint32_t target : doc_tokens[i]) {
            std::uint64_t k = tick.fetch_add(1, std::memory_order_relaxed);
            double p = vocab_.keep_prob(target);
            if (p < 1.0 && rng.next_real() >= p) continue;
            double alpha =
                hyper_.alpha0 -
                (hyper_.alpha0 - hyper_.alpha_min) * (static_cast<double>(k) / total_ticks);
            if (alpha < hyper_.alpha_min) alpha = hyper_.alpha_min;
            draw_negatives(rng, target, negatives);
            sig.resize(negatives.size());
            epoch_loss[w][epoch] +=
                step_pair<true>(d, word_weights_.data(), target, negatives, alpha, grad, sig);
            ++epoch_pairs[w][epoch];
          }
        }
      }
    };

    if (workers == 1) {
      run_worker(0);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(workers);
      for (int w = 0; w < workers; ++w) threads.emplace_back(run_worker, w);
      for (std::thread& t : threads) t.join();
    }

    report.epoch_avg_loss.resize(epochs, 0.0);
    for (int epoch = 0; epoch < epochs; ++epoch) {
      double loss = 0.0;
      std::uint64_t pairs = 0;
      for (int w = 0; w < workers; ++w) {
        loss += epoch_loss[w][epoch];
        pairs += epoch_pairs[w][epoch];
      }
      report.epoch_avg_loss[epoch] = pairs ? loss / static_cast<double>(pairs) : 0.0;
      report.pairs_seen += pairs;
    }
    report.final_avg_loss = report.epoch_avg_loss.back();
    return report;
  }

  // Embeds an unseen text: a fresh vector (seeded as in construction) is
  // refined for infer_epochs passes over the tokens with the word weights
  // frozen. The model is never mutated.
  std::vector<Real> infer_vector(const std::vector<std::string>& tokens,
                                 std::uint64_t seed) const {
    std::vector<std::uint32_t> in_vocab;
    in_vocab.reserve(tokens.size());
    for (const std::string& token : tokens) {
      if (auto w = vocab_.index_of(token)) {
        in_vocab.push_back(static_cast<std::uint32_t>(*w));
      }
    }
    if (in_vocab.empty()) throw Error("no in-vocabulary tokens");

    SplitMix64 rng(seed);
    std::vector<Real> d(dim());
    for (std::size_t j = 0; j < dim(); ++j) {
      d[j] = static_cast<Real>((rng.next_real() - 0.5) / static_cast<double>(dim()));
    }
    std::vector<Real> grad(dim());
    std::vector<double> sig;
    std::vector<std::uint32_t> negatives;
    const int passes = hyper_.infer_epochs;
    for (int pass = 0; pass < passes; ++pass) {
      double alpha = kInferAlpha0 - (kInferAlpha0 - kInferAlphaMin) *
                                        (static_cast<double>(pass) / passes);
      for (std::uint32_t target : in_vocab) {
        draw_negatives(rng, target, negatives);
        sig.resize(negatives.size());
        step_pair<false>(d.data(), word_weights_.data(), target, negatives, alpha, grad, sig);
      }
    }
    return d;
  }

  // Seed derived from the tokens themselves: the same text always infers
  // the same vector.
  std::vector<Real> infer_vector(const std::vector<std::string>& tokens) const {
    return infer_vector(tokens, fnv1a64(tokens));
  }

  // Exact softmax P(word | doc) over the whole vocabulary. Verification
  // oracle only; refuses vocabularies where full softmax is unreasonable.
  std::vector<double> softmax_distribution(std::size_t doc_row) const {
    if (vocab_.size() > 1000) throw Error("softmax oracle limited to vocab size <= 1000");
    const Real* d = doc_vectors_.data() + doc_row * dim();
    std::vector<double> logits(vocab_.size());
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < vocab_.size(); ++w) {
      logits[w] = dot(word_weights_.data() + w * dim(), d, dim());
      if (logits[w] > max_logit) max_logit = logits[w];
    }
    double z = 0.0;
    for (double& l : logits) {
      l = std::exp(l - max_logit);
      z += l;
    }
    for (double& l : logits) l /= z;
    return logits;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    detail::write_bytes(out, "DBOW", 4);
    detail::write_u16(out, 1);
    detail::write_u32(out, static_cast<std::uint32_t>(dim()));
    detail::write_u64(out, vocab_.size());
    detail::write_u64(out, doc_count());

    const std::string vocab_text = vocab_.to_text();
    detail::write_u64(out, vocab_text.size());
    detail::write_bytes(out, vocab_text.data(), vocab_text.size());

    for (Real v : doc_vectors_) detail::write_f32(out, static_cast<float>(v));
    for (Real v : word_weights_) detail::write_f32(out, static_cast<float>(v));

    std::ostringstream kv;
    char buf[64];
    kv << "window=" << hyper_.window << '\n';
    kv << "negatives=" << hyper_.negatives << '\n';
    kv << "epochs=" << hyper_.epochs << '\n';
    std::snprintf(buf, sizeof(buf), "%.17g", hyper_.alpha0);
    kv << "alpha0=" << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%.17g", hyper_.alpha_min);
    kv << "alpha_min=" << buf << '\n';
    kv << "infer_epochs=" << hyper_.infer_epochs << '\n';
    kv << "seed=" << hyper_.seed << '\n';
    kv << "table_size=" << vocab_.table_size() << '\n';
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
      kv << "doc." << i << '=' << doc_ids_[i] << '\n';
    }
    const std::string kv_text = kv.str();
    detail::write_u64(out, kv_text.size());
    detail::write_bytes(out, kv_text.data(), kv_text.size());
    if (!out) throw Error("cannot write file: " + path);
  }

  static DbowModelT load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4) throw Error("corrupt model file");
    if (std::memcmp(magic, "DBOW", 4) != 0) throw Error("unrecognized model file");
    if (detail::read_u16(in) != 1) throw Error("unrecognized model file");
    const std::uint32_t dim = detail::read_u32(in);
    const std::uint64_t vocab_size = detail::read_u64(in);
    const std::uint64_t docs = detail::read_u64(in);
    if (dim < 2) throw Error("corrupt model file");

    const std::uint64_t vocab_len = detail::read_u64(in);
    std::string vocab_text(vocab_len, '\0');
    detail::read_bytes(in, vocab_text.data(), vocab_len);

    std::vector<Real> doc_vectors(docs * dim);
    for (Real& v : doc_vectors) v = static_cast<Real>(detail::read_f32(in));
    std::vector<Real> word_weights(vocab_size * dim);
    for (Real& v : word_weights) v = static_cast<Real>(detail::read_f32(in));

    const std::uint64_t kv_len = detail::read_u64(in);
    std::string kv_text(kv_len, '\0');
    detail::read_bytes(in, kv_text.data(), kv_len);

    DbowHyperparams hyper;
    hyper.dim = static_cast<int>(dim);
    std::size_t table_size = Vocabulary::kDefaultTableSize;
    std::vector<std::string> doc_ids(docs);
    std::vector<bool> seen(docs, false);
    std::istringstream kvs(kv_text);
    std::string line;
    while (std::getline(kvs, line)) {
      if (line.empty()) continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) throw Error("corrupt model file");
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 1);
      try {
        if (key == "window") {
          hyper.window = std::stoi(value);
        } else if (key == "negatives") {
          hyper.negatives = std::stoi(value);
        } else if (key == "epochs") {
          hyper.epochs = std::stoi(value);
        } else if (key == "alpha0") {
          hyper.alpha0 = std::stod(value);
        } else if (key == "alpha_min") {
          hyper.alpha_min = std::stod(value);
        } else if (key == "infer_epochs") {
          hyper.infer_epochs = std::stoi(value);
        } else if (key == "seed") {
          hyper.seed = std::stoull(value);
        } else if (key == "table_size") {
          table_size = std::stoull(value);
        } else if (key.rfind("doc.", 0) == 0) {
          std::size_t row = std::stoull(key.substr(4));
          if (row >= docs) throw Error("corrupt model file");
          doc_ids[row] = value;
          seen[row] = true;
        }
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
        throw Error("corrupt model file");
      }
    }
    for (bool s : seen) {
      if (!s) throw Error("corrupt model file");
    }

    Vocabulary vocab = Vocabulary::from_text(vocab_text, table_size);
    if (vocab.size() != vocab_size) throw Error("corrupt model file");

    DbowModelT model(std::move(vocab), doc_ids, hyper);
    model.doc_vectors_ = std::move(doc_vectors);
    model.word_weights_ = std::move(word_weights);
    return model;
  }

 private:
  // Core update shared by training (UpdateWords) and inference (frozen U).
  // The loss and every right-hand side are evaluated at the pre-update
  // parameters; d is written last.
  template <bool UpdateWords>
  double step_pair(Real* d,
                   std::conditional_t<UpdateWords, Real, const Real>* words,
                   std::size_t target, std::span<const std::uint32_t> negatives,
                   double alpha, std::vector<Real>& grad, std::vector<double>& sig) const {
    const std::size_t n = dim();
    auto* u_t = words + target * n;
    const double x_t = dot(u_t, d, n);
    const double s_t = detail::sigmoid(x_t);
    const double g_t = 1.0 - s_t;
    double loss = detail::softplus(-x_t);
    for (std::size_t j = 0; j < n; ++j) grad[j] = static_cast<Real>(g_t * u_t[j]);
    for (std::size_t k = 0; k < negatives.size(); ++k) {
      const auto* u_n = words + negatives[k] * n;
      const double x_n = dot(u_n, d, n);
      sig[k] = detail::sigmoid(x_n);
      loss += detail::softplus(x_n);
      for (std::size_t j = 0; j < n; ++j) grad[j] -= static_cast<Real>(sig[k] * u_n[j]);
    }
    if (alpha != 0.0) {
      if constexpr (UpdateWords) {
        for (std::size_t j = 0; j < n; ++j) u_t[j] += static_cast<Real>(alpha * g_t * d[j]);
        for (std::size_t k = 0; k < negatives.size(); ++k) {
          auto* u_n = words + negatives[k] * n;
          for (std::size_t j = 0; j < n; ++j) {
            u_n[j] -= static_cast<Real>(alpha * sig[k] * d[j]);
          }
        }
      }
      for (std::size_t j = 0; j < n; ++j) d[j] += static_cast<Real>(alpha * grad[j]);
    }
    return loss;
  }

  void draw_negatives(SplitMix64& rng, std::size_t target,
                      std::vector<std::uint32_t>& out) const {
    out.clear();
    for (int k = 0; k < hyper_.negatives; ++k) {
      std::size_t w = vocab_.sample(rng);
      if (w == target) continue;  // skip rather than redraw, as word2vec does
      out.push_back(static_cast<std::uint32_t>(w));
    }
  }

  Vocabulary vocab_;
  DbowHyperparams hyper_;
  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, std::size_t> doc_index_;
  std::vector<Real> doc_vectors_;   // doc_count x dim, row-major
  std::vector<Real> word_weights_;  // vocab x dim, row-major
};

using DbowModel = DbowModelT<float>;

}  // namespace dbowsum
