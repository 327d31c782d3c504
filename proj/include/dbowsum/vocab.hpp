#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "dbowsum/common.hpp"
#include "dbowsum/corpus.hpp"
#include "dbowsum/rng.hpp"

namespace dbowsum {

struct VocabEntry {
  std::string token;
  std::uint64_t count = 0;
};

// Token inventory with counts, subsampling keep-probabilities and a
// count^0.75 negative-sampling table. Immutable once built; shareable
// across threads.
class Vocabulary {
 public:
  static constexpr int kDefaultMinCount = 5;
  static constexpr double kDefaultSubsampleT = 1e-4;
  static constexpr std::size_t kDefaultTableSize = 10'000'000;
  static constexpr double kTableExponent = 0.75;

  static Vocabulary build(const std::vector<TokenizedDocument>& corpus,
                          int min_count = kDefaultMinCount,
                          double subsample_t = kDefaultSubsampleT,
                          std::size_t table_size = kDefaultTableSize) {
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const TokenizedDocument& doc : corpus) {
      for (const std::string& token : doc.tokens) ++counts[token];
    }
    if (counts.empty()) throw Error("empty corpus");
    return from_counts(counts, min_count, subsample_t, table_size);
  }

  static Vocabulary from_counts(const std::unordered_map<std::string, std::uint64_t>& counts,
                                int min_count = kDefaultMinCount,
                                double subsample_t = kDefaultSubsampleT,
                                std::size_t table_size = kDefaultTableSize) {
    if (min_count < 1) throw Error("min_count must be >= 1");
    if (!(subsample_t > 0)) throw Error("subsample_t must be > 0");
    if (counts.empty()) throw Error("empty corpus");

    std::vector<VocabEntry> entries;
    for (const auto& [token, count] : counts) {
      if (count >= static_cast<std::uint64_t>(min_count)) entries.push_back({token, count});
    }
    if (entries.empty()) {
      throw Error("empty vocabulary: no token reaches min_count " + std::to_string(min_count));
    }
    // Dense indices by descending count, ties alphabetically.
    std::sort(entries.begin(), entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
      if (a.count != b.count) return a.count > b.count;
      return a.token < b.token;
    });
    return Vocabulary(std::move(entries), min_count, subsample_t, table_size);
  }

  std::size_t size() const { return entries_.size(); }
  const VocabEntry& entry(std::size_t index) const { return entries_[index]; }
  std::uint64_t total_count() const { return total_count_; }
  int min_count() const { return min_count_; }
  double subsample_t() const { return subsample_t_; }
  std::size_t table_size() const { return table_.size(); }

  std::optional<std::size_t> index_of(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // P(keep token at a training position); word2vec subsampling curve.
  double keep_prob(std::size_t index) const { return keep_prob_[index]; }

  // One draw from the count^0.75 unigram table.
  std::size_t sample(SplitMix64& rng) const {
    return table_[rng.next_below(table_.size())];
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << to_text();
    if (!out) throw Error("cannot write file: " + path);
  }

  static Vocabulary load(const std::string& path,
                         std::size_t table_size = kDefaultTableSize) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_text(buffer.str(), table_size);
  }

  // Line-oriented text form: header, then token<TAB>count per index.
  std::string to_text() const {
    std::ostringstream out;
    char header[80];
    std::snprintf(header, sizeof(header), "DBOWVOCAB 1 %d %.17g\n", min_count_, subsample_t_);
    out << header;
    for (const VocabEntry& e : entries_) {
      out << e.token << '\t' << e.count << '\n';
    }
    return out.str();
  }

  static Vocabulary from_text(const std::string& text,
                              std::size_t table_size = kDefaultTableSize) {
    std::istringstream in(text);
    std::string magic;
    int version = 0;
    int min_count = 0;
    double subsample_t = 0;
    std::string header;
    if (!std::getline(in, header)) throw Error("unrecognized vocabulary file");
    std::istringstream hs(header);
    if (!(hs >> magic >> version >> min_count >> subsample_t) || magic != "DBOWVOCAB" ||
        version != 1) {
      throw Error("unrecognized vocabulary file");
    }
    std::vector<VocabEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::size_t tab = line.find('\t');
      if (tab == std::string::npos) throw Error("corrupt vocabulary file");
      VocabEntry e;
      e.token = line.substr(0, tab);
      try {
        e.count = std::stoull(line.substr(tab + 1));
      } catch (const std::exception&) {
        throw Error("corrupt vocabulary file");
      }
      entries.push_back(std::move(e));
    }
    if (entries.empty()) throw Error("corrupt vocabulary file");
    return Vocabulary(std::move(entries), min_count, subsample_t, table_size);
  }

  bool operator==(const Vocabulary& other) const {
    if (min_count_ != other.min_count_ || subsample_t_ != other.subsample_t_ ||
        entries_.size() != other.entries_.size()) {
      return false;
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].token != other.entries_[i].token ||
          entries_[i].count != other.entries_[i].count) {
        return false;
      }
    }
    return true;
  }

 private:
  Vocabulary(std::vector<VocabEntry> entries, int min_count, double subsample_t,
             std::size_t table_size)
      : entries_(std::move(entries)), min_count_(min_count), subsample_t_(subsample_t) {
    index_.reserve(entries_.size());
    total_count_ = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      index_[entries_[i].token] = i;
      total_count_ += entries_[i].count;
    }

    keep_prob_.resize(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      double f = static_cast<double>(entries_[i].count) / static_cast<double>(total_count_);
      double p = (std::sqrt(f / subsample_t_) + 1.0) * subsample_t_ / f;
      keep_prob_[i] = std::min(1.0, p);
    }

    build_table(table_size);
  }

  void build_table(std::size_t table_size) {
    if (table_size == 0) throw Error("sampling table size must be > 0");
    double total_pow = 0.0;
    for (const VocabEntry& e : entries_) {
      total_pow += std::pow(static_cast<double>(e.count), kTableExponent);
    }
    table_.resize(table_size);
    std::size_t token = 0;
    double cumulative =
        std::pow(static_cast<double>(entries_[0].count), kTableExponent) / total_pow;
    for (std::size_t j = 0; j < table_size; ++j) {
      table_[j] = static_cast<std::uint32_t>(token);
      if (static_cast<double>(j + 1) / static_cast<double>(table_size) > cumulative &&
          token + 1 < entries_.size()) {
        ++token;
        cumulative +=
            std::pow(static_cast<double>(entries_[token].count), kTableExponent) / total_pow;
      }
    }
  }

  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> keep_prob_;
  std::vector<std::uint32_t> table_;
  std::uint64_t total_count_ = 0;
  int min_count_ = kDefaultMinCount;
  double subsample_t_ = kDefaultSubsampleT;
};

}  // namespace dbowsum
