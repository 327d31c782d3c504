#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dbowsum/common.hpp"
#include "dbowsum/text.hpp"

namespace dbowsum {

struct Sentence {
  std::string text;
  std::vector<std::string> tokens;
  std::string doc_id;
  int position = 0;    // 0-based index within the document
  int word_count = 0;  // whitespace-delimited words in `text`
};

struct TokenizedDocument {
  std::string doc_id;
  std::string set_id;
  std::vector<Sentence> sentences;
  std::vector<std::string> tokens;  // all sentence tokens, concatenated in order
};

// One multi-document set: the unit a summary is produced for. Reference
// summaries, when present, come from a refs/ subdirectory.
struct DocSet {
  std::string set_id;
  std::vector<TokenizedDocument> documents;
  std::vector<std::string> reference_ids;
  std::vector<std::string> reference_texts;
};

inline TokenizedDocument tokenize_document(const std::string& doc_id,
                                           const std::string& set_id,
                                           const std::string& text) {
  TokenizedDocument doc;
  doc.doc_id = doc_id;
  doc.set_id = set_id;
  for (const std::string& sentence_text : segment_sentences(text)) {
    Sentence sentence;
    sentence.text = sentence_text;
    sentence.tokens = tokenize(sentence_text);
    if (sentence.tokens.empty()) continue;  // punctuation-only fragment
    sentence.doc_id = doc_id;
    sentence.position = static_cast<int>(doc.sentences.size());
    sentence.word_count = count_words(sentence_text);
    doc.tokens.insert(doc.tokens.end(), sentence.tokens.begin(), sentence.tokens.end());
    doc.sentences.push_back(std::move(sentence));
  }
  return doc;
}

namespace detail {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error("cannot read file: " + path.string());
  return buffer.str();
}

inline std::vector<std::filesystem::path> sorted_regular_files(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  return files;
}

}  // namespace detail

// Loads one document-set directory: every regular file is a document
// (doc_id = file name, lexicographic order); an optional refs/ subdirectory
// holds reference summaries.
inline DocSet load_docset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error("not a directory: " + dir.string());
  }
  DocSet set;
  set.set_id = dir.filename().string();
  if (set.set_id.empty()) set.set_id = dir.parent_path().filename().string();

  for (const auto& path : detail::sorted_regular_files(dir)) {
    set.documents.push_back(tokenize_document(path.filename().string(), set.set_id,
                                              detail::read_text_file(path)));
  }
  if (set.documents.empty()) throw Error("empty document set: " + dir.string());

  const std::filesystem::path refs_dir = dir / "refs";
  if (std::filesystem::is_directory(refs_dir)) {
    for (const auto& path : detail::sorted_regular_files(refs_dir)) {
      set.reference_ids.push_back(path.filename().string());
      set.reference_texts.push_back(detail::read_text_file(path));
    }
  }
  return set;
}

// Loads <root>/<set_id>/ subdirectories as document sets, sorted by set id.
inline std::vector<DocSet> load_corpus(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) {
    throw Error("not a directory: " + root.string());
  }
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  std::vector<DocSet> sets;
  for (const auto& dir : dirs) sets.push_back(load_docset(dir));
  if (sets.empty()) throw Error("no document sets under: " + root.string());
  return sets;
}

// All documents of all sets, for vocabulary building and training.
inline std::vector<TokenizedDocument> all_documents(const std::vector<DocSet>& sets) {
  std::vector<TokenizedDocument> docs;
  for (const DocSet& set : sets) {
    docs.insert(docs.end(), set.documents.begin(), set.documents.end());
  }
  return docs;
}

// Training doc ids are namespaced by set so the same file name may appear
// in different sets.
inline std::string qualified_doc_id(const TokenizedDocument& doc) {
  if (doc.set_id.empty()) return doc.doc_id;
  return doc.set_id + "/" + doc.doc_id;
}

}  // namespace dbowsum
