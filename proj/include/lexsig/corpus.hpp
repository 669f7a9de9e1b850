#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexsig {

struct IngestConfig {
  uint32_t max_doc_length = 1500;  // longer documents are split into chunks of this size
  bool case_fold = true;
};

struct RawDocument {
  std::string id;
  std::string text;
};

// Whitespace split, leading/trailing punctuation stripped, empty tokens dropped.
// Folding lowercases ASCII only; non-ASCII bytes pass through untouched.
std::vector<std::string> tokenize(std::string_view text, bool case_fold = true);

class CorpusIndex {
public:
  struct DocInfo {
    std::string id;
    uint32_t length = 0;
  };
  // positions are 1-based within the document and strictly increasing
  struct Posting {
    uint32_t doc = 0;
    std::vector<uint32_t> positions;
  };

  uint64_t total_tokens() const noexcept { return total_tokens_; }
  size_t doc_count() const noexcept { return docs_.size(); }
  size_t vocab_size() const noexcept { return words_.size(); }
  const DocInfo& doc(uint32_t ord) const { return docs_.at(ord); }
  const std::vector<DocInfo>& docs() const noexcept { return docs_; }
  const IngestConfig& config() const noexcept { return config_; }

  // null when the word is absent
  const std::vector<Posting>* postings(std::string_view word) const;
  bool contains(std::string_view word) const { return postings(word) != nullptr; }
  // 0 for absent words
  uint64_t unigram_frequency(std::string_view word) const;
  // ordinals of documents containing at least one occurrence of each word
  std::vector<uint32_t> docs_with_both(std::string_view x, std::string_view y) const;

  std::vector<std::string> sorted_vocabulary() const;

  void save(const std::filesystem::path& file) const;
  static CorpusIndex load(const std::filesystem::path& file);

private:
  friend CorpusIndex ingest(const std::vector<RawDocument>&, const IngestConfig&, unsigned);

  struct WordEntry {
    std::vector<Posting> postings;  // sorted by doc
    uint64_t frequency = 0;
  };

  IngestConfig config_;
  std::vector<DocInfo> docs_;
  std::unordered_map<std::string, WordEntry> words_;
  uint64_t total_tokens_ = 0;
};

// Documents that tokenize to nothing are dropped; an index with no documents
// is an error. Tokenization runs in parallel, the merge is sequential in
// input order, so the result does not depend on jobs.
CorpusIndex ingest(const std::vector<RawDocument>& source, const IngestConfig& config = {},
                   unsigned jobs = 1);

// One document per regular file, in sorted filename order.
std::vector<RawDocument> read_corpus_dir(const std::filesystem::path& dir);
// One document per line; ids are file:lineno.
std::vector<RawDocument> read_line_corpus(const std::filesystem::path& file);

}  // namespace lexsig
