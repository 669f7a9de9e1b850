#include "lexsig/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "lexsig/error.hpp"
#include "lexsig/parallel.hpp"

namespace lexsig {

namespace {

constexpr char kIndexMagic[] = "LEXSIG-INDEX 1";

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_punct(unsigned char c) { return std::ispunct(c) != 0; }

void put_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

struct BinReader {
  std::istream& in;
  std::string file;

  void need(bool ok, const char* what) {
    if (!ok) throw DataError("corrupt index file " + file + ": " + what);
  }
  uint32_t u32() {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    need(in.good(), "truncated");
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
           static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
  }
  std::string bytes(uint32_t n) {
    std::string s(n, '\0');
    in.read(s.data(), n);
    need(in.good() || (n == 0 && !in.bad()), "truncated");
    return s;
  }
};

}  // namespace

std::vector<std::string> tokenize(std::string_view text, bool case_fold) {
  std::vector<std::string> out;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    while (i < n && is_space(text[i])) ++i;
    size_t start = i;
    while (i < n && !is_space(text[i])) ++i;
    size_t end = i;
    while (start < end && is_punct(text[start])) ++start;
    while (end > start && is_punct(text[end - 1])) --end;
    if (start == end) continue;
    std::string tok(text.substr(start, end - start));
    if (case_fold)
      for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out.push_back(std::move(tok));
  }
  return out;
}

const std::vector<CorpusIndex::Posting>* CorpusIndex::postings(std::string_view word) const {
  auto it = words_.find(std::string(word));
  return it == words_.end() ? nullptr : &it->second.postings;
}

uint64_t CorpusIndex::unigram_frequency(std::string_view word) const {
  auto it = words_.find(std::string(word));
  return it == words_.end() ? 0 : it->second.frequency;
}

std::vector<uint32_t> CorpusIndex::docs_with_both(std::string_view x, std::string_view y) const {
  if (x == y) throw DataError("invalid bigram: words must differ (" + std::string(x) + ")");
  std::vector<uint32_t> out;
  const auto* px = postings(x);
  const auto* py = postings(y);
  if (!px || !py) return out;
  size_t i = 0, j = 0;
  while (i < px->size() && j < py->size()) {
    uint32_t a = (*px)[i].doc, b = (*py)[j].doc;
    if (a == b) {
      out.push_back(a);
      ++i;
      ++j;
    } else if (a < b) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

std::vector<std::string> CorpusIndex::sorted_vocabulary() const {
  std::vector<std::string> words;
  words.reserve(words_.size());
  for (const auto& [w, _] : words_) words.push_back(w);
  std::sort(words.begin(), words.end());
  return words;
}

CorpusIndex ingest(const std::vector<RawDocument>& source, const IngestConfig& config,
                   unsigned jobs) {
  if (config.max_doc_length < 1) throw UsageError("max_doc_length must be >= 1");
  std::vector<std::vector<std::string>> tokens(source.size());
  parallel_for(source.size(), jobs,
               [&](size_t i) { tokens[i] = tokenize(source[i].text, config.case_fold); });

  CorpusIndex index;
  index.config_ = config;
  for (size_t d = 0; d < source.size(); ++d) {
    const auto& toks = tokens[d];
    if (toks.empty()) continue;
    const size_t max = config.max_doc_length;
    const size_t chunks = (toks.size() + max - 1) / max;
    for (size_t c = 0; c < chunks; ++c) {
      const size_t begin = c * max;
      const uint32_t len = static_cast<uint32_t>(std::min(max, toks.size() - begin));
      std::string id = source[d].id;
      if (chunks > 1) id += "#" + std::to_string(c + 1);
      const uint32_t ord = static_cast<uint32_t>(index.docs_.size());
      index.docs_.push_back({std::move(id), len});
      for (uint32_t p = 1; p <= len; ++p) {
        auto& entry = index.words_[toks[begin + p - 1]];
        if (entry.postings.empty() || entry.postings.back().doc != ord)
          entry.postings.push_back({ord, {}});
        entry.postings.back().positions.push_back(p);
        ++entry.frequency;
        ++index.total_tokens_;
      }
    }
  }
  if (index.docs_.empty()) throw DataError("empty corpus: no documents with any tokens");
  return index;
}

std::vector<RawDocument> read_corpus_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec))
    throw DataError("corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RawDocument> docs;
  docs.reserve(files.size());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw DataError("cannot read corpus file: " + f.string());
    std::ostringstream body;
    body << in.rdbuf();
    docs.push_back({f.filename().string(), body.str()});
  }
  return docs;
}

std::vector<RawDocument> read_line_corpus(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read corpus file: " + file.string());
  std::vector<RawDocument> docs;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    docs.push_back({file.filename().string() + ":" + std::to_string(lineno), line});
  }
  return docs;
}

void CorpusIndex::save(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write index file: " + file.string());
  out << kIndexMagic << "\n";
  out << "case_fold=" << (config_.case_fold ? 1 : 0)
      << " max_doc_length=" << config_.max_doc_length << "\n";
  out << "docs=" << docs_.size() << " tokens=" << total_tokens_ << " vocab=" << words_.size()
      << "\n";
  out << "BINARY\n";
  for (const auto& d : docs_) {
    put_u32(out, static_cast<uint32_t>(d.id.size()));
    out.write(d.id.data(), static_cast<std::streamsize>(d.id.size()));
    put_u32(out, d.length);
  }
  for (const auto& word : sorted_vocabulary()) {
    const auto& entry = words_.at(word);
    put_u32(out, static_cast<uint32_t>(word.size()));
    out.write(word.data(), static_cast<std::streamsize>(word.size()));
    put_u32(out, static_cast<uint32_t>(entry.postings.size()));
    for (const auto& p : entry.postings) {
      put_u32(out, p.doc);
      put_u32(out, static_cast<uint32_t>(p.positions.size()));
      for (uint32_t pos : p.positions) put_u32(out, pos);
    }
  }
  if (!out) throw DataError("failed writing index file: " + file.string());
}

CorpusIndex CorpusIndex::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot read index file: " + file.string());
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line))
      throw DataError("corrupt index file " + file.string() + ": missing " + what);
    return line;
  };
  if (next_line("magic") != kIndexMagic)
    throw DataError("not an index file (bad magic): " + file.string());

  CorpusIndex index;
  uint64_t docs = 0, tokens = 0, vocab = 0;
  int fold = 1;
  {
    std::istringstream hdr(next_line("config header"));
    std::string kv;
    while (hdr >> kv) {
      if (kv.rfind("case_fold=", 0) == 0) fold = std::stoi(kv.substr(10));
      else if (kv.rfind("max_doc_length=", 0) == 0)
        index.config_.max_doc_length = static_cast<uint32_t>(std::stoul(kv.substr(15)));
    }
    index.config_.case_fold = fold != 0;
  }
  {
    std::istringstream hdr(next_line("size header"));
    std::string kv;
    while (hdr >> kv) {
      if (kv.rfind("docs=", 0) == 0) docs = std::stoull(kv.substr(5));
      else if (kv.rfind("tokens=", 0) == 0) tokens = std::stoull(kv.substr(7));
      else if (kv.rfind("vocab=", 0) == 0) vocab = std::stoull(kv.substr(6));
    }
  }
  if (next_line("binary marker") != "BINARY")
    throw DataError("corrupt index file " + file.string() + ": missing binary marker");

  BinReader r{in, file.string()};
  index.docs_.reserve(docs);
  for (uint64_t d = 0; d < docs; ++d) {
    std::string id = r.bytes(r.u32());
    uint32_t len = r.u32();
    index.docs_.push_back({std::move(id), len});
  }
  for (uint64_t w = 0; w < vocab; ++w) {
    std::string word = r.bytes(r.u32());
    WordEntry entry;
    uint32_t ndocs = r.u32();
    entry.postings.reserve(ndocs);
    for (uint32_t i = 0; i < ndocs; ++i) {
      Posting p;
      p.doc = r.u32();
      uint32_t npos = r.u32();
      r.need(p.doc < index.docs_.size(), "doc ordinal out of range");
      p.positions.reserve(npos);
      uint32_t prev = 0;
      for (uint32_t k = 0; k < npos; ++k) {
        uint32_t pos = r.u32();
        r.need(pos > prev && pos <= index.docs_[p.doc].length, "bad position");
        prev = pos;
        p.positions.push_back(pos);
      }
      r.need(!p.positions.empty(), "empty posting");
      r.need(entry.postings.empty() || entry.postings.back().doc < p.doc, "postings unsorted");
      entry.frequency += npos;
      entry.postings.push_back(std::move(p));
    }
    index.total_tokens_ += entry.frequency;
    index.words_.emplace(std::move(word), std::move(entry));
  }
  if (index.total_tokens_ != tokens)
    throw DataError("corrupt index file " + file.string() + ": token count mismatch");
  return index;
}

}  // namespace lexsig
