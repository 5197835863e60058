#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "echograph/error.hpp"

namespace echograph::text {

namespace detail {

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

/// Decodes one code point; invalid bytes decode as U+FFFD and advance by one.
inline char32_t next_code_point(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) -> int {
        if (i + k >= s.size()) return -1;
        const auto b = static_cast<unsigned char>(s[i + k]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
    };
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = (b0 & 0xE0) == 0xC0 ? 2 : (b0 & 0xF0) == 0xE0 ? 3 : (b0 & 0xF8) == 0xF0 ? 4 : 0;
    char32_t cp = len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
    for (int k = 1; k < len; ++k) {
        const int c = cont(static_cast<std::size_t>(k));
        if (c < 0) {
            len = 0;
            break;
        }
        cp = (cp << 6) | static_cast<char32_t>(c);
    }
    if (len == 0) {
        ++i;
        return 0xFFFD;
    }
    i += static_cast<std::size_t>(len);
    return cp;
}

/// Letters and digits. Non-ASCII code points count as word characters
/// except the Latin-1 symbol block, general punctuation, and CJK punctuation.
inline bool is_word_char(char32_t cp) {
    if (cp < 0x80) return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') || cp == '_';
    if (cp >= 0x80 && cp <= 0xBF) return false;
    if (cp == 0xD7 || cp == 0xF7) return false;
    if (cp >= 0x2000 && cp <= 0x206F) return false;
    if (cp >= 0x3000 && cp <= 0x303F) return false;
    if (cp == 0xFFFD || cp == 0xFEFF) return false;
    return true;
}

inline char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
    return cp;
}

} // namespace detail

/// Lowercased word tokens. An apostrophe between two word characters stays
/// inside the word ("don't").
inline std::vector<std::string> tokenize(std::string_view s) {
    std::vector<char32_t> cps;
    for (std::size_t i = 0; i < s.size();) cps.push_back(detail::next_code_point(s, i));
    std::vector<std::string> tokens;
    std::string current;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t cp = cps[i];
        const bool apostrophe = (cp == '\'' || cp == 0x2019) && !current.empty() && i + 1 < cps.size() &&
                                detail::is_word_char(cps[i + 1]);
        if (detail::is_word_char(cp) || apostrophe) {
            detail::append_utf8(current, detail::to_lower(cp));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

/// Contiguous n-grams for n in [min_n, max_n], tokens joined by a space.
inline std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int min_n, int max_n) {
    std::vector<std::string> out;
    for (int n = min_n; n <= max_n; ++n) {
        const auto un = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
            std::string g = tokens[i];
            for (std::size_t k = 1; k < un; ++k) {
                g += ' ';
                g += tokens[i + k];
            }
            out.push_back(std::move(g));
        }
    }
    return out;
}

struct TfidfOptions {
    int min_n = 1;
    int max_n = 2;
    std::size_t vocab_cap = 20000;
};

struct SparseRow {
    std::vector<std::uint32_t> index; // ascending
    std::vector<double> value;
};

/// A document is the list of texts (tweets) of one user; n-grams never
/// span two texts.
using Document = std::vector<std::string>;

/// Vocabulary and smoothed idf, ln((1 + N) / (1 + df)) + 1.
class TfidfModel {
public:
    TfidfModel() = default;
    TfidfModel(std::vector<std::string> vocabulary, std::vector<double> idf, TfidfOptions options)
        : vocabulary_(std::move(vocabulary)), idf_(std::move(idf)), options_(options) {
        for (std::uint32_t i = 0; i < vocabulary_.size(); ++i) lookup_.emplace(vocabulary_[i], i);
    }

    const std::vector<std::string>& vocabulary() const { return vocabulary_; }
    const std::vector<double>& idf() const { return idf_; }
    const TfidfOptions& options() const { return options_; }
    std::size_t size() const { return vocabulary_.size(); }

    std::map<std::uint32_t, std::size_t> term_counts(const Document& doc) const {
        std::map<std::uint32_t, std::size_t> counts;
        for (const auto& text : doc)
            for (const auto& g : ngrams(tokenize(text), options_.min_n, options_.max_n))
                if (auto it = lookup_.find(g); it != lookup_.end()) ++counts[it->second];
        return counts;
    }

    /// Raw term count times idf, L2-normalized (all-zero rows stay zero).
    SparseRow transform(const Document& doc) const {
        SparseRow row;
        double norm = 0.0;
        for (const auto& [term, count] : term_counts(doc)) {
            const double w = static_cast<double>(count) * idf_[term];
            row.index.push_back(term);
            row.value.push_back(w);
            norm += w * w;
        }
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (auto& v : row.value) v /= norm;
        }
        return row;
    }

private:
    std::vector<std::string> vocabulary_;
    std::vector<double> idf_;
    TfidfOptions options_;
    std::unordered_map<std::string, std::uint32_t> lookup_;
};

/// Keeps the vocab_cap n-grams with the highest document frequency (ties
/// broken lexicographically); vocabulary order is that ranking.
inline TfidfModel fit_tfidf(const std::vector<Document>& docs, const TfidfOptions& opt = {}) {
    if (docs.empty()) throw ValidationError("tfidf: empty corpus");
    if (opt.min_n < 1 || opt.max_n < opt.min_n) throw ValidationError("tfidf: invalid n-gram range");
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        std::vector<std::string> seen;
        for (const auto& text : doc)
            for (auto& g : ngrams(tokenize(text), opt.min_n, opt.max_n)) seen.push_back(std::move(g));
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (auto& g : seen) ++df[g];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > opt.vocab_cap) ranked.resize(opt.vocab_cap);
    const double n = static_cast<double>(docs.size());
    std::vector<std::string> vocab;
    std::vector<double> idf;
    for (auto& [term, count] : ranked) {
        vocab.push_back(term);
        idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return TfidfModel(std::move(vocab), std::move(idf), opt);
}

inline std::vector<SparseRow> tfidf_features(const std::vector<Document>& docs, const TfidfOptions& opt = {},
                                             TfidfModel* fitted = nullptr) {
    auto model = fit_tfidf(docs, opt);
    std::vector<SparseRow> rows;
    rows.reserve(docs.size());
    for (const auto& doc : docs) rows.push_back(model.transform(doc));
    if (fitted) *fitted = std::move(model);
    return rows;
}

} // namespace echograph::text
