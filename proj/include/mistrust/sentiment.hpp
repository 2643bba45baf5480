#pragma once

#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mistrust/cohort.hpp"
#include "mistrust/data_model.hpp"
#include "mistrust/defaults.hpp"
#include "mistrust/stats.hpp"

namespace mistrust {

struct SentimentLexicon {
    std::map<std::string, double> polarity;  // lowercase token -> [-1, 1]

    std::size_t size() const { return polarity.size(); }
    bool empty() const { return polarity.empty(); }
};

// Lexicon TSV: token<TAB>polarity, one entry per line.
inline SentimentLexicon parse_lexicon_tsv(std::istream& in, const std::string& file = "lexicon") {
    SentimentLexicon lex;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ValidationError(file + ":" + std::to_string(line_no) + ": expected token<TAB>polarity");
        const std::string token = to_lower(std::string(trim(line.substr(0, tab))));
        auto value = detail::parse_double(line.substr(tab + 1));
        if (token.empty() || !value)
            throw ValidationError(file + ":" + std::to_string(line_no) + ": malformed lexicon entry");
        if (*value < -1.0 || *value > 1.0)
            throw ValidationError(file + ":" + std::to_string(line_no) +
                                  ": polarity outside [-1,1] for '" + token + "'");
        if (!lex.polarity.emplace(token, *value).second)
            throw ValidationError(file + ":" + std::to_string(line_no) + ": duplicate token '" +
                                  token + "'");
    }
    return lex;
}

inline const SentimentLexicon& default_lexicon() {
    static const SentimentLexicon lex = [] {
        std::istringstream in{std::string(defaults::kSentimentLexiconTsv)};
        return parse_lexicon_tsv(in, "default lexicon");
    }();
    return lex;
}

// Removes de-identification placeholders of the form "[** ... **]". An
// unterminated opener strips through the end of the text.
inline std::string strip_deid_placeholders(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t open = text.find("[**", pos);
        if (open == std::string_view::npos) {
            out.append(text.substr(pos));
            break;
        }
        out.append(text.substr(pos, open - pos));
        const std::size_t close = text.find("**]", open + 3);
        if (close == std::string_view::npos) break;
        pos = close + 3;
    }
    return out;
}

// Lowercase alphabetic token stream; any non-letter is a separator.
inline std::vector<std::string> tokenize_lower_alpha(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char raw : text) {
        const unsigned char c = static_cast<unsigned char>(raw);
        if (std::isalpha(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

// Raw sentiment of one stay: concatenate the stay's notes, strip
// de-identification placeholders, and average the polarity of lexicon-matched
// tokens. Zero matches score 0. No emoticon rules of any kind.
inline double score_stay(std::span<const NoteRecord> notes, const SentimentLexicon& lexicon) {
    if (lexicon.empty()) throw InvalidArgument("score_stay: empty lexicon");
    std::string all;
    for (const auto& note : notes) {
        all.append(note.text);
        all.push_back('\n');
    }
    const std::string cleaned = strip_deid_placeholders(all);
    double sum = 0;
    std::size_t matched = 0;
    for (const auto& token : tokenize_lower_alpha(cleaned)) {
        auto it = lexicon.polarity.find(token);
        if (it != lexicon.polarity.end()) {
            sum += it->second;
            ++matched;
        }
    }
    return matched == 0 ? 0.0 : sum / static_cast<double>(matched);
}

struct SentimentScore {
    std::string admission_id;
    double raw = 0.0;
    double normalized = 0.0;  // z-scored over the analysis population
    friend bool operator==(const SentimentScore&, const SentimentScore&) = default;
};

// Scores every cohort admission and z-normalizes over the cohort. Ordered by
// admission_id; constant raw scores are an error (normalization undefined).
inline std::vector<SentimentScore> score_population(const EhrDataset& ds, const Cohort& cohort,
                                                    const SentimentLexicon& lexicon) {
    if (cohort.size() < 2)
        throw InvalidArgument("score_population: need at least 2 admissions");
    std::vector<double> raw;
    raw.reserve(cohort.size());
    for (const auto& id : cohort.admission_ids) {
        raw.push_back(score_stay(ds.notes_for(id), lexicon));
    }
    const std::vector<double> normalized = zscore(raw);  // throws on constant input
    std::vector<SentimentScore> out;
    out.reserve(cohort.size());
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        out.push_back({cohort.admission_ids[i], raw[i], normalized[i]});
    }
    return out;
}

inline void write_sentiment_csv(std::span<const SentimentScore> scores, std::ostream& out) {
    write_csv_row(out, {"admission_id", "raw", "normalized"});
    for (const auto& s : scores) {
        write_csv_row(out, {s.admission_id, format_double(s.raw), format_double(s.normalized)});
    }
}

}  // namespace mistrust
