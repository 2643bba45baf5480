#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mistrust/cohort.hpp"
#include "mistrust/data_model.hpp"

namespace mistrust {

inline std::vector<std::string> default_noncompliance_patterns() {
    return {"noncompliant", "non-compliant", "noncompliance"};
}

namespace detail {

// Word characters are [a-z0-9-]; the hyphen is internal so "non-compliant"
// matches as one token.
inline bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

}  // namespace detail

// Case-insensitive, word-boundary search of `term` in `text_lower` (which
// must already be lowercased).
inline bool lowercase_text_contains_term(std::string_view text_lower, std::string_view term) {
    if (term.empty()) return false;
    std::size_t pos = 0;
    while ((pos = text_lower.find(term, pos)) != std::string_view::npos) {
        const bool start_ok = pos == 0 || !detail::is_word_char(text_lower[pos - 1]);
        const std::size_t end = pos + term.size();
        const bool end_ok = end == text_lower.size() || !detail::is_word_char(text_lower[end]);
        if (start_ok && end_ok) return true;
        ++pos;
    }
    return false;
}

inline bool text_contains_term(std::string_view text, std::string_view term) {
    return lowercase_text_contains_term(to_lower(text), to_lower(term));
}

struct LabelVector {
    std::map<std::string, bool> labels;  // keys are the cohort's admission ids

    std::size_t positives() const {
        std::size_t n = 0;
        for (const auto& [id, v] : labels) n += v ? 1 : 0;
        return n;
    }
};

// Rule-based proxy label: true iff any note of the admission contains any
// pattern at a word boundary. No negation handling ("denies noncompliance"
// still counts).
inline LabelVector label_noncompliance(const EhrDataset& ds, const Cohort& cohort,
                                       std::span<const std::string> patterns) {
    if (patterns.empty()) throw InvalidArgument("label_noncompliance: no patterns given");
    std::vector<std::string> lowered;
    lowered.reserve(patterns.size());
    for (const auto& p : patterns) lowered.push_back(to_lower(p));

    LabelVector out;
    for (const auto& id : cohort.admission_ids) {
        bool hit = false;
        for (const auto& note : ds.notes_for(id)) {
            const std::string text = to_lower(note.text);
            for (const auto& term : lowered) {
                if (lowercase_text_contains_term(text, term)) {
                    hit = true;
                    break;
                }
            }
            if (hit) break;
        }
        out.labels.emplace(id, hit);
    }
    return out;
}

inline LabelVector label_noncompliance(const EhrDataset& ds, const Cohort& cohort) {
    const auto patterns = default_noncompliance_patterns();
    return label_noncompliance(ds, cohort, patterns);
}

// Patterns file: one term per line.
inline std::vector<std::string> read_patterns(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto term = std::string(trim(line));
        if (!term.empty()) out.push_back(to_lower(term));
    }
    return out;
}

inline void write_labels_csv(const LabelVector& labels, std::ostream& out) {
    write_csv_row(out, {"admission_id", "label"});
    for (const auto& [id, v] : labels.labels) write_csv_row(out, {id, v ? "1" : "0"});
}

}  // namespace mistrust
