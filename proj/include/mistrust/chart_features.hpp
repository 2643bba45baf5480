#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mistrust/cohort.hpp"
#include "mistrust/data_model.hpp"

namespace mistrust {

// Feature names follow the "item_label: value_label" display convention.
inline std::string feature_name(std::string_view item, std::string_view value) {
    std::string out;
    out.reserve(item.size() + value.size() + 2);
    out.append(item);
    out.append(": ");
    out.append(value);
    return out;
}

struct FeatureVocabulary {
    std::vector<std::string> names;  // lexicographically sorted, unique

    std::size_t size() const { return names.size(); }
    bool empty() const { return names.empty(); }

    std::optional<std::size_t> index_of(std::string_view name) const {
        auto it = std::lower_bound(names.begin(), names.end(), name);
        if (it == names.end() || *it != name) return std::nullopt;
        return static_cast<std::size_t>(it - names.begin());
    }

    friend bool operator==(const FeatureVocabulary&, const FeatureVocabulary&) = default;
};

// One feature per observed (item_label, value_label) pair, optionally
// restricted to a whitelist of normalized item labels.
inline FeatureVocabulary build_vocabulary(
    const EhrDataset& ds, const std::optional<std::set<std::string>>& item_whitelist = {}) {
    std::set<std::string> names;
    for (const auto& ev : ds.chart_events) {
        if (item_whitelist && !item_whitelist->count(ev.item_label)) continue;
        names.insert(feature_name(ev.item_label, ev.value_label));
    }
    return FeatureVocabulary{{names.begin(), names.end()}};
}

// Binary presence matrix: rows are cohort admissions (all of them, all-zero
// rows permitted), columns follow the vocabulary order.
struct FeatureMatrix {
    std::vector<std::string> row_ids;
    std::size_t n_features = 0;
    std::vector<std::vector<std::uint32_t>> rows;  // sorted active column indices

    std::size_t n_rows() const { return row_ids.size(); }

    bool at(std::size_t row, std::size_t col) const {
        const auto& r = rows[row];
        return std::binary_search(r.begin(), r.end(), static_cast<std::uint32_t>(col));
    }
};

inline FeatureMatrix encode(const EhrDataset& ds, const Cohort& cohort,
                            const FeatureVocabulary& vocab) {
    FeatureMatrix m;
    m.row_ids = cohort.admission_ids;
    m.n_features = vocab.size();
    m.rows.resize(m.row_ids.size());
    for (std::size_t i = 0; i < m.row_ids.size(); ++i) {
        std::set<std::uint32_t> active;
        for (const auto& ev : ds.events_for(m.row_ids[i])) {
            auto idx = vocab.index_of(feature_name(ev.item_label, ev.value_label));
            if (idx) active.insert(static_cast<std::uint32_t>(*idx));
        }
        m.rows[i].assign(active.begin(), active.end());
    }
    return m;
}

// Whitelist file: one normalized item label per line, '#' starts a comment.
inline std::set<std::string> read_whitelist(std::istream& in) {
    std::set<std::string> items;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto normalized = normalize_label(line);
        if (!normalized.empty()) items.insert(std::move(normalized));
    }
    return items;
}

inline void write_vocabulary(const FeatureVocabulary& vocab, std::ostream& out) {
    for (const auto& name : vocab.names) out << name << '\n';
}

inline FeatureVocabulary read_vocabulary(std::istream& in) {
    std::set<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) names.insert(line);
    }
    return FeatureVocabulary{{names.begin(), names.end()}};
}

// Sparse triplet export: admission_id,feature_name,1
inline void write_matrix_csv(const FeatureMatrix& m, const FeatureVocabulary& vocab,
                             std::ostream& out) {
    write_csv_row(out, {"admission_id", "feature_name", "value"});
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        for (std::uint32_t col : m.rows[i]) {
            write_csv_row(out, {m.row_ids[i], vocab.names[col], "1"});
        }
    }
}

}  // namespace mistrust
