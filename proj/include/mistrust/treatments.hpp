#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mistrust/cohort.hpp"
#include "mistrust/data_model.hpp"

namespace mistrust {

struct Span {
    std::int64_t start = 0;
    std::int64_t end = 0;
    friend bool operator==(const Span&, const Span&) = default;
};

// Merges spans whose gap is at most `max_gap` minutes (default 10 hours).
// Overlapping inputs are legal; a negative-length span is an error. Output is
// sorted by start and consecutive spans are separated by more than `max_gap`.
inline std::vector<Span> merge_spans(std::vector<Span> spans, std::int64_t max_gap = 600) {
    for (const auto& s : spans) {
        if (s.end < s.start)
            throw InvalidArgument("treatment span with end before start (" +
                                  std::to_string(s.start) + "," + std::to_string(s.end) + ")");
    }
    if (spans.empty()) return spans;
    std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
        if (a.start != b.start) return a.start < b.start;
        return a.end < b.end;
    });
    std::vector<Span> merged;
    merged.push_back(spans.front());
    for (std::size_t i = 1; i < spans.size(); ++i) {
        Span& cur = merged.back();
        if (spans[i].start - cur.end <= max_gap) {
            cur.end = std::max(cur.end, spans[i].end);
        } else {
            merged.push_back(spans[i]);
        }
    }
    return merged;
}

inline std::int64_t total_duration(const std::vector<Span>& merged) {
    std::int64_t total = 0;
    for (const auto& s : merged) total += s.end - s.start;
    return total;
}

// count_gaps treats a merged span as continuous treatment (gap minutes count);
// exclude_gaps counts only the union of the raw intervals.
enum class GapPolicy { count_gaps, exclude_gaps };

struct DurationOptions {
    std::int64_t merge_gap = 600;
    GapPolicy policy = GapPolicy::count_gaps;
};

// Total treatment minutes per admission. Admissions without any span of the
// given treatment are absent from the result (they received no treatment).
inline std::map<std::string, std::int64_t> durations_for_cohort(const EhrDataset& ds,
                                                                const Cohort& cohort,
                                                                Treatment treatment,
                                                                const DurationOptions& opts = {}) {
    std::map<std::string, std::int64_t> out;
    for (const auto& id : cohort.admission_ids) {
        std::vector<Span> spans;
        for (const auto& rec : ds.spans_for(id)) {
            if (rec.treatment == treatment) spans.push_back({rec.start_time, rec.end_time});
        }
        if (spans.empty()) continue;
        // The union of raw intervals is exactly a zero-gap merge.
        const std::int64_t gap = opts.policy == GapPolicy::count_gaps ? opts.merge_gap : 0;
        out.emplace(id, total_duration(merge_spans(std::move(spans), gap)));
    }
    return out;
}

inline void write_durations_csv(const std::map<std::string, std::int64_t>& durations,
                                Treatment treatment, std::ostream& out) {
    write_csv_row(out, {"admission_id", "treatment", "total_minutes"});
    for (const auto& [id, minutes] : durations) {
        write_csv_row(out, {id, std::string(to_string(treatment)), std::to_string(minutes)});
    }
}

}  // namespace mistrust
