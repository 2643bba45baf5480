#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mistrust/common.hpp"
#include "mistrust/csv.hpp"
#include "mistrust/timestamp.hpp"

namespace mistrust {

enum class Race { white, black, other };
enum class DischargeLocation { hospice, snf, home, other, none };
enum class Treatment { ventilation, vasopressor };

inline std::string_view to_string(Race r) {
    switch (r) {
        case Race::white: return "white";
        case Race::black: return "black";
        default: return "other";
    }
}

inline std::string_view to_string(DischargeLocation d) {
    switch (d) {
        case DischargeLocation::hospice: return "hospice";
        case DischargeLocation::snf: return "snf";
        case DischargeLocation::home: return "home";
        case DischargeLocation::other: return "other";
        default: return "none";
    }
}

inline std::string_view to_string(Treatment t) {
    return t == Treatment::ventilation ? "ventilation" : "vasopressor";
}

// Source labels vary ("WHITE - RUSSIAN", "BLACK/AFRICAN AMERICAN", ...);
// anything that is not a WHITE*/BLACK* prefix maps to other.
inline Race parse_race(std::string_view s) {
    s = trim(s);
    if (istarts_with(s, "white")) return Race::white;
    if (istarts_with(s, "black")) return Race::black;
    return Race::other;
}

inline DischargeLocation parse_discharge_location(std::string_view s) {
    const std::string v = to_lower(std::string(trim(s)));
    if (v.empty() || v == "none") return DischargeLocation::none;
    if (v.find("hospice") != std::string::npos) return DischargeLocation::hospice;
    if (v == "snf" || v.rfind("skilled", 0) == 0) return DischargeLocation::snf;
    if (v.find("home") != std::string::npos) return DischargeLocation::home;
    return DischargeLocation::other;
}

inline std::optional<bool> parse_bool(std::string_view s) {
    const std::string v = to_lower(std::string(trim(s)));
    if (v == "1" || v == "true" || v == "t" || v == "yes" || v == "y") return true;
    if (v == "0" || v == "false" || v == "f" || v == "no" || v == "n") return false;
    return std::nullopt;
}

inline std::optional<Treatment> parse_treatment(std::string_view s) {
    const std::string v = to_lower(std::string(trim(s)));
    if (v == "ventilation") return Treatment::ventilation;
    if (v == "vasopressor") return Treatment::vasopressor;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// records
// ---------------------------------------------------------------------------

struct Admission {
    std::string admission_id;
    std::string patient_id;
    std::int64_t admit_time = 0;
    std::int64_t discharge_time = 0;
    Race race = Race::other;
    bool died_in_hospital = false;
    DischargeLocation discharge_location = DischargeLocation::none;

    std::int64_t stay_minutes() const { return discharge_time - admit_time; }
    friend bool operator==(const Admission&, const Admission&) = default;
};

struct ChartEventRecord {
    std::string admission_id;
    std::string item_label;   // normalized
    std::string value_label;  // normalized
    std::int64_t chart_time = 0;
    friend bool operator==(const ChartEventRecord&, const ChartEventRecord&) = default;
};

struct NoteRecord {
    std::string admission_id;
    std::int64_t chart_time = 0;
    std::string category;
    std::string text;
    friend bool operator==(const NoteRecord&, const NoteRecord&) = default;
};

struct TreatmentSpanRecord {
    std::string admission_id;
    Treatment treatment = Treatment::ventilation;
    std::int64_t start_time = 0;
    std::int64_t end_time = 0;
    friend bool operator==(const TreatmentSpanRecord&, const TreatmentSpanRecord&) = default;
};

struct SeverityRecord {
    std::string admission_id;
    double oasis = 0.0;
    double sapsii = 0.0;
    friend bool operator==(const SeverityRecord&, const SeverityRecord&) = default;
};

// ---------------------------------------------------------------------------
// dataset
// ---------------------------------------------------------------------------

struct EhrDataset {
    std::vector<Admission> admissions;               // sorted by admission_id
    std::vector<ChartEventRecord> chart_events;      // sorted by (admission_id, chart_time)
    std::vector<NoteRecord> notes;                   // sorted by (admission_id, chart_time)
    std::vector<TreatmentSpanRecord> treatment_spans;  // sorted by (admission_id, start_time)
    std::vector<SeverityRecord> severity;            // sorted by admission_id, unique

    friend bool operator==(const EhrDataset&, const EhrDataset&) = default;

    const Admission* find_admission(std::string_view id) const {
        auto it = std::lower_bound(admissions.begin(), admissions.end(), id,
                                   [](const Admission& a, std::string_view v) {
                                       return a.admission_id < v;
                                   });
        if (it == admissions.end() || it->admission_id != id) return nullptr;
        return &*it;
    }

    const SeverityRecord* find_severity(std::string_view id) const {
        auto it = std::lower_bound(severity.begin(), severity.end(), id,
                                   [](const SeverityRecord& a, std::string_view v) {
                                       return a.admission_id < v;
                                   });
        if (it == severity.end() || it->admission_id != id) return nullptr;
        return &*it;
    }

    template <class Rec>
    static std::span<const Rec> range_for(const std::vector<Rec>& recs, std::string_view id) {
        auto lo = std::lower_bound(recs.begin(), recs.end(), id,
                                   [](const Rec& r, std::string_view v) {
                                       return r.admission_id < v;
                                   });
        auto hi = std::upper_bound(lo, recs.end(), id,
                                   [](std::string_view v, const Rec& r) {
                                       return v < r.admission_id;
                                   });
        return {&*lo, static_cast<std::size_t>(hi - lo)};
    }

    std::span<const ChartEventRecord> events_for(std::string_view id) const {
        return range_for(chart_events, id);
    }
    std::span<const NoteRecord> notes_for(std::string_view id) const {
        return range_for(notes, id);
    }
    std::span<const TreatmentSpanRecord> spans_for(std::string_view id) const {
        return range_for(treatment_spans, id);
    }

    // Restores the documented sort orders; stable so equal keys keep source order.
    void finalize() {
        std::stable_sort(admissions.begin(), admissions.end(),
                         [](const Admission& a, const Admission& b) {
                             return a.admission_id < b.admission_id;
                         });
        auto by_id_time = [](const auto& a, const auto& b) {
            if (a.admission_id != b.admission_id) return a.admission_id < b.admission_id;
            return a.chart_time < b.chart_time;
        };
        std::stable_sort(chart_events.begin(), chart_events.end(), by_id_time);
        std::stable_sort(notes.begin(), notes.end(), by_id_time);
        std::stable_sort(treatment_spans.begin(), treatment_spans.end(),
                         [](const TreatmentSpanRecord& a, const TreatmentSpanRecord& b) {
                             if (a.admission_id != b.admission_id)
                                 return a.admission_id < b.admission_id;
                             return a.start_time < b.start_time;
                         });
        std::stable_sort(severity.begin(), severity.end(),
                         [](const SeverityRecord& a, const SeverityRecord& b) {
                             return a.admission_id < b.admission_id;
                         });
    }
};

// ---------------------------------------------------------------------------
// loading
// ---------------------------------------------------------------------------

struct LoadIssue {
    enum class Kind { parse, invariant, referential_integrity, duplicate_id };
    std::string file;
    int line = 0;
    Kind kind = Kind::parse;
    std::string message;
};

inline std::string_view to_string(LoadIssue::Kind k) {
    switch (k) {
        case LoadIssue::Kind::parse: return "parse";
        case LoadIssue::Kind::invariant: return "invariant";
        case LoadIssue::Kind::referential_integrity: return "referential-integrity";
        default: return "duplicate-id";
    }
}

struct LoadOptions {
    bool strict = false;  // escalate the first rejected row to a hard failure
};

struct LoadResult {
    EhrDataset dataset;
    std::vector<LoadIssue> issues;
};

namespace detail {

class RowSink {
public:
    RowSink(std::vector<LoadIssue>& issues, bool strict) : issues_(issues), strict_(strict) {}

    // Records a rejected row. Throws instead when strict.
    void reject(const std::string& file, int line, LoadIssue::Kind kind, std::string message) {
        if (strict_)
            throw ValidationError(file + ":" + std::to_string(line) + ": [" +
                                  std::string(to_string(kind)) + "] " + message);
        issues_.push_back({file, line, kind, std::move(message)});
    }

private:
    std::vector<LoadIssue>& issues_;
    bool strict_;
};

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace detail

// Loads a MIMIC-shaped directory: admissions.csv is required, the other four
// tables are optional. Rows violating an invariant are rejected and reported;
// LoadOptions::strict turns the first rejection into a ValidationError.
inline LoadResult load_dataset(const std::filesystem::path& dir, const LoadOptions& opts = {}) {
    LoadResult result;
    detail::RowSink sink(result.issues, opts.strict);
    EhrDataset& ds = result.dataset;

    const auto admissions_path = dir / "admissions.csv";
    if (!std::filesystem::exists(admissions_path))
        throw SchemaError("admissions.csv not found in " + dir.string());

    std::unordered_set<std::string> known_ids;

    {
        std::ifstream in(admissions_path, std::ios::binary);
        if (!in) throw SchemaError("cannot open " + admissions_path.string());
        CsvReader reader(in, "admissions.csv");
        std::vector<std::string> row;
        if (!reader.next(row)) throw SchemaError("admissions.csv: empty file (header required)");
        HeaderIndex header(row, "admissions.csv");
        const std::size_t c_id = header.require("admission_id");
        const std::size_t c_pat = header.require("patient_id");
        const std::size_t c_admit = header.require("admit_time");
        const std::size_t c_disch = header.require("discharge_time");
        const std::size_t c_race = header.require("race");
        const std::size_t c_died = header.require("died_in_hospital");
        const std::size_t c_loc = header.require("discharge_location");
        const std::size_t need = std::max({c_id, c_pat, c_admit, c_disch, c_race, c_died, c_loc});

        while (reader.next(row)) {
            const int line = reader.record_line();
            if (row.size() <= need) {
                sink.reject("admissions.csv", line, LoadIssue::Kind::parse, "too few fields");
                continue;
            }
            Admission a;
            a.admission_id = std::string(trim(row[c_id]));
            if (a.admission_id.empty()) {
                sink.reject("admissions.csv", line, LoadIssue::Kind::invariant,
                            "empty admission_id");
                continue;
            }
            if (known_ids.count(a.admission_id)) {
                sink.reject("admissions.csv", line, LoadIssue::Kind::duplicate_id,
                            "duplicate admission_id '" + a.admission_id + "'");
                continue;
            }
            a.patient_id = std::string(trim(row[c_pat]));
            auto admit = parse_timestamp(row[c_admit]);
            auto disch = parse_timestamp(row[c_disch]);
            if (!admit || !disch) {
                sink.reject("admissions.csv", line, LoadIssue::Kind::parse,
                            "unparseable timestamp in admit_time/discharge_time");
                continue;
            }
            if (*disch < *admit) {
                sink.reject("admissions.csv", line, LoadIssue::Kind::invariant,
                            "discharge_time precedes admit_time for '" + a.admission_id + "'");
                continue;
            }
            auto died = parse_bool(row[c_died]);
            if (!died) {
                sink.reject("admissions.csv", line, LoadIssue::Kind::parse,
                            "unparseable died_in_hospital value '" + row[c_died] + "'");
                continue;
            }
            a.admit_time = *admit;
            a.discharge_time = *disch;
            a.race = parse_race(row[c_race]);
            a.died_in_hospital = *died;
            a.discharge_location = parse_discharge_location(row[c_loc]);
            known_ids.insert(a.admission_id);
            ds.admissions.push_back(std::move(a));
        }
    }

    auto load_optional = [&](const char* name, auto parse_row) {
        const auto path = dir / name;
        if (!std::filesystem::exists(path)) return;
        std::ifstream in(path, std::ios::binary);
        if (!in) throw SchemaError(std::string("cannot open ") + path.string());
        CsvReader reader(in, name);
        std::vector<std::string> row;
        if (!reader.next(row)) throw SchemaError(std::string(name) + ": empty file (header required)");
        HeaderIndex header(row, name);
        parse_row(reader, header, row);
    };

    load_optional("chartevents.csv", [&](CsvReader& reader, const HeaderIndex& header,
                                         std::vector<std::string>& row) {
        const std::size_t c_id = header.require("admission_id");
        const std::size_t c_item = header.require("item_label");
        const std::size_t c_val = header.require("value_label");
        const std::size_t c_time = header.require("chart_time");
        const std::size_t need = std::max({c_id, c_item, c_val, c_time});
        while (reader.next(row)) {
            const int line = reader.record_line();
            if (row.size() <= need) {
                sink.reject("chartevents.csv", line, LoadIssue::Kind::parse, "too few fields");
                continue;
            }
            ChartEventRecord r;
            r.admission_id = std::string(trim(row[c_id]));
            if (!known_ids.count(r.admission_id)) {
                sink.reject("chartevents.csv", line, LoadIssue::Kind::referential_integrity,
                            "admission_id '" + r.admission_id + "' not present in admissions.csv");
                continue;
            }
            r.item_label = normalize_label(row[c_item]);
            r.value_label = normalize_label(row[c_val]);
            if (r.item_label.empty() || r.value_label.empty()) {
                sink.reject("chartevents.csv", line, LoadIssue::Kind::invariant,
                            "item_label/value_label empty after normalization");
                continue;
            }
            auto t = parse_timestamp(row[c_time]);
            if (!t) {
                sink.reject("chartevents.csv", line, LoadIssue::Kind::parse,
                            "unparseable chart_time");
                continue;
            }
            r.chart_time = *t;
            ds.chart_events.push_back(std::move(r));
        }
    });

    load_optional("notes.csv", [&](CsvReader& reader, const HeaderIndex& header,
                                   std::vector<std::string>& row) {
        const std::size_t c_id = header.require("admission_id");
        const std::size_t c_time = header.require("chart_time");
        const std::size_t c_cat = header.require("category");
        const std::size_t c_text = header.require("text");
        const std::size_t need = std::max({c_id, c_time, c_cat, c_text});
        while (reader.next(row)) {
            const int line = reader.record_line();
            if (row.size() <= need) {
                sink.reject("notes.csv", line, LoadIssue::Kind::parse, "too few fields");
                continue;
            }
            NoteRecord r;
            r.admission_id = std::string(trim(row[c_id]));
            if (!known_ids.count(r.admission_id)) {
                sink.reject("notes.csv", line, LoadIssue::Kind::referential_integrity,
                            "admission_id '" + r.admission_id + "' not present in admissions.csv");
                continue;
            }
            auto t = parse_timestamp(row[c_time]);
            if (!t) {
                sink.reject("notes.csv", line, LoadIssue::Kind::parse, "unparseable chart_time");
                continue;
            }
            r.chart_time = *t;
            r.category = to_lower(std::string(trim(row[c_cat])));
            r.text = row[c_text];
            if (r.text.empty()) {
                sink.reject("notes.csv", line, LoadIssue::Kind::invariant, "empty note text");
                continue;
            }
            ds.notes.push_back(std::move(r));
        }
    });

    load_optional("durations.csv", [&](CsvReader& reader, const HeaderIndex& header,
                                       std::vector<std::string>& row) {
        const std::size_t c_id = header.require("admission_id");
        const std::size_t c_tr = header.require("treatment");
        const std::size_t c_start = header.require("start_time");
        const std::size_t c_end = header.require("end_time");
        const std::size_t need = std::max({c_id, c_tr, c_start, c_end});
        while (reader.next(row)) {
            const int line = reader.record_line();
            if (row.size() <= need) {
                sink.reject("durations.csv", line, LoadIssue::Kind::parse, "too few fields");
                continue;
            }
            TreatmentSpanRecord r;
            r.admission_id = std::string(trim(row[c_id]));
            if (!known_ids.count(r.admission_id)) {
                sink.reject("durations.csv", line, LoadIssue::Kind::referential_integrity,
                            "admission_id '" + r.admission_id + "' not present in admissions.csv");
                continue;
            }
            auto tr = parse_treatment(row[c_tr]);
            if (!tr) {
                sink.reject("durations.csv", line, LoadIssue::Kind::parse,
                            "unknown treatment '" + row[c_tr] + "'");
                continue;
            }
            auto start = parse_timestamp(row[c_start]);
            auto end = parse_timestamp(row[c_end]);
            if (!start || !end) {
                sink.reject("durations.csv", line, LoadIssue::Kind::parse,
                            "unparseable start_time/end_time");
                continue;
            }
            if (*end < *start) {
                sink.reject("durations.csv", line, LoadIssue::Kind::invariant,
                            "end_time precedes start_time for '" + r.admission_id + "'");
                continue;
            }
            r.treatment = *tr;
            r.start_time = *start;
            r.end_time = *end;
            ds.treatment_spans.push_back(std::move(r));
        }
    });

    load_optional("severity.csv", [&](CsvReader& reader, const HeaderIndex& header,
                                      std::vector<std::string>& row) {
        const std::size_t c_id = header.require("admission_id");
        const std::size_t c_oasis = header.require("oasis");
        const std::size_t c_saps = header.require("sapsii");
        const std::size_t need = std::max({c_id, c_oasis, c_saps});
        std::unordered_set<std::string> seen;
        while (reader.next(row)) {
            const int line = reader.record_line();
            if (row.size() <= need) {
                sink.reject("severity.csv", line, LoadIssue::Kind::parse, "too few fields");
                continue;
            }
            SeverityRecord r;
            r.admission_id = std::string(trim(row[c_id]));
            if (!known_ids.count(r.admission_id)) {
                sink.reject("severity.csv", line, LoadIssue::Kind::referential_integrity,
                            "admission_id '" + r.admission_id + "' not present in admissions.csv");
                continue;
            }
            if (seen.count(r.admission_id)) {
                sink.reject("severity.csv", line, LoadIssue::Kind::duplicate_id,
                            "duplicate severity row for '" + r.admission_id + "'");
                continue;
            }
            auto oasis = detail::parse_double(row[c_oasis]);
            auto saps = detail::parse_double(row[c_saps]);
            if (!oasis || !saps) {
                sink.reject("severity.csv", line, LoadIssue::Kind::parse,
                            "unparseable oasis/sapsii value");
                continue;
            }
            if (!std::isfinite(*oasis) || !std::isfinite(*saps) || *oasis < 0 || *saps < 0) {
                sink.reject("severity.csv", line, LoadIssue::Kind::invariant,
                            "oasis/sapsii must be finite and nonnegative");
                continue;
            }
            r.oasis = *oasis;
            r.sapsii = *saps;
            seen.insert(r.admission_id);
            ds.severity.push_back(std::move(r));
        }
    });

    ds.finalize();
    return result;
}

// ---------------------------------------------------------------------------
// writing
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline void write_dataset(const EhrDataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw Error(std::string("cannot write ") + (dir / name).string());
        return out;
    };
    {
        auto out = open("admissions.csv");
        write_csv_row(out, {"admission_id", "patient_id", "admit_time", "discharge_time", "race",
                            "died_in_hospital", "discharge_location"});
        for (const auto& a : ds.admissions) {
            write_csv_row(out, {a.admission_id, a.patient_id, format_timestamp(a.admit_time),
                                format_timestamp(a.discharge_time), std::string(to_string(a.race)),
                                a.died_in_hospital ? "1" : "0",
                                std::string(to_string(a.discharge_location))});
        }
    }
    {
        auto out = open("chartevents.csv");
        write_csv_row(out, {"admission_id", "item_label", "value_label", "chart_time"});
        for (const auto& r : ds.chart_events) {
            write_csv_row(out, {r.admission_id, r.item_label, r.value_label,
                                format_timestamp(r.chart_time)});
        }
    }
    {
        auto out = open("notes.csv");
        write_csv_row(out, {"admission_id", "chart_time", "category", "text"});
        for (const auto& r : ds.notes) {
            write_csv_row(out,
                          {r.admission_id, format_timestamp(r.chart_time), r.category, r.text});
        }
    }
    {
        auto out = open("durations.csv");
        write_csv_row(out, {"admission_id", "treatment", "start_time", "end_time"});
        for (const auto& r : ds.treatment_spans) {
            write_csv_row(out, {r.admission_id, std::string(to_string(r.treatment)),
                                format_timestamp(r.start_time), format_timestamp(r.end_time)});
        }
    }
    {
        auto out = open("severity.csv");
        write_csv_row(out, {"admission_id", "oasis", "sapsii"});
        for (const auto& r : ds.severity) {
            write_csv_row(out, {r.admission_id, format_double(r.oasis), format_double(r.sapsii)});
        }
    }
}

// ---------------------------------------------------------------------------
// summary
// ---------------------------------------------------------------------------

struct SummaryReport {
    std::size_t admissions = 0;
    std::size_t chart_events = 0;
    std::size_t notes = 0;
    std::size_t treatment_spans = 0;
    std::size_t severity = 0;
    std::size_t race_white = 0;
    std::size_t race_black = 0;
    std::size_t race_other = 0;
    friend bool operator==(const SummaryReport&, const SummaryReport&) = default;
};

inline SummaryReport dataset_summary(const EhrDataset& ds) {
    SummaryReport s;
    s.admissions = ds.admissions.size();
    s.chart_events = ds.chart_events.size();
    s.notes = ds.notes.size();
    s.treatment_spans = ds.treatment_spans.size();
    s.severity = ds.severity.size();
    for (const auto& a : ds.admissions) {
        switch (a.race) {
            case Race::white: ++s.race_white; break;
            case Race::black: ++s.race_black; break;
            default: ++s.race_other; break;
        }
    }
    return s;
}

}  // namespace mistrust
