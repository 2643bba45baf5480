#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mistrust/csv.hpp"
#include "mistrust/data_model.hpp"

namespace mistrust {

// An ordered, duplicate-free set of admission ids.
struct Cohort {
    std::string name;
    std::vector<std::string> admission_ids;  // sorted, unique

    std::size_t size() const { return admission_ids.size(); }
    bool empty() const { return admission_ids.empty(); }

    bool contains(std::string_view id) const {
        return std::binary_search(admission_ids.begin(), admission_ids.end(), id);
    }

    static Cohort from_ids(std::string name, std::vector<std::string> ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return Cohort{std::move(name), std::move(ids)};
    }

    friend bool operator==(const Cohort&, const Cohort&) = default;
};

struct EolCohortOptions {
    std::int64_t min_stay_minutes = 360;  // "at least 6 hours", inclusive
    bool include_snf = true;
};

// End-of-life cohort: black/white admissions with a stay of at least 6 hours
// that died in hospital or were discharged to hospice (or SNF, by default).
inline Cohort build_eol_cohort(const EhrDataset& ds, const EolCohortOptions& opts = {}) {
    std::vector<std::string> ids;
    for (const auto& a : ds.admissions) {
        if (a.race != Race::white && a.race != Race::black) continue;
        if (a.stay_minutes() < opts.min_stay_minutes) continue;
        const bool eol = a.died_in_hospital ||
                         a.discharge_location == DischargeLocation::hospice ||
                         (opts.include_snf && a.discharge_location == DischargeLocation::snf);
        if (eol) ids.push_back(a.admission_id);
    }
    return Cohort::from_ids("eol", std::move(ids));
}

// Notes population: stays of at least 12 hours with at least one note.
inline Cohort build_notes_population(const EhrDataset& ds, std::int64_t min_stay_minutes = 720) {
    std::vector<std::string> ids;
    for (const auto& a : ds.admissions) {
        if (a.stay_minutes() < min_stay_minutes) continue;
        if (ds.notes_for(a.admission_id).empty()) continue;
        ids.push_back(a.admission_id);
    }
    return Cohort::from_ids("notes_population", std::move(ids));
}

// Partitions a black/white cohort by race. Any `other`-race member violates
// the cohort contract and raises InvalidArgument.
inline std::pair<Cohort, Cohort> split_by_race(const Cohort& c, const EhrDataset& ds) {
    std::vector<std::string> white, black;
    for (const auto& id : c.admission_ids) {
        const Admission* a = ds.find_admission(id);
        if (!a) throw InvalidArgument("cohort member '" + id + "' not in dataset");
        switch (a->race) {
            case Race::white: white.push_back(id); break;
            case Race::black: black.push_back(id); break;
            default:
                throw InvalidArgument("cohort member '" + id +
                                      "' has race 'other'; split_by_race requires a "
                                      "black/white cohort");
        }
    }
    return {Cohort::from_ids(c.name + "_white", std::move(white)),
            Cohort::from_ids(c.name + "_black", std::move(black))};
}

inline void write_cohort_csv(const Cohort& c, std::ostream& out) {
    write_csv_row(out, {"admission_id"});
    for (const auto& id : c.admission_ids) write_csv_row(out, {id});
}

inline Cohort read_cohort_csv(std::istream& in, std::string name, const std::string& file = "cohort") {
    CsvReader reader(in, file);
    std::vector<std::string> row;
    if (!reader.next(row)) throw SchemaError(file + ": empty cohort file (header required)");
    HeaderIndex header(row, file);
    const std::size_t c_id = header.require("admission_id");
    std::vector<std::string> ids;
    while (reader.next(row)) {
        if (row.size() <= c_id) continue;
        auto id = std::string(trim(row[c_id]));
        if (!id.empty()) ids.push_back(std::move(id));
    }
    return Cohort::from_ids(std::move(name), std::move(ids));
}

}  // namespace mistrust
