#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mistrust/analysis.hpp"

namespace mistrust {

// nlohmann::json keeps keys sorted and emits shortest round-trip doubles, so
// dumps are deterministic and value-exact on reload.
using json = nlohmann::json;

inline json to_json(const MannWhitneyResult& r) {
    return json{{"u_statistic", r.u_statistic},
                {"p_two_sided", r.p_two_sided},
                {"method", r.method == MannWhitneyResult::Method::exact ? "exact" : "normal_approx"},
                {"n1", r.n1},
                {"n2", r.n2}};
}

inline MannWhitneyResult mann_whitney_from_json(const json& j) {
    MannWhitneyResult r;
    r.u_statistic = j.at("u_statistic").get<double>();
    r.p_two_sided = j.at("p_two_sided").get<double>();
    r.method = j.at("method").get<std::string>() == "exact"
                   ? MannWhitneyResult::Method::exact
                   : MannWhitneyResult::Method::normal_approx;
    r.n1 = j.at("n1").get<std::size_t>();
    r.n2 = j.at("n2").get<std::size_t>();
    return r;
}

inline json to_json(const EcdfCurve& c) {
    return json{{"values", c.values}, {"fractions", c.fractions}};
}

inline EcdfCurve ecdf_from_json(const json& j) {
    EcdfCurve c;
    c.values = j.at("values").get<std::vector<double>>();
    c.fractions = j.at("fractions").get<std::vector<double>>();
    return c;
}

inline json to_json(const TreatmentDisparity& t) {
    return json{{"stratification", t.stratification},
                {"treatment", t.treatment},
                {"group_a", t.group_a_name},
                {"group_b", t.group_b_name},
                {"treated_a", t.treated_a},
                {"treated_b", t.treated_b},
                {"median_a_minutes", t.median_a},
                {"median_b_minutes", t.median_b},
                {"median_gap_minutes", t.median_gap},
                {"mann_whitney", to_json(t.mann_whitney)},
                {"ecdf_a", to_json(t.ecdf_a)},
                {"ecdf_b", to_json(t.ecdf_b)}};
}

inline TreatmentDisparity treatment_disparity_from_json(const json& j) {
    TreatmentDisparity t;
    t.stratification = j.at("stratification").get<std::string>();
    t.treatment = j.at("treatment").get<std::string>();
    t.group_a_name = j.at("group_a").get<std::string>();
    t.group_b_name = j.at("group_b").get<std::string>();
    t.treated_a = j.at("treated_a").get<std::size_t>();
    t.treated_b = j.at("treated_b").get<std::size_t>();
    t.median_a = j.at("median_a_minutes").get<double>();
    t.median_b = j.at("median_b_minutes").get<double>();
    t.median_gap = j.at("median_gap_minutes").get<double>();
    t.mann_whitney = mann_whitney_from_json(j.at("mann_whitney"));
    t.ecdf_a = ecdf_from_json(j.at("ecdf_a"));
    t.ecdf_b = ecdf_from_json(j.at("ecdf_b"));
    return t;
}

inline json to_json(const SentimentComparison& s) {
    auto row = [](const SentimentGroupRow& r) {
        return json{{"population", r.population},
                    {"n", r.n},
                    {"median_normalized", r.median_normalized}};
    };
    return json{{"stratification", s.stratification},
                {"group_a", row(s.group_a)},
                {"group_b", row(s.group_b)},
                {"mann_whitney", to_json(s.mann_whitney)}};
}

inline SentimentComparison sentiment_comparison_from_json(const json& j) {
    auto row = [](const json& r) {
        return SentimentGroupRow{r.at("population").get<std::string>(),
                                 r.at("n").get<std::size_t>(),
                                 r.at("median_normalized").get<double>()};
    };
    SentimentComparison s;
    s.stratification = j.at("stratification").get<std::string>();
    s.group_a = row(j.at("group_a"));
    s.group_b = row(j.at("group_b"));
    s.mann_whitney = mann_whitney_from_json(j.at("mann_whitney"));
    return s;
}

inline json to_json(const CorrelationMatrix& m) {
    return json{{"labels", m.labels}, {"values", m.values}};
}

inline CorrelationMatrix correlation_matrix_from_json(const json& j) {
    CorrelationMatrix m;
    m.labels = j.at("labels").get<std::array<std::string, 3>>();
    m.values = j.at("values").get<std::array<std::array<double, 3>, 3>>();
    return m;
}

inline json to_json(const WeightReport& w) {
    auto entries = [](const std::vector<TopFeatureEntry>& v) {
        json arr = json::array();
        for (const auto& e : v) arr.push_back(json{{"feature", e.feature}, {"weight", e.weight}});
        return arr;
    };
    return json{{"positive", entries(w.positive)}, {"negative", entries(w.negative)}};
}

inline WeightReport weight_report_from_json(const json& j) {
    auto entries = [](const json& arr) {
        std::vector<TopFeatureEntry> v;
        for (const auto& e : arr)
            v.push_back({e.at("feature").get<std::string>(), e.at("weight").get<double>()});
        return v;
    };
    return WeightReport{entries(j.at("positive")), entries(j.at("negative"))};
}

inline json to_json(const SummaryReport& s) {
    return json{{"admissions", s.admissions},
                {"chart_events", s.chart_events},
                {"notes", s.notes},
                {"treatment_spans", s.treatment_spans},
                {"severity", s.severity},
                {"race_white", s.race_white},
                {"race_black", s.race_black},
                {"race_other", s.race_other}};
}

inline SummaryReport summary_from_json(const json& j) {
    SummaryReport s;
    s.admissions = j.at("admissions").get<std::size_t>();
    s.chart_events = j.at("chart_events").get<std::size_t>();
    s.notes = j.at("notes").get<std::size_t>();
    s.treatment_spans = j.at("treatment_spans").get<std::size_t>();
    s.severity = j.at("severity").get<std::size_t>();
    s.race_white = j.at("race_white").get<std::size_t>();
    s.race_black = j.at("race_black").get<std::size_t>();
    s.race_other = j.at("race_other").get<std::size_t>();
    return s;
}

inline json to_json(const MistrustRaceComparison& c) {
    return json{{"n_black", c.n_black},
                {"n_white", c.n_white},
                {"median_black", c.median_black},
                {"median_white", c.median_white},
                {"mann_whitney", to_json(c.mann_whitney)}};
}

inline MistrustRaceComparison mistrust_race_from_json(const json& j) {
    MistrustRaceComparison c;
    c.n_black = j.at("n_black").get<std::size_t>();
    c.n_white = j.at("n_white").get<std::size_t>();
    c.median_black = j.at("median_black").get<double>();
    c.median_white = j.at("median_white").get<double>();
    c.mann_whitney = mann_whitney_from_json(j.at("mann_whitney"));
    return c;
}

inline json to_json(const DisparityReport& r) {
    json j{{"summary", to_json(r.summary)},
           {"eol_cohort_size", r.eol_cohort_size},
           {"eol_white", r.eol_white},
           {"eol_black", r.eol_black},
           {"notes_population_size", r.notes_population_size}};
    j["mistrust_by_race"] = r.mistrust_by_race ? to_json(*r.mistrust_by_race) : json(nullptr);
    j["treatment_sections"] = json::array();
    for (const auto& t : r.treatment_sections) j["treatment_sections"].push_back(to_json(t));
    j["sentiment_sections"] = json::array();
    for (const auto& s : r.sentiment_sections) j["sentiment_sections"].push_back(to_json(s));
    j["correlations"] = r.correlations ? to_json(*r.correlations) : json(nullptr);
    j["weight_report"] = r.weight_report ? to_json(*r.weight_report) : json(nullptr);
    return j;
}

inline DisparityReport report_from_json(const json& j) {
    DisparityReport r;
    r.summary = summary_from_json(j.at("summary"));
    r.eol_cohort_size = j.at("eol_cohort_size").get<std::size_t>();
    r.eol_white = j.at("eol_white").get<std::size_t>();
    r.eol_black = j.at("eol_black").get<std::size_t>();
    r.notes_population_size = j.at("notes_population_size").get<std::size_t>();
    if (!j.at("mistrust_by_race").is_null())
        r.mistrust_by_race = mistrust_race_from_json(j.at("mistrust_by_race"));
    for (const auto& t : j.at("treatment_sections"))
        r.treatment_sections.push_back(treatment_disparity_from_json(t));
    for (const auto& s : j.at("sentiment_sections"))
        r.sentiment_sections.push_back(sentiment_comparison_from_json(s));
    if (!j.at("correlations").is_null())
        r.correlations = correlation_matrix_from_json(j.at("correlations"));
    if (!j.at("weight_report").is_null())
        r.weight_report = weight_report_from_json(j.at("weight_report"));
    return r;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

inline void write_report_json(const DisparityReport& r, const std::filesystem::path& path) {
    write_text_file(path, to_json(r).dump(2) + "\n");
}

inline DisparityReport read_report_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    json j = json::parse(in);
    return report_from_json(j);
}

// ---------------------------------------------------------------------------
// run manifest
// ---------------------------------------------------------------------------

// Everything needed to re-derive an output directory. Deliberately carries no
// wall-clock timestamp so identical runs produce identical manifests.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> outputs;
    std::string tool_version = kVersion;
};

inline void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    json j;
    j["command"] = m.command;
    j["tool_version"] = m.tool_version;
    json inputs = json::object();
    for (const auto& [k, v] : m.inputs) inputs[k] = v;
    j["inputs"] = inputs;
    json params = json::object();
    for (const auto& [k, v] : m.parameters) params[k] = v;
    j["parameters"] = params;
    j["outputs"] = m.outputs;
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace mistrust
