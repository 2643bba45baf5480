#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mistrust/data_model.hpp"
#include "mistrust/stats.hpp"

namespace mistrust {

// Seeded MIMIC-shaped generator with a known latent-mistrust ground truth.
// The causal story: latent mistrust drives noncompliance notes, interpersonal
// chart indicators, negative note sentiment, and (above a latent threshold)
// multiplied treatment durations. Race correlates with the latent only through
// a configurable mean shift. Severity is independent of the latent by default.
struct SynthConfig {
    std::size_t n_admissions = 2000;
    std::uint64_t seed = 20260101;

    double black_fraction = 0.25;
    double latent_race_shift = 0.5;

    // logistic link from latent to the documented-noncompliance probability
    double noncompliance_intercept = -2.2;
    double noncompliance_slope = 1.5;

    // binary indicator links; empty slopes -> alternating +/- default_slope
    std::size_t n_features = 12;
    double default_feature_slope = 2.0;
    std::vector<double> feature_slopes;

    // treatment durations: log-normal base, multiplied for high-latent patients
    double ventilation_prob = 0.65;
    double ventilation_log_mean = std::log(2000.0);
    double ventilation_log_sd = 0.45;
    double vasopressor_prob = 0.5;
    double vasopressor_log_mean = std::log(1200.0);
    double vasopressor_log_sd = 0.45;
    double disparity_multiplier = 2.0;
    double high_latent_quantile = 0.75;  // latent above this standard-normal quantile
    double span_split_prob = 0.3;        // chance a duration is re-recorded as two spans

    // notes
    int min_notes = 2;
    int max_notes = 4;
    int tokens_per_note = 40;
    double lexicon_injection_rate = 0.2;
    double sentiment_slope = 1.0;  // P(negative word) = sigmoid(slope * latent)
    double deid_placeholder_prob = 0.3;

    // severity scores, independent of latent unless severity_latent_slope != 0
    double severity_corr = 0.7;  // injected corr(oasis, sapsii)
    double severity_latent_slope = 0.0;

    // admission shape
    double stay_log_mean = std::log(4320.0);  // median three days
    double stay_log_sd = 0.6;
    double death_prob = 0.4;
    double hospice_prob = 0.1;
    double snf_prob = 0.2;
    double home_prob = 0.2;
};

struct GroundTruthRow {
    double latent = 0;
    bool noncompliant = false;
    bool high_latent = false;
    friend bool operator==(const GroundTruthRow&, const GroundTruthRow&) = default;
};

struct GroundTruth {
    std::map<std::string, GroundTruthRow> rows;
};

struct SynthResult {
    EhrDataset dataset;
    GroundTruth truth;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent per-admission substream so parallel generation stays
// reproducible and order-free.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t counter) {
    return splitmix64(splitmix64(seed) ^ splitmix64(0xd1b54a32d192ed03ULL * (counter + 1)));
}

inline double inverse_normal_cdf(double q) {
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline const std::vector<std::string>& synth_filler_words() {
    static const std::vector<std::string> words{
        "patient",   "exam",      "plan",      "continue", "monitor",   "assess",
        "review",    "team",      "vitals",    "dose",     "fluids",    "lungs",
        "heart",     "rate",      "pressure",  "overnight", "shift",    "status",
        "rounds",    "labs",      "imaging",   "ordered",  "scheduled", "pending",
        "discussed", "updated",   "observed",  "recorded", "documented", "given",
        "started",   "completed", "morning",   "evening",  "baseline",  "bedside",
        "spouse",    "consult",   "repeat",    "current",  "daily",     "medication"};
    return words;
}

inline const std::vector<std::string>& synth_positive_words() {
    static const std::vector<std::string> words{
        "comfortable", "calm",      "stable",   "improving", "cooperative",
        "pleasant",    "resting",   "relaxed",  "alert",     "oriented",
        "tolerating",  "engaged",   "receptive", "smiling",  "peaceful",
        "grateful",    "good",      "steady",   "consolable", "participates"};
    return words;
}

inline const std::vector<std::string>& synth_negative_words() {
    static const std::vector<std::string> words{
        "agitated",  "combative",  "confused",   "anxious",  "distressed",
        "uncomfortable", "refused", "uncooperative", "hostile", "angry",
        "upset",     "frustrated", "restless",   "worsening", "unstable",
        "tearful",   "crying",     "pain",       "suffering", "withdrawn"};
    return words;
}

}  // namespace detail

inline void validate_config(const SynthConfig& c) {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (c.n_admissions < 2) throw InvalidArgument("synth: n_admissions must be at least 2");
    if (!in_unit(c.black_fraction)) throw InvalidArgument("synth: black_fraction outside [0,1]");
    if (c.disparity_multiplier < 1.0)
        throw InvalidArgument("synth: disparity_multiplier must be >= 1");
    if (c.high_latent_quantile <= 0.0 || c.high_latent_quantile >= 1.0)
        throw InvalidArgument("synth: high_latent_quantile must be inside (0,1)");
    if (!in_unit(c.lexicon_injection_rate))
        throw InvalidArgument("synth: lexicon_injection_rate outside [0,1]");
    if (!in_unit(c.ventilation_prob) || !in_unit(c.vasopressor_prob) ||
        !in_unit(c.span_split_prob) || !in_unit(c.deid_placeholder_prob))
        throw InvalidArgument("synth: probability outside [0,1]");
    if (c.death_prob + c.hospice_prob + c.snf_prob + c.home_prob > 1.0 + 1e-12 ||
        c.death_prob < 0 || c.hospice_prob < 0 || c.snf_prob < 0 || c.home_prob < 0)
        throw InvalidArgument("synth: discharge outcome probabilities must be >= 0 and sum to <= 1");
    if (std::abs(c.severity_corr) > 1.0) throw InvalidArgument("synth: |severity_corr| > 1");
    if (c.ventilation_log_sd <= 0 || c.vasopressor_log_sd <= 0 || c.stay_log_sd <= 0)
        throw InvalidArgument("synth: log-normal sd must be positive");
    if (c.min_notes < 1 || c.max_notes < c.min_notes)
        throw InvalidArgument("synth: note counts must satisfy 1 <= min <= max");
    if (c.tokens_per_note < 1) throw InvalidArgument("synth: tokens_per_note must be >= 1");
    if (!c.feature_slopes.empty() && c.feature_slopes.size() != c.n_features)
        throw InvalidArgument("synth: feature_slopes length must equal n_features");
}

inline std::vector<double> effective_feature_slopes(const SynthConfig& c) {
    if (!c.feature_slopes.empty()) return c.feature_slopes;
    std::vector<double> slopes(c.n_features);
    for (std::size_t j = 0; j < c.n_features; ++j) {
        slopes[j] = (j % 2 == 0 ? 1.0 : -1.0) * c.default_feature_slope;
    }
    return slopes;
}

inline SynthResult generate(const SynthConfig& config) {
    validate_config(config);
    const std::vector<double> slopes = effective_feature_slopes(config);
    const double latent_threshold = detail::inverse_normal_cdf(config.high_latent_quantile);
    const std::int64_t base_time = *parse_timestamp("2100-01-01 00:00:00");

    const auto& fillers = detail::synth_filler_words();
    const auto& positives = detail::synth_positive_words();
    const auto& negatives = detail::synth_negative_words();
    const std::array<std::string_view, 3> categories{"nursing", "physician", "social work"};

    SynthResult result;
    EhrDataset& ds = result.dataset;

    for (std::size_t i = 0; i < config.n_admissions; ++i) {
        std::mt19937_64 rng(detail::substream_seed(config.seed, i));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        char id_buf[32];
        std::snprintf(id_buf, sizeof id_buf, "adm-%06zu", i);
        const std::string admission_id = id_buf;
        std::snprintf(id_buf, sizeof id_buf, "pat-%06zu", i);
        const std::string patient_id = id_buf;

        const bool black = unit(rng) < config.black_fraction;
        const double latent = gauss(rng) + (black ? config.latent_race_shift : 0.0);
        const bool high_latent = latent > latent_threshold;

        const std::int64_t stay = std::max<std::int64_t>(
            60, std::llround(std::exp(config.stay_log_mean + config.stay_log_sd * gauss(rng))));
        Admission adm;
        adm.admission_id = admission_id;
        adm.patient_id = patient_id;
        adm.admit_time = base_time + static_cast<std::int64_t>(i) * 180;
        adm.discharge_time = adm.admit_time + stay;
        adm.race = black ? Race::black : Race::white;

        const double outcome = unit(rng);
        if (outcome < config.death_prob) {
            adm.died_in_hospital = true;
            adm.discharge_location = DischargeLocation::none;
        } else if (outcome < config.death_prob + config.hospice_prob) {
            adm.discharge_location = DischargeLocation::hospice;
        } else if (outcome < config.death_prob + config.hospice_prob + config.snf_prob) {
            adm.discharge_location = DischargeLocation::snf;
        } else if (outcome <
                   config.death_prob + config.hospice_prob + config.snf_prob + config.home_prob) {
            adm.discharge_location = DischargeLocation::home;
        } else {
            adm.discharge_location = DischargeLocation::other;
        }
        ds.admissions.push_back(adm);

        // notes with sentiment words linked to the latent
        const int n_notes =
            config.min_notes + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                            config.max_notes - config.min_notes + 1));
        const double p_negative = sigmoid(config.sentiment_slope * latent);
        std::vector<std::size_t> note_indices;
        for (int k = 0; k < n_notes; ++k) {
            std::string text;
            if (unit(rng) < config.deid_placeholder_prob) {
                text += "date:[**2100-1-" + std::to_string(1 + rng() % 28) + "**] ";
            }
            for (int t = 0; t < config.tokens_per_note; ++t) {
                if (t > 0) text.push_back(t % 10 == 0 ? '.' : ' ');
                if (t % 10 == 0 && t > 0) text.push_back(' ');
                if (unit(rng) < config.lexicon_injection_rate) {
                    const auto& pool = unit(rng) < p_negative ? negatives : positives;
                    text += pool[rng() % pool.size()];
                } else {
                    text += fillers[rng() % fillers.size()];
                }
            }
            text.push_back('.');
            NoteRecord note;
            note.admission_id = admission_id;
            note.chart_time =
                adm.admit_time + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(stay));
            note.category = std::string(categories[rng() % categories.size()]);
            note.text = std::move(text);
            note_indices.push_back(ds.notes.size());
            ds.notes.push_back(std::move(note));
        }

        const bool noncompliant =
            unit(rng) < sigmoid(config.noncompliance_intercept + config.noncompliance_slope * latent);
        if (noncompliant) {
            const std::size_t pick = note_indices[rng() % note_indices.size()];
            ds.notes[pick].text += " patient noncompliant with prescribed regimen.";
        }

        // binary interpersonal indicators
        for (std::size_t j = 0; j < config.n_features; ++j) {
            if (unit(rng) < sigmoid(slopes[j] * latent)) {
                ChartEventRecord ev;
                ev.admission_id = admission_id;
                std::snprintf(id_buf, sizeof id_buf, "indicator %02zu", j);
                ev.item_label = id_buf;
                ev.value_label = "present";
                ev.chart_time = adm.admit_time +
                                static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(stay));
                ds.chart_events.push_back(std::move(ev));
            }
        }

        // treatment spans
        auto emit_treatment = [&](Treatment treatment, double prob, double log_mean,
                                  double log_sd) {
            if (unit(rng) >= prob) return;
            double minutes = std::exp(log_mean + log_sd * gauss(rng));
            if (high_latent) minutes *= config.disparity_multiplier;
            const std::int64_t duration = std::max<std::int64_t>(1, std::llround(minutes));
            const std::int64_t start =
                adm.admit_time + static_cast<std::int64_t>(
                                     rng() % static_cast<std::uint64_t>(std::max<std::int64_t>(
                                                 1, stay / 4)));
            if (duration >= 120 && unit(rng) < config.span_split_prob) {
                // re-recorded as two back-to-back spans with a small gap
                const std::int64_t gap = 30 + static_cast<std::int64_t>(rng() % 211);
                const std::int64_t first =
                    std::max<std::int64_t>(1, std::llround(duration * (0.25 + 0.5 * unit(rng))));
                ds.treatment_spans.push_back(
                    {admission_id, treatment, start, start + first});
                ds.treatment_spans.push_back({admission_id, treatment, start + first + gap,
                                              start + duration + gap});
            } else {
                ds.treatment_spans.push_back({admission_id, treatment, start, start + duration});
            }
        };
        emit_treatment(Treatment::ventilation, config.ventilation_prob,
                       config.ventilation_log_mean, config.ventilation_log_sd);
        emit_treatment(Treatment::vasopressor, config.vasopressor_prob,
                       config.vasopressor_log_mean, config.vasopressor_log_sd);

        // severity scores
        const double z1 = gauss(rng);
        const double z2 = gauss(rng);
        const double oasis_z = z1 + config.severity_latent_slope * latent;
        const double saps_z = config.severity_corr * z1 +
                              std::sqrt(1.0 - config.severity_corr * config.severity_corr) * z2;
        SeverityRecord sev;
        sev.admission_id = admission_id;
        sev.oasis = std::max(0.0, 30.0 + 8.0 * oasis_z);
        sev.sapsii = std::max(0.0, 35.0 + 10.0 * saps_z);
        ds.severity.push_back(std::move(sev));

        result.truth.rows.emplace(admission_id, GroundTruthRow{latent, noncompliant, high_latent});
    }

    ds.finalize();
    return result;
}

// ---------------------------------------------------------------------------
// flat key=value config file
// ---------------------------------------------------------------------------

inline SynthConfig parse_synth_config(std::istream& in, const std::string& file = "synth config") {
    SynthConfig c;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError(file + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key = std::string(trim(stripped.substr(0, eq)));
        const std::string value = std::string(trim(stripped.substr(eq + 1)));
        auto as_double = [&](double& out) {
            auto v = detail::parse_double(value);
            if (!v)
                throw ValidationError(file + ":" + std::to_string(line_no) +
                                      ": unparseable number for '" + key + "'");
            out = *v;
        };
        auto as_size = [&](std::size_t& out) {
            double v = 0;
            as_double(v);
            out = static_cast<std::size_t>(v);
        };
        auto as_int = [&](int& out) {
            double v = 0;
            as_double(v);
            out = static_cast<int>(v);
        };
        if (key == "n_admissions") as_size(c.n_admissions);
        else if (key == "seed") c.seed = std::stoull(value);
        else if (key == "black_fraction") as_double(c.black_fraction);
        else if (key == "latent_race_shift") as_double(c.latent_race_shift);
        else if (key == "noncompliance_intercept") as_double(c.noncompliance_intercept);
        else if (key == "noncompliance_slope") as_double(c.noncompliance_slope);
        else if (key == "n_features") as_size(c.n_features);
        else if (key == "default_feature_slope") as_double(c.default_feature_slope);
        else if (key == "feature_slopes") {
            c.feature_slopes.clear();
            for (const auto& part : split(value, ',')) {
                auto v = detail::parse_double(part);
                if (!v)
                    throw ValidationError(file + ":" + std::to_string(line_no) +
                                          ": unparseable feature_slopes entry");
                c.feature_slopes.push_back(*v);
            }
        } else if (key == "ventilation_prob") as_double(c.ventilation_prob);
        else if (key == "ventilation_log_mean") as_double(c.ventilation_log_mean);
        else if (key == "ventilation_log_sd") as_double(c.ventilation_log_sd);
        else if (key == "vasopressor_prob") as_double(c.vasopressor_prob);
        else if (key == "vasopressor_log_mean") as_double(c.vasopressor_log_mean);
        else if (key == "vasopressor_log_sd") as_double(c.vasopressor_log_sd);
        else if (key == "disparity_multiplier") as_double(c.disparity_multiplier);
        else if (key == "high_latent_quantile") as_double(c.high_latent_quantile);
        else if (key == "span_split_prob") as_double(c.span_split_prob);
        else if (key == "min_notes") as_int(c.min_notes);
        else if (key == "max_notes") as_int(c.max_notes);
        else if (key == "tokens_per_note") as_int(c.tokens_per_note);
        else if (key == "lexicon_injection_rate") as_double(c.lexicon_injection_rate);
        else if (key == "sentiment_slope") as_double(c.sentiment_slope);
        else if (key == "deid_placeholder_prob") as_double(c.deid_placeholder_prob);
        else if (key == "severity_corr") as_double(c.severity_corr);
        else if (key == "severity_latent_slope") as_double(c.severity_latent_slope);
        else if (key == "stay_log_mean") as_double(c.stay_log_mean);
        else if (key == "stay_log_sd") as_double(c.stay_log_sd);
        else if (key == "death_prob") as_double(c.death_prob);
        else if (key == "hospice_prob") as_double(c.hospice_prob);
        else if (key == "snf_prob") as_double(c.snf_prob);
        else if (key == "home_prob") as_double(c.home_prob);
        else
            throw ValidationError(file + ":" + std::to_string(line_no) + ": unknown key '" + key +
                                  "'");
    }
    validate_config(c);
    return c;
}

inline std::vector<std::pair<std::string, std::string>> config_to_pairs(const SynthConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    auto add = [&](const char* k, auto v) {
        if constexpr (std::is_floating_point_v<decltype(v)>) out.emplace_back(k, format_double(v));
        else out.emplace_back(k, std::to_string(v));
    };
    add("n_admissions", c.n_admissions);
    add("seed", c.seed);
    add("black_fraction", c.black_fraction);
    add("latent_race_shift", c.latent_race_shift);
    add("noncompliance_intercept", c.noncompliance_intercept);
    add("noncompliance_slope", c.noncompliance_slope);
    add("n_features", c.n_features);
    add("default_feature_slope", c.default_feature_slope);
    {
        std::string s;
        for (std::size_t i = 0; i < c.feature_slopes.size(); ++i) {
            if (i) s += ",";
            s += format_double(c.feature_slopes[i]);
        }
        out.emplace_back("feature_slopes", s);
    }
    add("ventilation_prob", c.ventilation_prob);
    add("ventilation_log_mean", c.ventilation_log_mean);
    add("ventilation_log_sd", c.ventilation_log_sd);
    add("vasopressor_prob", c.vasopressor_prob);
    add("vasopressor_log_mean", c.vasopressor_log_mean);
    add("vasopressor_log_sd", c.vasopressor_log_sd);
    add("disparity_multiplier", c.disparity_multiplier);
    add("high_latent_quantile", c.high_latent_quantile);
    add("span_split_prob", c.span_split_prob);
    add("min_notes", c.min_notes);
    add("max_notes", c.max_notes);
    add("tokens_per_note", c.tokens_per_note);
    add("lexicon_injection_rate", c.lexicon_injection_rate);
    add("sentiment_slope", c.sentiment_slope);
    add("deid_placeholder_prob", c.deid_placeholder_prob);
    add("severity_corr", c.severity_corr);
    add("severity_latent_slope", c.severity_latent_slope);
    add("stay_log_mean", c.stay_log_mean);
    add("stay_log_sd", c.stay_log_sd);
    add("death_prob", c.death_prob);
    add("hospice_prob", c.hospice_prob);
    add("snf_prob", c.snf_prob);
    add("home_prob", c.home_prob);
    return out;
}

inline void write_ground_truth_csv(const GroundTruth& truth, std::ostream& out) {
    write_csv_row(out, {"admission_id", "latent", "noncompliant", "high_latent"});
    for (const auto& [id, row] : truth.rows) {
        write_csv_row(out, {id, format_double(row.latent), row.noncompliant ? "1" : "0",
                            row.high_latent ? "1" : "0"});
    }
}

}  // namespace mistrust
