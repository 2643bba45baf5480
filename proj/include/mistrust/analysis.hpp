#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "mistrust/cohort.hpp"
#include "mistrust/data_model.hpp"
#include "mistrust/sentiment.hpp"
#include "mistrust/sparse_logreg.hpp"
#include "mistrust/stats.hpp"
#include "mistrust/treatments.hpp"

namespace mistrust {

// group_a is the disadvantaged / low-trust analog (black, low trust, high
// severity); group_b is the comparison group.
struct Stratification {
    std::string name;
    Cohort group_a;
    Cohort group_b;
};

// Ranks by mistrust score descending (ties by admission_id ascending) and
// takes the top k_low_trust as group_a.
inline Stratification stratify_by_score(std::span<const MistrustScore> scores,
                                        std::size_t k_low_trust, std::string name = "trust") {
    if (k_low_trust < 1 || k_low_trust >= scores.size())
        throw InvalidArgument("stratify_by_score: k must satisfy 1 <= k < number of scores");
    std::vector<const MistrustScore*> order;
    order.reserve(scores.size());
    for (const auto& s : scores) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](const MistrustScore* a, const MistrustScore* b) {
        if (a->score != b->score) return a->score > b->score;
        return a->admission_id < b->admission_id;
    });
    std::vector<std::string> low, high;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < k_low_trust ? low : high).push_back(order[i]->admission_id);
    }
    Stratification strat;
    strat.name = std::move(name);
    strat.group_a = Cohort::from_ids("low_trust", std::move(low));
    strat.group_b = Cohort::from_ids("high_trust", std::move(high));
    return strat;
}

// Ranks by OASIS descending (ties by admission_id ascending): the top n_high
// become the high-severity group. n_high + n_low must cover the cohort.
inline Stratification severity_strata(const EhrDataset& ds, const Cohort& cohort,
                                      std::size_t n_high, std::size_t n_low) {
    if (n_high + n_low != cohort.size())
        throw InvalidArgument("severity_strata: group sizes must partition the cohort (" +
                              std::to_string(n_high) + "+" + std::to_string(n_low) +
                              " != " + std::to_string(cohort.size()) + ")");
    if (n_high < 1 || n_low < 1)
        throw InvalidArgument("severity_strata: both groups must be nonempty");
    std::vector<std::pair<double, std::string>> ranked;
    std::string missing;
    for (const auto& id : cohort.admission_ids) {
        const SeverityRecord* sev = ds.find_severity(id);
        if (!sev) {
            missing += missing.empty() ? id : ", " + id;
            continue;
        }
        ranked.emplace_back(sev->oasis, id);
    }
    if (!missing.empty())
        throw InvalidArgument("severity_strata: missing severity rows for: " + missing);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;  // lexicographically smaller id enters the high group
    });
    std::vector<std::string> high, low;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        (i < n_high ? high : low).push_back(std::move(ranked[i].second));
    }
    Stratification strat;
    strat.name = "severity";
    strat.group_a = Cohort::from_ids("high_severity", std::move(high));
    strat.group_b = Cohort::from_ids("low_severity", std::move(low));
    return strat;
}

// ---------------------------------------------------------------------------
// treatment disparity
// ---------------------------------------------------------------------------

struct TreatmentDisparity {
    std::string stratification;
    std::string treatment;
    std::string group_a_name;
    std::string group_b_name;
    std::size_t treated_a = 0;
    std::size_t treated_b = 0;
    double median_a = 0;
    double median_b = 0;
    double median_gap = 0;  // median_a - median_b, sign retained
    MannWhitneyResult mann_whitney;
    EcdfCurve ecdf_a;
    EcdfCurve ecdf_b;
    friend bool operator==(const TreatmentDisparity&, const TreatmentDisparity&) = default;
};

inline TreatmentDisparity treatment_disparity(const EhrDataset& ds, const Stratification& strat,
                                              Treatment treatment,
                                              const DurationOptions& opts = {},
                                              std::size_t mw_exact_threshold = 20) {
    auto collect = [&](const Cohort& group) {
        std::vector<double> durations;
        for (const auto& [id, minutes] : durations_for_cohort(ds, group, treatment, opts)) {
            durations.push_back(static_cast<double>(minutes));
        }
        return durations;
    };
    const std::vector<double> a = collect(strat.group_a);
    const std::vector<double> b = collect(strat.group_b);
    if (a.empty())
        throw InvalidArgument("treatment_disparity: group '" + strat.group_a.name +
                              "' has no treated admission for " +
                              std::string(to_string(treatment)));
    if (b.empty())
        throw InvalidArgument("treatment_disparity: group '" + strat.group_b.name +
                              "' has no treated admission for " +
                              std::string(to_string(treatment)));
    TreatmentDisparity out;
    out.stratification = strat.name;
    out.treatment = std::string(to_string(treatment));
    out.group_a_name = strat.group_a.name;
    out.group_b_name = strat.group_b.name;
    out.treated_a = a.size();
    out.treated_b = b.size();
    out.median_a = median(a);
    out.median_b = median(b);
    out.median_gap = out.median_a - out.median_b;
    out.mann_whitney = mann_whitney(a, b, mw_exact_threshold);
    out.ecdf_a = ecdf(a);
    out.ecdf_b = ecdf(b);
    return out;
}

// ---------------------------------------------------------------------------
// sentiment comparison
// ---------------------------------------------------------------------------

struct SentimentGroupRow {
    std::string population;
    std::size_t n = 0;
    double median_normalized = 0;
    friend bool operator==(const SentimentGroupRow&, const SentimentGroupRow&) = default;
};

struct SentimentComparison {
    std::string stratification;
    SentimentGroupRow group_a;
    SentimentGroupRow group_b;
    MannWhitneyResult mann_whitney;
    friend bool operator==(const SentimentComparison&, const SentimentComparison&) = default;
};

inline SentimentComparison compare_sentiment(std::span<const SentimentScore> population_scores,
                                             const Stratification& strat,
                                             std::size_t mw_exact_threshold = 20) {
    std::map<std::string, double> by_id;
    for (const auto& s : population_scores) by_id.emplace(s.admission_id, s.normalized);
    auto collect = [&](const Cohort& group) {
        std::vector<double> values;
        for (const auto& id : group.admission_ids) {
            auto it = by_id.find(id);
            if (it == by_id.end())
                throw InvalidArgument("compare_sentiment: no sentiment score for '" + id + "'");
            values.push_back(it->second);
        }
        return values;
    };
    const auto a = collect(strat.group_a);
    const auto b = collect(strat.group_b);
    if (a.empty() || b.empty())
        throw InvalidArgument("compare_sentiment: empty group in '" + strat.name + "'");
    SentimentComparison out;
    out.stratification = strat.name;
    out.group_a = {strat.group_a.name, a.size(), median(a)};
    out.group_b = {strat.group_b.name, b.size(), median(b)};
    out.mann_whitney = mann_whitney(a, b, mw_exact_threshold);
    return out;
}

// ---------------------------------------------------------------------------
// correlation report
// ---------------------------------------------------------------------------

struct CorrelationMatrix {
    std::array<std::string, 3> labels{"oasis", "sapsii", "mistrust"};
    std::array<std::array<double, 3>, 3> values{};
    friend bool operator==(const CorrelationMatrix&, const CorrelationMatrix&) = default;
};

// Pairwise Pearson correlations over (oasis, sapsii, mistrust) for the cohort.
// Every cohort admission must carry severity and a mistrust score.
inline CorrelationMatrix correlation_report(const EhrDataset& ds, const Cohort& cohort,
                                            const std::map<std::string, double>& mistrust_scores) {
    std::vector<double> oasis, sapsii, mistrust_vals;
    std::string missing;
    for (const auto& id : cohort.admission_ids) {
        const SeverityRecord* sev = ds.find_severity(id);
        auto it = mistrust_scores.find(id);
        if (!sev || it == mistrust_scores.end()) {
            missing += missing.empty() ? id : ", " + id;
            continue;
        }
        oasis.push_back(sev->oasis);
        sapsii.push_back(sev->sapsii);
        mistrust_vals.push_back(it->second);
    }
    if (!missing.empty())
        throw InvalidArgument("correlation_report: missing severity or score for: " + missing);

    const std::array<const std::vector<double>*, 3> columns{&oasis, &sapsii, &mistrust_vals};
    CorrelationMatrix m;
    for (std::size_t i = 0; i < 3; ++i) {
        m.values[i][i] = 1.0;
        for (std::size_t j = i + 1; j < 3; ++j) {
            const double r = pearson(*columns[i], *columns[j]);
            m.values[i][j] = r;
            m.values[j][i] = r;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// assembled report
// ---------------------------------------------------------------------------

struct TopFeatureEntry {
    std::string feature;
    double weight = 0;
    friend bool operator==(const TopFeatureEntry&, const TopFeatureEntry&) = default;
};

struct WeightReport {
    std::vector<TopFeatureEntry> positive;
    std::vector<TopFeatureEntry> negative;
    friend bool operator==(const WeightReport&, const WeightReport&) = default;
};

// Race comparison of the mistrust score itself (medians + rank test).
struct MistrustRaceComparison {
    std::size_t n_black = 0;
    std::size_t n_white = 0;
    double median_black = 0;
    double median_white = 0;
    MannWhitneyResult mann_whitney;
    friend bool operator==(const MistrustRaceComparison&, const MistrustRaceComparison&) = default;
};

struct DisparityReport {
    SummaryReport summary;
    std::size_t eol_cohort_size = 0;
    std::size_t eol_white = 0;
    std::size_t eol_black = 0;
    std::size_t notes_population_size = 0;
    std::optional<MistrustRaceComparison> mistrust_by_race;
    std::vector<TreatmentDisparity> treatment_sections;
    std::vector<SentimentComparison> sentiment_sections;
    std::optional<CorrelationMatrix> correlations;
    std::optional<WeightReport> weight_report;
    friend bool operator==(const DisparityReport&, const DisparityReport&) = default;
};

enum class SentimentPopulation { eol_cohort, notes_population };

struct AnalysisOptions {
    bool strata_race = true;
    bool strata_trust = true;
    bool strata_severity = true;
    std::vector<Treatment> treatments{Treatment::ventilation, Treatment::vasopressor};
    DurationOptions duration;
    EolCohortOptions eol;
    std::optional<std::size_t> k_low_trust;  // default: the race split's black count
    const SentimentLexicon* lexicon = nullptr;  // null -> default lexicon
    SentimentPopulation sentiment_population = SentimentPopulation::eol_cohort;
    std::size_t mw_exact_threshold = 20;
    std::size_t top_k = 3;
};

// Runs the full disparity analysis over an in-memory dataset. `scores` must
// cover every admission the selected stratifications touch (the EOL cohort for
// trust strata). `model` is optional and only feeds the weight report;
// `sentiment_out`, when given, receives the per-admission sentiment scores.
inline DisparityReport run_analysis(const EhrDataset& ds, std::span<const MistrustScore> scores,
                                    const MistrustModel* model, const AnalysisOptions& opts = {},
                                    std::vector<SentimentScore>* sentiment_out = nullptr) {
    DisparityReport report;
    report.summary = dataset_summary(ds);
    report.notes_population_size = build_notes_population(ds).size();

    const Cohort eol = build_eol_cohort(ds, opts.eol);
    if (eol.empty()) throw InvalidArgument("run_analysis: end-of-life cohort is empty");
    auto [white, black] = split_by_race(eol, ds);
    report.eol_cohort_size = eol.size();
    report.eol_white = white.size();
    report.eol_black = black.size();

    std::map<std::string, double> score_by_id;
    for (const auto& s : scores) score_by_id.emplace(s.admission_id, s.score);

    // --- mistrust score by race (when scores cover the EOL cohort) ---
    if (opts.strata_race && !black.empty() && !white.empty()) {
        std::vector<double> black_scores, white_scores;
        bool covered = true;
        for (const auto& id : eol.admission_ids) {
            auto it = score_by_id.find(id);
            if (it == score_by_id.end()) {
                covered = false;
                break;
            }
            (black.contains(id) ? black_scores : white_scores).push_back(it->second);
        }
        if (covered) {
            MistrustRaceComparison cmp;
            cmp.n_black = black_scores.size();
            cmp.n_white = white_scores.size();
            cmp.median_black = median(black_scores);
            cmp.median_white = median(white_scores);
            cmp.mann_whitney = mann_whitney(black_scores, white_scores, opts.mw_exact_threshold);
            report.mistrust_by_race = cmp;
        }
    }

    // --- treatment disparities ---
    for (Treatment treatment : opts.treatments) {
        Stratification race_strat{"race", black, white};
        if (opts.strata_race) {
            report.treatment_sections.push_back(treatment_disparity(
                ds, race_strat, treatment, opts.duration, opts.mw_exact_threshold));
        }
        if (opts.strata_trust) {
            // Same group sizes as the race split within the same treated
            // population: rank the treated admissions by mistrust score.
            const auto durations = durations_for_cohort(ds, eol, treatment, opts.duration);
            std::vector<MistrustScore> treated_scores;
            std::size_t treated_black = 0;
            for (const auto& [id, minutes] : durations) {
                auto it = score_by_id.find(id);
                if (it == score_by_id.end())
                    throw InvalidArgument("run_analysis: no mistrust score for treated admission '" +
                                          id + "'");
                treated_scores.push_back({id, it->second});
                if (black.contains(id)) ++treated_black;
            }
            const std::size_t k = opts.k_low_trust.value_or(treated_black);
            auto trust_strat = stratify_by_score(treated_scores, k);
            report.treatment_sections.push_back(treatment_disparity(
                ds, trust_strat, treatment, opts.duration, opts.mw_exact_threshold));
        }
    }

    // --- sentiment comparisons ---
    // The normalization population defaults to the EOL cohort; the alternative
    // is the (black/white members of the) notes population.
    Cohort sentiment_pop = eol;
    Cohort sent_white = white, sent_black = black;
    if (opts.sentiment_population == SentimentPopulation::notes_population) {
        std::vector<std::string> ids;
        for (const auto& id : build_notes_population(ds).admission_ids) {
            const Admission* a = ds.find_admission(id);
            if (a && (a->race == Race::white || a->race == Race::black)) ids.push_back(id);
        }
        sentiment_pop = Cohort::from_ids("notes_population_bw", std::move(ids));
        if (sentiment_pop.size() >= 2)
            std::tie(sent_white, sent_black) = split_by_race(sentiment_pop, ds);
    }

    const bool any_sentiment = opts.strata_race || opts.strata_severity || opts.strata_trust;
    if (any_sentiment && !ds.notes.empty() && sentiment_pop.size() >= 2 &&
        !sent_black.empty() && !sent_white.empty()) {
        const SentimentLexicon& lexicon = opts.lexicon ? *opts.lexicon : default_lexicon();
        const auto sentiment_scores = score_population(ds, sentiment_pop, lexicon);
        if (sentiment_out) *sentiment_out = sentiment_scores;
        if (opts.strata_race) {
            report.sentiment_sections.push_back(
                compare_sentiment(sentiment_scores, Stratification{"race", sent_black, sent_white},
                                  opts.mw_exact_threshold));
        }
        if (opts.strata_severity) {
            bool severity_covered = true;
            for (const auto& id : sentiment_pop.admission_ids) {
                if (!ds.find_severity(id)) {
                    severity_covered = false;
                    break;
                }
            }
            if (severity_covered) {
                report.sentiment_sections.push_back(compare_sentiment(
                    sentiment_scores,
                    severity_strata(ds, sentiment_pop, sent_black.size(), sent_white.size()),
                    opts.mw_exact_threshold));
            }
        }
        if (opts.strata_trust) {
            std::vector<MistrustScore> pop_scores;
            for (const auto& id : sentiment_pop.admission_ids) {
                auto it = score_by_id.find(id);
                if (it == score_by_id.end())
                    throw InvalidArgument("run_analysis: no mistrust score for '" + id + "'");
                pop_scores.push_back({id, it->second});
            }
            report.sentiment_sections.push_back(
                compare_sentiment(sentiment_scores, stratify_by_score(pop_scores, sent_black.size()),
                                  opts.mw_exact_threshold));
        }
    }

    // --- correlation matrix over the EOL population (when severity covers it) ---
    {
        bool covered = true;
        for (const auto& id : eol.admission_ids) {
            if (!ds.find_severity(id) || !score_by_id.count(id)) {
                covered = false;
                break;
            }
        }
        if (covered) report.correlations = correlation_report(ds, eol, score_by_id);
    }

    if (model) {
        const auto top = top_features(*model, opts.top_k);
        WeightReport wr;
        for (const auto& [name, weight] : top.positive) wr.positive.push_back({name, weight});
        for (const auto& [name, weight] : top.negative) wr.negative.push_back({name, weight});
        report.weight_report = wr;
    }
    return report;
}

}  // namespace mistrust
