// Acceptance suite: one test per release criterion, each printing its own
// pass/fail line. Every tolerance is pinned in code.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "mistrust/mistrust.hpp"
#include "support/mw_oracle.hpp"
#include "support/run_cli.hpp"

using namespace mistrust;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// criterion: Mann-Whitney exactness
// ---------------------------------------------------------------------------

TEST(Acceptance, MannWhitneyExactness) {
    const auto start = Clock::now();
    std::mt19937_64 rng(20260808);
    std::uniform_int_distribution<int> size_dist(1, 6);
    std::uniform_int_distribution<int> value_dist(0, 4);  // forces ties

    for (int instance = 0; instance < 200; ++instance) {
        std::vector<double> a(size_dist(rng)), b(size_dist(rng));
        for (auto& v : a) v = value_dist(rng);
        for (auto& v : b) v = value_dist(rng);
        const auto res = mann_whitney(a, b);
        ASSERT_EQ(res.method, MannWhitneyResult::Method::exact);
        ASSERT_NEAR(res.p_two_sided, oracle::mann_whitney_p(a, b), 1e-12)
            << "instance " << instance;
    }

    std::uniform_int_distribution<int> wide_dist(0, 15);
    for (int instance = 0; instance < 50; ++instance) {
        std::vector<double> a(10), b(10);
        for (auto& v : a) v = wide_dist(rng);
        for (auto& v : b) v = wide_dist(rng);
        const auto exact = mann_whitney(a, b, 20);
        const auto approx = mann_whitney(a, b, 0);
        ASSERT_EQ(exact.method, MannWhitneyResult::Method::exact);
        ASSERT_EQ(approx.method, MannWhitneyResult::Method::normal_approx);
        ASSERT_NEAR(approx.p_two_sided, exact.p_two_sided, 0.02) << "instance " << instance;
    }

    EXPECT_LT(seconds_since(start), 10.0);
}

// ---------------------------------------------------------------------------
// criterion: solver correctness
// ---------------------------------------------------------------------------

FeatureMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    FeatureMatrix m;
    m.n_features = d;
    std::bernoulli_distribution cell(0.35);
    for (std::size_t i = 0; i < n; ++i) {
        m.row_ids.push_back("r" + std::to_string(i));
        std::vector<std::uint32_t> row;
        for (std::uint32_t j = 0; j < d; ++j) {
            if (cell(rng)) row.push_back(j);
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

std::vector<double> random_labels(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> y(n);
    std::bernoulli_distribution lab(0.4);
    for (auto& v : y) v = lab(rng) ? 1.0 : 0.0;
    y[0] = 1.0;
    y[n - 1] = 0.0;
    return y;
}

FeatureVocabulary numbered_vocab(std::size_t d) {
    FeatureVocabulary v;
    for (std::size_t j = 0; j < d; ++j) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "f%03zu", j);
        v.names.push_back(buf);
    }
    return v;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi,
                      double tol = 1e-10) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

TEST(Acceptance, SolverGradientCheck) {
    std::mt19937_64 rng(777);
    std::normal_distribution<double> gauss(0, 1);
    std::uniform_int_distribution<std::size_t> n_dist(5, 50), d_dist(1, 10);
    const double h = 1e-5;
    for (int point = 0; point < 20; ++point) {
        const auto X = random_matrix(rng, n_dist(rng), d_dist(rng));
        const auto y = random_labels(rng, X.n_rows());
        std::vector<double> w(X.n_features);
        for (auto& v : w) v = gauss(rng);
        const double b = gauss(rng);

        const auto lg = smooth_loss_grad(w, b, X, y);
        for (std::size_t j = 0; j < w.size(); ++j) {
            auto wp = w, wm = w;
            wp[j] += h;
            wm[j] -= h;
            const double fd =
                (smooth_loss_grad(wp, b, X, y).loss - smooth_loss_grad(wm, b, X, y).loss) /
                (2 * h);
            const double denom = std::max({1e-8, std::abs(fd), std::abs(lg.grad_w[j])});
            ASSERT_LE(std::abs(fd - lg.grad_w[j]) / denom, 1e-6)
                << "point " << point << " weight " << j;
        }
        const double fdb =
            (smooth_loss_grad(w, b + h, X, y).loss - smooth_loss_grad(w, b - h, X, y).loss) /
            (2 * h);
        const double denom = std::max({1e-8, std::abs(fdb), std::abs(lg.grad_b)});
        ASSERT_LE(std::abs(fdb - lg.grad_b) / denom, 1e-6) << "point " << point;
    }
}

TEST(Acceptance, SolverMonotoneObjective) {
    std::mt19937_64 rng(778);
    std::uniform_int_distribution<std::size_t> n_dist(6, 60), d_dist(1, 10);
    for (int problem = 0; problem < 50; ++problem) {
        const auto X = random_matrix(rng, n_dist(rng), d_dist(rng));
        const auto y = random_labels(rng, X.n_rows());
        std::vector<double> trace;
        FitOptions opts;
        opts.C = 0.25 * (1 + problem % 8);
        opts.max_iter = 250;
        opts.objective_trace = &trace;
        fit(X, y, numbered_vocab(X.n_features), opts);
        ASSERT_GE(trace.size(), 2u);
        for (std::size_t i = 1; i < trace.size(); ++i) {
            ASSERT_LE(trace[i], trace[i - 1]) << "problem " << problem << " iteration " << i;
        }
    }
}

TEST(Acceptance, SolverLambdaMaxCertificate) {
    std::mt19937_64 rng(779);
    std::uniform_int_distribution<std::size_t> n_dist(8, 50), d_dist(1, 10);
    int certified = 0;
    for (int problem = 0; problem < 30; ++problem) {
        const auto X = random_matrix(rng, n_dist(rng), d_dist(rng));
        const auto y = random_labels(rng, X.n_rows());
        const double lam = lambda_max(X, y);
        if (lam <= 1e-12) continue;
        for (double factor : {1.0, 1.5}) {
            FitOptions opts;
            opts.C = 1.0 / (lam * factor);
            if (1.0 / opts.C < lam) continue;  // reciprocal rounding at factor 1
            const auto model = fit(X, y, numbered_vocab(X.n_features), opts);
            for (double w : model.weights) ASSERT_EQ(w, 0.0) << "problem " << problem;
            ++certified;
        }
    }
    ASSERT_GE(certified, 20);
}

TEST(Acceptance, SolverMatchesGoldenSectionOn1D) {
    // one binary feature; sweep label agreement and regularization strength
    for (double C : {0.5, 2.0, 10.0}) {
        for (int positives_on : {4, 3}) {
            std::vector<std::vector<std::uint32_t>> rows;
            std::vector<double> y;
            for (int i = 0; i < 4; ++i) {
                rows.push_back({0});
                y.push_back(i < positives_on ? 1.0 : 0.0);
            }
            for (int i = 0; i < 4; ++i) {
                rows.push_back({});
                y.push_back(0.0);
            }
            y[4] = 1.0;  // keep both classes on both feature values
            FeatureMatrix X;
            X.n_features = 1;
            X.rows = rows;
            for (std::size_t i = 0; i < rows.size(); ++i)
                X.row_ids.push_back("r" + std::to_string(i));

            auto profiled = [&](double w) {
                auto inner = [&](double b) {
                    std::vector<double> wv{w};
                    return objective(wv, b, X, y, C);
                };
                return inner(golden_section(inner, -30.0, 30.0));
            };
            const double w_star = golden_section(profiled, -30.0, 30.0, 1e-9);

            FitOptions opts;
            opts.C = C;
            opts.tol = 1e-12;
            opts.max_iter = 100000;
            const auto model = fit(X, y, numbered_vocab(1), opts);
            ASSERT_NEAR(model.weights[0], w_star, 1e-4) << "C=" << C;
        }
    }
}

// ---------------------------------------------------------------------------
// criterion: span merging
// ---------------------------------------------------------------------------

TEST(Acceptance, SpanMergingProperties) {
    // hand-traced examples reproduced exactly
    EXPECT_EQ(merge_spans({{0, 100}, {500, 600}}), (std::vector<Span>{{0, 600}}));
    EXPECT_EQ(total_duration(merge_spans({{0, 100}, {500, 600}})), 600);
    EXPECT_EQ(merge_spans({{0, 120}}), (std::vector<Span>{{0, 120}}));
    EXPECT_EQ(merge_spans({{0, 60}, {700, 760}}), (std::vector<Span>{{0, 60}, {700, 760}}));
    EXPECT_EQ(total_duration(merge_spans({{0, 60}, {700, 760}})), 120);
    EXPECT_EQ(total_duration({}), 0);

    // gap-threshold boundary at exactly 600 minutes
    EXPECT_EQ(merge_spans({{0, 10}, {610, 620}}).size(), 1u);
    EXPECT_EQ(merge_spans({{0, 10}, {611, 620}}).size(), 2u);

    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<std::int64_t> start_dist(0, 8000);
    std::uniform_int_distribution<std::int64_t> len_dist(0, 900);
    std::uniform_int_distribution<int> count_dist(0, 9);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Span> spans;
        const int n = count_dist(rng);
        for (int i = 0; i < n; ++i) {
            const std::int64_t s = start_dist(rng);
            spans.push_back({s, s + len_dist(rng)});
        }
        const auto merged = merge_spans(spans);

        // idempotence
        ASSERT_EQ(merge_spans(merged), merged) << "trial " << trial;

        // permutation invariance
        auto shuffled = spans;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        ASSERT_EQ(merge_spans(shuffled), merged) << "trial " << trial;

        // separation and coverage invariants
        std::int64_t max_raw = 0;
        for (const auto& s : spans) max_raw = std::max(max_raw, s.end - s.start);
        for (std::size_t i = 1; i < merged.size(); ++i) {
            ASSERT_GT(merged[i].start - merged[i - 1].end, 600) << "trial " << trial;
        }
        ASSERT_GE(total_duration(merged), max_raw) << "trial " << trial;
    }
}

// ---------------------------------------------------------------------------
// in-process pipeline used by the end-to-end criteria
// ---------------------------------------------------------------------------

struct PipelineRun {
    SynthResult synth;
    MistrustModel model;
    std::vector<MistrustScore> scores;
};

PipelineRun run_pipeline(const SynthConfig& config) {
    PipelineRun run;
    run.synth = generate(config);
    const EhrDataset& ds = run.synth.dataset;

    const Cohort population = build_notes_population(ds);
    const FeatureVocabulary vocab = build_vocabulary(ds);
    const FeatureMatrix X = encode(ds, population, vocab);
    const LabelVector labels = label_noncompliance(ds, population);

    FitOptions fit_opts;
    fit_opts.tol = 1e-6;
    fit_opts.max_iter = 2000;
    run.model = fit(X, labels, vocab, fit_opts);

    std::vector<std::string> all_ids;
    for (const auto& a : ds.admissions) all_ids.push_back(a.admission_id);
    const Cohort everyone = Cohort::from_ids("all", std::move(all_ids));
    run.scores = score_matrix(run.model, encode(ds, everyone, vocab));
    return run;
}

const TreatmentDisparity& section_of(const DisparityReport& report, const std::string& strat,
                                     const std::string& treatment) {
    for (const auto& s : report.treatment_sections) {
        if (s.stratification == strat && s.treatment == treatment) return s;
    }
    throw std::logic_error("missing section " + strat + "/" + treatment);
}

// ---------------------------------------------------------------------------
// criterion: end-to-end disparity recovery + null calibration
// ---------------------------------------------------------------------------

TEST(Acceptance, DisparityRecoveryEndToEnd) {
    const auto start = Clock::now();

    SynthConfig config;
    config.n_admissions = 2000;
    config.disparity_multiplier = 2.0;
    config.seed = 20260808;
    const auto run = run_pipeline(config);

    AnalysisOptions opts;
    opts.strata_severity = false;
    opts.treatments = {Treatment::ventilation};
    const auto report = run_analysis(run.synth.dataset, run.scores, nullptr, opts);

    const auto& trust = section_of(report, "trust", "ventilation");
    const double ratio = trust.median_a / trust.median_b;
    EXPECT_GE(ratio, 1.6) << "trust-stratified median ratio";
    EXPECT_LE(ratio, 2.4) << "trust-stratified median ratio";
    EXPECT_LT(trust.mann_whitney.p_two_sided, 0.01);
    std::cout << "  measured: median ratio " << ratio << ", p "
              << trust.mann_whitney.p_two_sided << "\n";

    // null calibration: no disparity and no race shift -> the race test
    // rejects at alpha = 0.01 in at most 5 of 100 seeded runs
    int rejections = 0;
    for (int seed = 0; seed < 100; ++seed) {
        SynthConfig null_config;
        null_config.n_admissions = 2000;
        null_config.disparity_multiplier = 1.0;
        null_config.latent_race_shift = 0.0;
        null_config.seed = 50000 + static_cast<std::uint64_t>(seed);
        const auto data = generate(null_config);
        const Cohort eol = build_eol_cohort(data.dataset);
        auto [white, black] = split_by_race(eol, data.dataset);
        const auto section = treatment_disparity(
            data.dataset, Stratification{"race", black, white}, Treatment::ventilation);
        if (section.mann_whitney.p_two_sided < 0.01) ++rejections;
    }
    EXPECT_LE(rejections, 5) << "null-calibration rejections out of 100";
    std::cout << "  measured: " << rejections << "/100 null rejections at alpha=0.01\n";

    EXPECT_LT(seconds_since(start), 60.0);
}

// ---------------------------------------------------------------------------
// shared 100-seed study for the qualitative and severity criteria
// ---------------------------------------------------------------------------

class HundredSeedStudy : public ::testing::Test {
protected:
    struct SeedOutcome {
        double trust_gap = 0;
        double race_gap = 0;
        double corr_mistrust_oasis = 0;
        double corr_oasis_sapsii = 0;
    };

    static void SetUpTestSuite() {
        outcomes_ = new std::vector<SeedOutcome>();
        for (int seed = 0; seed < 100; ++seed) {
            SynthConfig config;  // latent drives durations; race only shifts the latent
            config.n_admissions = 2000;
            config.seed = 90000 + static_cast<std::uint64_t>(seed);
            const auto run = run_pipeline(config);

            AnalysisOptions opts;
            opts.strata_severity = false;
            opts.treatments = {Treatment::ventilation};
            const auto report = run_analysis(run.synth.dataset, run.scores, nullptr, opts);

            SeedOutcome outcome;
            outcome.trust_gap = std::abs(section_of(report, "trust", "ventilation").median_gap);
            outcome.race_gap = std::abs(section_of(report, "race", "ventilation").median_gap);
            ASSERT_TRUE(report.correlations.has_value());
            outcome.corr_mistrust_oasis = report.correlations->values[0][2];
            outcome.corr_oasis_sapsii = report.correlations->values[0][1];
            outcomes_->push_back(outcome);
        }
    }
    static void TearDownTestSuite() {
        delete outcomes_;
        outcomes_ = nullptr;
    }
    static std::vector<SeedOutcome>* outcomes_;
};

std::vector<HundredSeedStudy::SeedOutcome>* HundredSeedStudy::outcomes_ = nullptr;

TEST_F(HundredSeedStudy, QualitativeTrustGapDominatesRaceGap) {
    int trust_wins = 0;
    for (const auto& o : *outcomes_) {
        if (o.trust_gap >= o.race_gap) ++trust_wins;
    }
    EXPECT_GE(trust_wins, 95) << "seeds where the trust-stratified gap >= the race gap";
    std::cout << "  measured: trust gap dominates race gap in " << trust_wins << "/100 seeds\n";
}

TEST_F(HundredSeedStudy, SeverityIndependenceRecovered) {
    int weak_mistrust_corr = 0;
    int severity_corr_recovered = 0;
    for (const auto& o : *outcomes_) {
        if (std::abs(o.corr_mistrust_oasis) <= 0.1) ++weak_mistrust_corr;
        if (std::abs(o.corr_oasis_sapsii - 0.7) <= 0.05) ++severity_corr_recovered;
    }
    EXPECT_GE(weak_mistrust_corr, 95) << "seeds with |corr(mistrust, oasis)| <= 0.1";
    EXPECT_GE(severity_corr_recovered, 95) << "seeds with corr(oasis, sapsii) within 0.7 +/- 0.05";
    std::cout << "  measured: |corr(mistrust,oasis)| <= 0.1 in " << weak_mistrust_corr
              << "/100 seeds; corr(oasis,sapsii) in band in " << severity_corr_recovered
              << "/100 seeds\n";
}

// ---------------------------------------------------------------------------
// criterion: sentiment normalization and placeholder stripping
// ---------------------------------------------------------------------------

TEST(Acceptance, SentimentNormalization) {
    SynthConfig config;
    config.n_admissions = 2000;
    config.seed = 606;
    const auto data = generate(config);
    const Cohort eol = build_eol_cohort(data.dataset);
    const auto scores = score_population(data.dataset, eol, default_lexicon());

    double mean_normalized = 0;
    for (const auto& s : scores) mean_normalized += s.normalized;
    mean_normalized /= static_cast<double>(scores.size());
    double variance = 0;
    for (const auto& s : scores) {
        variance += (s.normalized - mean_normalized) * (s.normalized - mean_normalized);
    }
    variance /= static_cast<double>(scores.size());
    EXPECT_LE(std::abs(mean_normalized), 1e-12);
    EXPECT_NEAR(variance, 1.0, 1e-9);

    // placeholder-stripping corpus: every lexicon-matchable word sits inside
    // "[** ... **]" content, so nothing may score
    const std::vector<std::string> corpus{
        "Date:[**5-1-18**] routine follow-up",
        "seen at [**Hospital1 good care center**] today",
        "[**agitated**][**combative**] tokens enclosed",
        "transfer from [**Location comfortable ward**] completed",
        "note ends mid placeholder [**terrible suffering",
        "adjacent [**good**]:[**bad**] markers",
    };
    for (const auto& text : corpus) {
        std::vector<NoteRecord> notes{{"x", 0, "nursing", text}};
        EXPECT_EQ(score_stay(notes, default_lexicon()), 0.0) << text;
    }
}

// ---------------------------------------------------------------------------
// criterion: pipeline determinism
// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(Acceptance, PipelineDeterminism) {
    const fs::path base = fs::temp_directory_path() /
                          ("mistrust_accept_" + std::to_string(::getpid()));
    fs::remove_all(base);
    fs::create_directories(base);

    auto run_once = [&](const std::string& tag) {
        const std::string root = (base / tag).string();
        EXPECT_EQ(cli::run("synth --out " + root + "/data --n 600 --seed 1234").exit_code, 0);
        EXPECT_EQ(cli::run("train --data " + root + "/data --out " + root + "/model").exit_code,
                  0);
        EXPECT_EQ(cli::run("score --data " + root + "/data --model " + root +
                           "/model/model.csv --out " + root + "/scores")
                      .exit_code,
                  0);
        EXPECT_EQ(cli::run("analyze --data " + root + "/data --scores " + root +
                           "/scores/scores.csv --model " + root + "/model/model.csv --out " +
                           root + "/report")
                      .exit_code,
                  0);
        return slurp(base / tag / "report" / "report.json");
    };

    // identical manifest inputs: re-run analyze over the very same files
    const std::string first = run_once("one");
    ASSERT_FALSE(first.empty());
    const std::string root = (base / "one").string();
    EXPECT_EQ(cli::run("analyze --data " + root + "/data --scores " + root +
                       "/scores/scores.csv --model " + root + "/model/model.csv --out " + root +
                       "/report_rerun")
                  .exit_code,
              0);
    EXPECT_EQ(first, slurp(base / "one/report_rerun/report.json"))
        << "report.json must be byte-identical across reruns of the same manifest";
    EXPECT_EQ(slurp(base / "one/report/manifest.json"),
              slurp(base / "one/report_rerun/manifest.json"));

    // an independent pipeline from the same seed reproduces the same report
    const std::string second = run_once("two");
    EXPECT_EQ(first, second);
    EXPECT_EQ(slurp(base / "one/model/model.csv"), slurp(base / "two/model/model.csv"));

    fs::remove_all(base);
}

}  // namespace
