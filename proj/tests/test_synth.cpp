#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mistrust/noncompliance.hpp"
#include "mistrust/sentiment.hpp"
#include "mistrust/synth.hpp"

using namespace mistrust;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class SynthTempDir {
public:
    SynthTempDir() {
        dir_ = fs::temp_directory_path() /
               ("mistrust_synth_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::create_directories(dir_);
    }
    ~SynthTempDir() { fs::remove_all(dir_); }
    const fs::path& path() const { return dir_; }

private:
    fs::path dir_;
    static inline int counter_ = 0;
};

TEST(Synth, SameSeedByteIdenticalFiles) {
    SynthConfig config;
    config.n_admissions = 120;
    config.seed = 42;
    auto r1 = generate(config);
    auto r2 = generate(config);
    EXPECT_EQ(r1.dataset, r2.dataset);
    EXPECT_EQ(r1.truth.rows, r2.truth.rows);

    SynthTempDir d1, d2;
    write_dataset(r1.dataset, d1.path());
    write_dataset(r2.dataset, d2.path());
    for (const char* name :
         {"admissions.csv", "chartevents.csv", "notes.csv", "durations.csv", "severity.csv"}) {
        EXPECT_EQ(slurp(d1.path() / name), slurp(d2.path() / name)) << name;
    }
}

TEST(Synth, DifferentSeedsDiffer) {
    SynthConfig config;
    config.n_admissions = 50;
    config.seed = 1;
    auto r1 = generate(config);
    config.seed = 2;
    auto r2 = generate(config);
    EXPECT_NE(r1.dataset, r2.dataset);
}

TEST(Synth, RoundTripThroughLoaderIsCleanAndEqual) {
    SynthConfig config;
    config.n_admissions = 150;
    config.seed = 7;
    auto result = generate(config);

    SynthTempDir dir;
    write_dataset(result.dataset, dir.path());
    LoadOptions strict;
    strict.strict = true;
    auto loaded = load_dataset(dir.path(), strict);
    EXPECT_TRUE(loaded.issues.empty());
    EXPECT_EQ(loaded.dataset, result.dataset);
}

TEST(Synth, InvalidConfigRejected) {
    SynthConfig config;
    config.n_admissions = 1;
    EXPECT_THROW(generate(config), InvalidArgument);
    config = SynthConfig{};
    config.disparity_multiplier = 0.5;
    EXPECT_THROW(generate(config), InvalidArgument);
    config = SynthConfig{};
    config.black_fraction = 1.5;
    EXPECT_THROW(generate(config), InvalidArgument);
    config = SynthConfig{};
    config.death_prob = 0.9;
    config.hospice_prob = 0.3;
    EXPECT_THROW(generate(config), InvalidArgument);
}

TEST(Synth, ZeroSlopeNoncomplianceRateMatchesIntercept) {
    SynthConfig config;
    config.n_admissions = 4000;
    config.seed = 99;
    config.noncompliance_slope = 0.0;
    auto result = generate(config);
    std::size_t positives = 0;
    for (const auto& [id, row] : result.truth.rows) positives += row.noncompliant ? 1 : 0;
    const double p = sigmoid(config.noncompliance_intercept);
    const double n = static_cast<double>(config.n_admissions);
    const double sd = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(static_cast<double>(positives) / n, p, 3 * sd);
}

TEST(Synth, FeatureFrequenciesMatchLinkAveragedOverLatents) {
    SynthConfig config;
    config.n_admissions = 5000;
    config.seed = 1234;
    auto result = generate(config);
    const auto slopes = effective_feature_slopes(config);

    // expected rate: integral of sigmoid(s x) over the latent mixture density
    auto expected_rate = [&](double slope) {
        const double lo = -9.0, hi = 9.0 + config.latent_race_shift;
        const int steps = 9000;
        const double h = (hi - lo) / steps;
        auto density = [&](double x) {
            auto phi = [](double z) {
                return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
            };
            return (1.0 - config.black_fraction) * phi(x) +
                   config.black_fraction * phi(x - config.latent_race_shift);
        };
        double acc = 0;
        for (int i = 0; i <= steps; ++i) {
            const double x = lo + i * h;
            const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += w * sigmoid(slope * x) * density(x);
        }
        return acc * h / 3.0;
    };

    for (std::size_t j = 0; j < config.n_features; ++j) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "indicator %02zu", j);
        std::size_t count = 0;
        for (const auto& ev : result.dataset.chart_events) {
            if (ev.item_label == buf) ++count;
        }
        const double p = expected_rate(slopes[j]);
        const double n = static_cast<double>(config.n_admissions);
        const double sd = std::sqrt(p * (1 - p) / n);
        EXPECT_NEAR(static_cast<double>(count) / n, p, 3 * sd) << "feature " << j;
    }
}

TEST(Synth, HighLatentFlagIsAThresholdRule) {
    SynthConfig config;
    config.n_admissions = 500;
    config.seed = 5;
    auto result = generate(config);
    double max_low = -1e9, min_high = 1e9;
    for (const auto& [id, row] : result.truth.rows) {
        if (row.high_latent) min_high = std::min(min_high, row.latent);
        else max_low = std::max(max_low, row.latent);
    }
    EXPECT_GT(min_high, max_low);
}

TEST(Synth, SentimentWordsTrackLatent) {
    SynthConfig config;
    config.n_admissions = 600;
    config.seed = 8;
    auto result = generate(config);
    const auto& lex = default_lexicon();
    std::vector<double> low_latent_scores, high_latent_scores;
    for (const auto& adm : result.dataset.admissions) {
        const auto& row = result.truth.rows.at(adm.admission_id);
        const double s = score_stay(result.dataset.notes_for(adm.admission_id), lex);
        (row.latent > 0 ? high_latent_scores : low_latent_scores).push_back(s);
    }
    ASSERT_GE(low_latent_scores.size(), 50u);
    ASSERT_GE(high_latent_scores.size(), 50u);
    EXPECT_GT(median(low_latent_scores), median(high_latent_scores));
}

TEST(Synth, NoncomplianceSentenceDetectable) {
    SynthConfig config;
    config.n_admissions = 300;
    config.seed = 15;
    auto result = generate(config);
    Cohort everyone = Cohort::from_ids("all", [&] {
        std::vector<std::string> ids;
        for (const auto& a : result.dataset.admissions) ids.push_back(a.admission_id);
        return ids;
    }());
    auto labels = label_noncompliance(result.dataset, everyone);
    for (const auto& [id, row] : result.truth.rows) {
        EXPECT_EQ(labels.labels.at(id), row.noncompliant) << id;
    }
}

TEST(SynthConfigFile, ParsesOverridesAndRejectsUnknownKeys) {
    std::istringstream in(
        "# test config\n"
        "n_admissions = 500\n"
        "seed = 77\n"
        "disparity_multiplier = 1.5\n"
        "feature_slopes = 2.0,-2.0,1.0\n"
        "n_features = 3\n");
    auto config = parse_synth_config(in);
    EXPECT_EQ(config.n_admissions, 500u);
    EXPECT_EQ(config.seed, 77u);
    EXPECT_DOUBLE_EQ(config.disparity_multiplier, 1.5);
    EXPECT_EQ(config.feature_slopes, (std::vector<double>{2.0, -2.0, 1.0}));

    std::istringstream bad("not_a_key = 1\n");
    EXPECT_THROW(parse_synth_config(bad), ValidationError);

    std::istringstream mismatched("n_features = 4\nfeature_slopes = 1.0\n");
    EXPECT_THROW(parse_synth_config(mismatched), InvalidArgument);
}

TEST(GroundTruthCsv, Export) {
    GroundTruth truth;
    truth.rows = {{"a", {0.5, true, false}}, {"b", {-1.25, false, true}}};
    std::ostringstream out;
    write_ground_truth_csv(truth, out);
    EXPECT_EQ(out.str(),
              "admission_id,latent,noncompliant,high_latent\n"
              "a,0.5,1,0\n"
              "b,-1.25,0,1\n");
}

}  // namespace
