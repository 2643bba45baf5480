#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mistrust/treatments.hpp"

using namespace mistrust;

namespace {

TEST(MergeSpans, GapWithinThresholdMerges) {
    auto merged = merge_spans({{0, 100}, {500, 600}});  // gap 400 <= 600
    EXPECT_EQ(merged, (std::vector<Span>{{0, 600}}));
    EXPECT_EQ(total_duration(merged), 600);
}

TEST(MergeSpans, SingleSpanUnchanged) {
    auto merged = merge_spans({{0, 120}});
    EXPECT_EQ(merged, (std::vector<Span>{{0, 120}}));
}

TEST(MergeSpans, GapAboveThresholdKeptApart) {
    auto merged = merge_spans({{0, 60}, {700, 760}});  // gap 640 > 600
    EXPECT_EQ(merged, (std::vector<Span>{{0, 60}, {700, 760}}));
    EXPECT_EQ(total_duration(merged), 120);
}

TEST(MergeSpans, BoundaryGapExactly600Merges) {
    auto merged = merge_spans({{0, 60}, {660, 700}});  // gap exactly 600
    EXPECT_EQ(merged, (std::vector<Span>{{0, 700}}));
    auto apart = merge_spans({{0, 60}, {661, 700}});  // gap 601
    EXPECT_EQ(apart.size(), 2u);
}

TEST(MergeSpans, OverlappingInputsLegal) {
    auto merged = merge_spans({{0, 500}, {100, 300}, {400, 900}});
    EXPECT_EQ(merged, (std::vector<Span>{{0, 900}}));
}

TEST(MergeSpans, NegativeLengthSpanThrows) {
    EXPECT_THROW(merge_spans({{100, 50}}), InvalidArgument);
}

TEST(MergeSpans, EmptyInput) {
    EXPECT_TRUE(merge_spans({}).empty());
    EXPECT_EQ(total_duration({}), 0);
}

TEST(MergeSpans, IdempotentAndOrderInsensitive) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> start_dist(0, 5000);
    std::uniform_int_distribution<std::int64_t> len_dist(0, 800);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Span> spans;
        const int n = static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            const std::int64_t s = start_dist(rng);
            spans.push_back({s, s + len_dist(rng)});
        }
        auto merged = merge_spans(spans);
        EXPECT_EQ(merge_spans(merged), merged);

        auto shuffled = spans;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_EQ(merge_spans(shuffled), merged);

        // separation invariant and duration lower bound
        std::int64_t max_raw = 0;
        for (const auto& s : spans) max_raw = std::max(max_raw, s.end - s.start);
        for (std::size_t i = 1; i < merged.size(); ++i) {
            EXPECT_GT(merged[i].start - merged[i - 1].end, 600);
        }
        EXPECT_GE(total_duration(merged), max_raw);
    }
}

TEST(Durations, UntreatedAdmissionsExcluded) {
    EhrDataset ds;
    ds.admissions = {
        {"a1", "p", 0, 10000, Race::white, true, DischargeLocation::none},
        {"a2", "p", 0, 10000, Race::white, true, DischargeLocation::none},
    };
    ds.treatment_spans = {{"a1", Treatment::ventilation, 0, 600}};
    ds.finalize();
    Cohort c = Cohort::from_ids("c", {"a1", "a2"});
    auto durations = durations_for_cohort(ds, c, Treatment::ventilation);
    ASSERT_EQ(durations.size(), 1u);
    EXPECT_EQ(durations.at("a1"), 600);
}

TEST(Durations, PipelineOfMergeAndSum) {
    EhrDataset ds;
    ds.admissions = {{"a1", "p", 0, 10000, Race::white, true, DischargeLocation::none}};
    ds.treatment_spans = {
        {"a1", Treatment::ventilation, 0, 100},
        {"a1", Treatment::ventilation, 500, 600},
    };
    ds.finalize();
    Cohort c = Cohort::from_ids("c", {"a1"});
    auto durations = durations_for_cohort(ds, c, Treatment::ventilation);
    EXPECT_EQ(durations.at("a1"), 600);
}

TEST(Durations, TreatmentsDoNotCrossContaminate) {
    EhrDataset ds;
    ds.admissions = {{"a1", "p", 0, 10000, Race::white, true, DischargeLocation::none}};
    ds.treatment_spans = {
        {"a1", Treatment::ventilation, 0, 100},
        {"a1", Treatment::vasopressor, 0, 999},
    };
    ds.finalize();
    Cohort c = Cohort::from_ids("c", {"a1"});
    EXPECT_EQ(durations_for_cohort(ds, c, Treatment::ventilation).at("a1"), 100);
    EXPECT_EQ(durations_for_cohort(ds, c, Treatment::vasopressor).at("a1"), 999);
}

TEST(Durations, ExcludeGapsPolicyCountsUnionOnly) {
    EhrDataset ds;
    ds.admissions = {{"a1", "p", 0, 10000, Race::white, true, DischargeLocation::none}};
    ds.treatment_spans = {
        {"a1", Treatment::ventilation, 0, 100},
        {"a1", Treatment::ventilation, 500, 600},
        {"a1", Treatment::ventilation, 550, 650},  // overlaps previous span
    };
    ds.finalize();
    Cohort c = Cohort::from_ids("c", {"a1"});
    DurationOptions opts;
    opts.policy = GapPolicy::exclude_gaps;
    EXPECT_EQ(durations_for_cohort(ds, c, Treatment::ventilation, opts).at("a1"), 250);
    EXPECT_EQ(durations_for_cohort(ds, c, Treatment::ventilation).at("a1"), 650);
}

}  // namespace
