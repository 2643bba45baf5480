// Command-line entry point for the mistrust-metric pipeline:
//   synth -> cohort -> train -> score -> analyze
//
// Exit codes: 0 success, 1 validation/data error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mistrust/mistrust.hpp"

namespace fs = std::filesystem;
using namespace mistrust;

namespace {

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

EhrDataset load_or_die(const std::string& data_dir, bool strict) {
    LoadOptions opts;
    opts.strict = strict;
    auto result = load_dataset(data_dir, opts);
    for (const auto& issue : result.issues) {
        std::cerr << issue.file << ":" << issue.line << ": [" << to_string(issue.kind)
                  << "] rejected row: " << issue.message << "\n";
    }
    if (!result.issues.empty()) {
        std::cerr << result.issues.size() << " row(s) rejected; rerun with --strict to fail hard\n";
    }
    return std::move(result.dataset);
}

Cohort load_cohort_file(const std::string& path, const std::string& name) {
    auto in = open_input(path);
    return read_cohort_csv(in, name, fs::path(path).filename().string());
}

// --- synth ---

struct SynthArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_admissions;
};

int run_synth(const SynthArgs& args) {
    SynthConfig config;
    if (!args.config_path.empty()) {
        auto in = open_input(args.config_path);
        config = parse_synth_config(in, args.config_path);
    }
    if (args.seed) config.seed = *args.seed;
    if (args.n_admissions) config.n_admissions = *args.n_admissions;
    validate_config(config);

    auto result = generate(config);
    fs::create_directories(args.out_dir);
    write_dataset(result.dataset, args.out_dir);
    {
        auto out = open_output(fs::path(args.out_dir) / "ground_truth.csv");
        write_ground_truth_csv(result.truth, out);
    }

    RunManifest manifest;
    manifest.command = "synth";
    if (!args.config_path.empty()) manifest.inputs.emplace_back("config", args.config_path);
    manifest.parameters = config_to_pairs(config);
    manifest.outputs = {"admissions.csv", "chartevents.csv", "notes.csv",
                        "durations.csv",  "severity.csv",    "ground_truth.csv"};
    write_manifest(manifest, fs::path(args.out_dir) / "manifest.json");

    std::cout << "wrote " << result.dataset.admissions.size() << " admissions to " << args.out_dir
              << "\n";
    return 0;
}

// --- cohort ---

struct CohortArgs {
    std::string data_dir;
    std::string out_dir;
    double min_stay_hours = 6.0;
    double notes_min_stay_hours = 12.0;
    bool no_snf = false;
    bool strict = false;
};

int run_cohort(const CohortArgs& args) {
    auto ds = load_or_die(args.data_dir, args.strict);

    EolCohortOptions eol_opts;
    eol_opts.min_stay_minutes = static_cast<std::int64_t>(args.min_stay_hours * 60.0);
    eol_opts.include_snf = !args.no_snf;
    const Cohort eol = build_eol_cohort(ds, eol_opts);
    const Cohort notes_pop = build_notes_population(
        ds, static_cast<std::int64_t>(args.notes_min_stay_hours * 60.0));
    auto [white, black] = split_by_race(eol, ds);

    fs::create_directories(args.out_dir);
    auto write = [&](const char* name, const Cohort& c) {
        auto out = open_output(fs::path(args.out_dir) / name);
        write_cohort_csv(c, out);
    };
    write("eol_cohort.csv", eol);
    write("notes_population.csv", notes_pop);
    write("eol_white.csv", white);
    write("eol_black.csv", black);

    const SummaryReport summary = dataset_summary(ds);
    json summary_json = to_json(summary);
    summary_json["eol_cohort_size"] = eol.size();
    summary_json["eol_white"] = white.size();
    summary_json["eol_black"] = black.size();
    summary_json["notes_population_size"] = notes_pop.size();
    write_text_file(fs::path(args.out_dir) / "summary.json", summary_json.dump(2) + "\n");

    RunManifest manifest;
    manifest.command = "cohort";
    manifest.inputs.emplace_back("data", args.data_dir);
    manifest.parameters = {{"min_stay_hours", format_double(args.min_stay_hours)},
                           {"notes_min_stay_hours", format_double(args.notes_min_stay_hours)},
                           {"include_snf", eol_opts.include_snf ? "1" : "0"},
                           {"strict", args.strict ? "1" : "0"}};
    manifest.outputs = {"eol_cohort.csv", "notes_population.csv", "eol_white.csv",
                        "eol_black.csv", "summary.json"};
    write_manifest(manifest, fs::path(args.out_dir) / "manifest.json");

    std::cout << "eol cohort: " << eol.size() << " (white " << white.size() << ", black "
              << black.size() << "); notes population: " << notes_pop.size() << "\n";
    return 0;
}

// --- train ---

struct TrainArgs {
    std::string data_dir;
    std::string out_dir;
    std::string cohort_path;
    std::string patterns_path;
    std::string whitelist_path;
    double C = 1.0;
    double tol = 1e-7;
    int max_iter = 5000;
    bool balance_classes = false;
    bool export_features = false;
    bool strict = false;
};

int run_train(const TrainArgs& args) {
    auto ds = load_or_die(args.data_dir, args.strict);

    Cohort population = args.cohort_path.empty()
                            ? build_notes_population(ds)
                            : load_cohort_file(args.cohort_path, "train_population");
    if (population.empty()) throw InvalidArgument("training population is empty");

    std::vector<std::string> patterns = default_noncompliance_patterns();
    if (!args.patterns_path.empty()) {
        auto in = open_input(args.patterns_path);
        patterns = read_patterns(in);
        if (patterns.empty()) throw InvalidArgument("patterns file contains no terms");
    }

    std::optional<std::set<std::string>> whitelist;
    if (!args.whitelist_path.empty()) {
        auto in = open_input(args.whitelist_path);
        whitelist = read_whitelist(in);
    }

    const FeatureVocabulary vocab = build_vocabulary(ds, whitelist);
    if (vocab.empty()) std::cerr << "warning: empty feature vocabulary\n";
    const FeatureMatrix X = encode(ds, population, vocab);
    const LabelVector labels = label_noncompliance(ds, population, patterns);

    FitOptions fit_opts;
    fit_opts.C = args.C;
    fit_opts.tol = args.tol;
    fit_opts.max_iter = args.max_iter;
    fit_opts.balance_classes = args.balance_classes;
    const MistrustModel model = fit(X, labels, vocab, fit_opts);
    if (!model.converged)
        std::cerr << "warning: solver did not converge within " << args.max_iter
                  << " iterations (final objective " << model.final_objective << ")\n";

    fs::create_directories(args.out_dir);
    {
        auto out = open_output(fs::path(args.out_dir) / "model.csv");
        write_model_csv(model, out);
    }
    {
        auto out = open_output(fs::path(args.out_dir) / "vocabulary.txt");
        write_vocabulary(vocab, out);
    }
    {
        auto out = open_output(fs::path(args.out_dir) / "labels.csv");
        write_labels_csv(labels, out);
    }
    if (args.export_features) {
        auto out = open_output(fs::path(args.out_dir) / "features.csv");
        write_matrix_csv(X, vocab, out);
    }

    RunManifest manifest;
    manifest.command = "train";
    manifest.inputs.emplace_back("data", args.data_dir);
    if (!args.cohort_path.empty()) manifest.inputs.emplace_back("cohort", args.cohort_path);
    if (!args.patterns_path.empty()) manifest.inputs.emplace_back("patterns", args.patterns_path);
    if (!args.whitelist_path.empty())
        manifest.inputs.emplace_back("whitelist", args.whitelist_path);
    manifest.parameters = {{"C", format_double(args.C)},
                           {"tol", format_double(args.tol)},
                           {"max_iter", std::to_string(args.max_iter)},
                           {"balance_classes", args.balance_classes ? "1" : "0"},
                           {"population_size", std::to_string(population.size())},
                           {"positive_labels", std::to_string(labels.positives())},
                           {"vocabulary_size", std::to_string(vocab.size())},
                           {"iterations", std::to_string(model.iterations)},
                           {"converged", model.converged ? "1" : "0"},
                           {"final_objective", format_double(model.final_objective)},
                           {"strict", args.strict ? "1" : "0"}};
    manifest.outputs = {"model.csv", "vocabulary.txt", "labels.csv"};
    if (args.export_features) manifest.outputs.push_back("features.csv");
    write_manifest(manifest, fs::path(args.out_dir) / "manifest.json");

    std::cout << "trained on " << population.size() << " admissions (" << labels.positives()
              << " noncompliant), " << vocab.size() << " features, "
              << (model.converged ? "converged" : "NOT converged") << " after " << model.iterations
              << " iterations\n";
    return 0;
}

// --- score ---

struct ScoreArgs {
    std::string data_dir;
    std::string model_path;
    std::string out_dir;
    std::string cohort_path;
    bool strict = false;
};

int run_score(const ScoreArgs& args) {
    auto ds = load_or_die(args.data_dir, args.strict);
    MistrustModel model;
    {
        auto in = open_input(args.model_path);
        model = read_model_csv(in, fs::path(args.model_path).filename().string());
    }
    FeatureVocabulary vocab;
    vocab.names = model.feature_names;

    Cohort population;
    if (args.cohort_path.empty()) {
        std::vector<std::string> ids;
        for (const auto& a : ds.admissions) ids.push_back(a.admission_id);
        population = Cohort::from_ids("all_admissions", std::move(ids));
    } else {
        population = load_cohort_file(args.cohort_path, "score_population");
    }

    const FeatureMatrix X = encode(ds, population, vocab);
    const auto scores = score_matrix(model, X);

    fs::create_directories(args.out_dir);
    {
        auto out = open_output(fs::path(args.out_dir) / "scores.csv");
        write_scores_csv(scores, out);
    }

    RunManifest manifest;
    manifest.command = "score";
    manifest.inputs.emplace_back("data", args.data_dir);
    manifest.inputs.emplace_back("model", args.model_path);
    if (!args.cohort_path.empty()) manifest.inputs.emplace_back("cohort", args.cohort_path);
    manifest.parameters = {{"population_size", std::to_string(population.size())},
                           {"strict", args.strict ? "1" : "0"}};
    manifest.outputs = {"scores.csv"};
    write_manifest(manifest, fs::path(args.out_dir) / "manifest.json");

    std::cout << "scored " << scores.size() << " admissions\n";
    return 0;
}

// --- analyze ---

struct AnalyzeArgs {
    std::string data_dir;
    std::string scores_path;
    std::string out_dir;
    std::string model_path;
    std::string lexicon_path;
    std::vector<std::string> strata{"race", "trust", "severity"};
    std::string treatment = "both";
    std::string sentiment_population = "eol";
    std::optional<std::size_t> k_low_trust;
    double min_stay_hours = 6.0;
    std::int64_t merge_gap_minutes = 600;
    std::size_t exact_test_cutoff = 20;
    bool exclude_gaps = false;
    bool no_snf = false;
    int top_k = 3;
    bool strict = false;
};

int run_analyze(const AnalyzeArgs& args) {
    auto ds = load_or_die(args.data_dir, args.strict);

    std::vector<MistrustScore> scores;
    {
        auto in = open_input(args.scores_path);
        scores = read_scores_csv(in, fs::path(args.scores_path).filename().string());
    }

    SentimentLexicon lexicon;
    if (!args.lexicon_path.empty()) {
        auto in = open_input(args.lexicon_path);
        lexicon = parse_lexicon_tsv(in, args.lexicon_path);
    }

    std::optional<MistrustModel> model;
    if (!args.model_path.empty()) {
        auto in = open_input(args.model_path);
        model = read_model_csv(in, fs::path(args.model_path).filename().string());
    }

    AnalysisOptions opts;
    opts.strata_race = opts.strata_trust = opts.strata_severity = false;
    for (const auto& s : args.strata) {
        if (s == "race") opts.strata_race = true;
        else if (s == "trust") opts.strata_trust = true;
        else if (s == "severity") opts.strata_severity = true;
        else throw InvalidArgument("unknown stratum '" + s + "'");
    }
    if (args.treatment == "ventilation") opts.treatments = {Treatment::ventilation};
    else if (args.treatment == "vasopressor") opts.treatments = {Treatment::vasopressor};
    else if (args.treatment == "both")
        opts.treatments = {Treatment::ventilation, Treatment::vasopressor};
    else throw InvalidArgument("unknown treatment '" + args.treatment + "'");
    opts.duration.merge_gap = args.merge_gap_minutes;
    opts.duration.policy = args.exclude_gaps ? GapPolicy::exclude_gaps : GapPolicy::count_gaps;
    opts.eol.min_stay_minutes = static_cast<std::int64_t>(args.min_stay_hours * 60.0);
    opts.eol.include_snf = !args.no_snf;
    opts.k_low_trust = args.k_low_trust;
    if (!args.lexicon_path.empty()) opts.lexicon = &lexicon;
    opts.sentiment_population = args.sentiment_population == "notes"
                                    ? SentimentPopulation::notes_population
                                    : SentimentPopulation::eol_cohort;
    opts.mw_exact_threshold = args.exact_test_cutoff;
    opts.top_k = static_cast<std::size_t>(args.top_k);

    std::vector<SentimentScore> sentiment_scores;
    const DisparityReport report =
        run_analysis(ds, scores, model ? &*model : nullptr, opts, &sentiment_scores);

    fs::create_directories(args.out_dir);
    RunManifest manifest;
    manifest.command = "analyze";
    write_report_json(report, fs::path(args.out_dir) / "report.json");
    manifest.outputs.push_back("report.json");

    // flat CSVs and figures per treatment section
    for (const auto& section : report.treatment_sections) {
        const std::string stem = section.stratification + "_" + section.treatment;
        {
            auto out = open_output(fs::path(args.out_dir) / ("ecdf_" + stem + "_a.csv"));
            write_ecdf_csv(section.ecdf_a, out);
            manifest.outputs.push_back("ecdf_" + stem + "_a.csv");
        }
        {
            auto out = open_output(fs::path(args.out_dir) / ("ecdf_" + stem + "_b.csv"));
            write_ecdf_csv(section.ecdf_b, out);
            manifest.outputs.push_back("ecdf_" + stem + "_b.csv");
        }
        char title[128];
        std::snprintf(title, sizeof title, "%s duration by %s (p=%.4g)",
                      section.treatment.c_str(), section.stratification.c_str(),
                      section.mann_whitney.p_two_sided);
        const std::string svg = render_ecdf_svg(
            title, section.group_a_name, section.ecdf_a, section.median_a, section.group_b_name,
            section.ecdf_b, section.median_b);
        write_text_file(fs::path(args.out_dir) / ("figure_" + stem + ".svg"), svg);
        manifest.outputs.push_back("figure_" + stem + ".svg");
    }

    // per-treatment duration exports over the EOL cohort
    {
        const Cohort eol = build_eol_cohort(ds, opts.eol);
        for (Treatment treatment : opts.treatments) {
            const auto durations = durations_for_cohort(ds, eol, treatment, opts.duration);
            const std::string name = "durations_" + std::string(to_string(treatment)) + ".csv";
            auto out = open_output(fs::path(args.out_dir) / name);
            write_durations_csv(durations, treatment, out);
            manifest.outputs.push_back(name);
        }
    }

    if (!sentiment_scores.empty()) {
        auto out = open_output(fs::path(args.out_dir) / "sentiment_scores.csv");
        write_sentiment_csv(sentiment_scores, out);
        manifest.outputs.push_back("sentiment_scores.csv");
    }

    // sentiment medians table
    if (!report.sentiment_sections.empty()) {
        auto out = open_output(fs::path(args.out_dir) / "sentiment_medians.csv");
        write_csv_row(out, {"stratification", "population", "n", "median_normalized",
                            "p_two_sided"});
        for (const auto& s : report.sentiment_sections) {
            write_csv_row(out, {s.stratification, s.group_a.population,
                                std::to_string(s.group_a.n),
                                format_double(s.group_a.median_normalized),
                                format_double(s.mann_whitney.p_two_sided)});
            write_csv_row(out, {s.stratification, s.group_b.population,
                                std::to_string(s.group_b.n),
                                format_double(s.group_b.median_normalized),
                                format_double(s.mann_whitney.p_two_sided)});
        }
        manifest.outputs.push_back("sentiment_medians.csv");
    }

    if (report.correlations) {
        auto out = open_output(fs::path(args.out_dir) / "correlations.csv");
        const auto& m = *report.correlations;
        write_csv_row(out, {"", m.labels[0], m.labels[1], m.labels[2]});
        for (int i = 0; i < 3; ++i) {
            write_csv_row(out, {m.labels[i], format_double(m.values[i][0]),
                                format_double(m.values[i][1]), format_double(m.values[i][2])});
        }
        manifest.outputs.push_back("correlations.csv");
    }

    manifest.inputs.emplace_back("data", args.data_dir);
    manifest.inputs.emplace_back("scores", args.scores_path);
    if (!args.model_path.empty()) manifest.inputs.emplace_back("model", args.model_path);
    if (!args.lexicon_path.empty()) manifest.inputs.emplace_back("lexicon", args.lexicon_path);
    std::string strata_csv;
    for (const auto& s : args.strata) strata_csv += (strata_csv.empty() ? "" : ",") + s;
    manifest.parameters = {
        {"strata", strata_csv},
        {"treatment", args.treatment},
        {"sentiment_population", args.sentiment_population},
        {"min_stay_hours", format_double(args.min_stay_hours)},
        {"merge_gap_minutes", std::to_string(args.merge_gap_minutes)},
        {"exact_test_cutoff", std::to_string(args.exact_test_cutoff)},
        {"gap_policy", args.exclude_gaps ? "exclude_gaps" : "count_gaps"},
        {"include_snf", args.no_snf ? "0" : "1"},
        {"k_low_trust", args.k_low_trust ? std::to_string(*args.k_low_trust) : "race_split"},
        {"top_k", std::to_string(args.top_k)},
        {"strict", args.strict ? "1" : "0"}};
    std::sort(manifest.outputs.begin(), manifest.outputs.end());
    write_manifest(manifest, fs::path(args.out_dir) / "manifest.json");

    std::cout << "report written to " << (fs::path(args.out_dir) / "report.json").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mistrust: end-of-life care disparity analysis toolkit"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic dataset");
    synth_cmd->add_option("--config", synth_args.config_path, "key=value config file")
        ->check(CLI::ExistingFile);
    synth_cmd->add_option("--out", synth_args.out_dir, "output directory")->required();
    synth_cmd->add_option("--seed", synth_args.seed, "override config seed");
    synth_cmd->add_option("--n", synth_args.n_admissions, "override number of admissions");

    CohortArgs cohort_args;
    auto* cohort_cmd = app.add_subcommand("cohort", "build analysis cohorts");
    cohort_cmd->add_option("--data", cohort_args.data_dir, "dataset directory")
        ->envname("MISTRUST_DATA")
        ->required();
    cohort_cmd->add_option("--out", cohort_args.out_dir, "output directory")->required();
    cohort_cmd->add_option("--min-stay-hours", cohort_args.min_stay_hours,
                           "minimum stay for the EOL cohort (default 6)");
    cohort_cmd->add_option("--notes-min-stay-hours", cohort_args.notes_min_stay_hours,
                           "minimum stay for the notes population (default 12)");
    cohort_cmd->add_flag("--no-snf", cohort_args.no_snf,
                         "exclude SNF discharges from the EOL cohort");
    cohort_cmd->add_flag("--strict", cohort_args.strict, "fail on the first rejected row");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "fit the mistrust model on proxy labels");
    train_cmd->add_option("--data", train_args.data_dir, "dataset directory")
        ->envname("MISTRUST_DATA")
        ->required();
    train_cmd->add_option("--out", train_args.out_dir, "output directory")->required();
    train_cmd->add_option("--cohort", train_args.cohort_path,
                          "training population CSV (default: notes population)")
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--patterns", train_args.patterns_path,
                          "noncompliance terms file, one per line")
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--whitelist", train_args.whitelist_path,
                          "item-label whitelist (default: full vocabulary)")
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--C", train_args.C, "inverse regularization strength (default 1.0)");
    train_cmd->add_option("--tol", train_args.tol, "relative objective tolerance (default 1e-7)");
    train_cmd->add_option("--max-iter", train_args.max_iter, "iteration cap (default 5000)");
    train_cmd->add_flag("--balance-classes", train_args.balance_classes,
                        "reweight classes to equal total weight");
    train_cmd->add_flag("--export-features", train_args.export_features,
                        "also write the sparse feature matrix as features.csv");
    train_cmd->add_flag("--strict", train_args.strict, "fail on the first rejected row");

    ScoreArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "score admissions with a fitted model");
    score_cmd->add_option("--data", score_args.data_dir, "dataset directory")
        ->envname("MISTRUST_DATA")
        ->required();
    score_cmd->add_option("--model", score_args.model_path, "model CSV from train")
        ->required()
        ->check(CLI::ExistingFile);
    score_cmd->add_option("--out", score_args.out_dir, "output directory")->required();
    score_cmd->add_option("--cohort", score_args.cohort_path,
                          "population CSV (default: all admissions)")
        ->check(CLI::ExistingFile);
    score_cmd->add_flag("--strict", score_args.strict, "fail on the first rejected row");

    AnalyzeArgs analyze_args;
    auto* analyze_cmd = app.add_subcommand("analyze", "produce the disparity report");
    analyze_cmd->add_option("--data", analyze_args.data_dir, "dataset directory")
        ->envname("MISTRUST_DATA")
        ->required();
    analyze_cmd->add_option("--scores", analyze_args.scores_path, "scores CSV from score")
        ->required()
        ->check(CLI::ExistingFile);
    analyze_cmd->add_option("--out", analyze_args.out_dir, "output directory")->required();
    analyze_cmd->add_option("--model", analyze_args.model_path, "model CSV for the weight report")
        ->check(CLI::ExistingFile);
    analyze_cmd->add_option("--lexicon", analyze_args.lexicon_path,
                            "sentiment lexicon TSV (default: built-in)")
        ->check(CLI::ExistingFile);
    analyze_cmd
        ->add_option("--strata", analyze_args.strata,
                     "stratifications to run (default: race trust severity)")
        ->check(CLI::IsMember({"race", "trust", "severity"}));
    analyze_cmd
        ->add_option("--treatment", analyze_args.treatment,
                     "treatment(s) to analyze (default both)")
        ->check(CLI::IsMember({"ventilation", "vasopressor", "both"}));
    analyze_cmd->add_option("--k-low-trust", analyze_args.k_low_trust,
                            "low-trust group size (default: race split size)");
    analyze_cmd
        ->add_option("--sentiment-population", analyze_args.sentiment_population,
                     "population the sentiment normalization runs over (default eol)")
        ->check(CLI::IsMember({"eol", "notes"}));
    analyze_cmd->add_option("--min-stay-hours", analyze_args.min_stay_hours,
                            "minimum stay for the EOL cohort (default 6)");
    analyze_cmd->add_option("--merge-gap-minutes", analyze_args.merge_gap_minutes,
                            "span merge gap (default 600)");
    analyze_cmd->add_option("--exact-test-cutoff", analyze_args.exact_test_cutoff,
                            "combined sample size up to which the U test is exact (default 20)");
    analyze_cmd->add_flag("--exclude-gaps", analyze_args.exclude_gaps,
                          "count only the union of raw spans");
    analyze_cmd->add_flag("--no-snf", analyze_args.no_snf,
                          "exclude SNF discharges from the EOL cohort");
    analyze_cmd->add_option("--top-k", analyze_args.top_k,
                            "top feature count for the weight report (default 3)");
    analyze_cmd->add_flag("--strict", analyze_args.strict, "fail on the first rejected row");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(synth_cmd)) return run_synth(synth_args);
        if (app.got_subcommand(cohort_cmd)) return run_cohort(cohort_args);
        if (app.got_subcommand(train_cmd)) return run_train(train_args);
        if (app.got_subcommand(score_cmd)) return run_score(score_args);
        if (app.got_subcommand(analyze_cmd)) return run_analyze(analyze_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
