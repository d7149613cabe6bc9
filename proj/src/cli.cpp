#include "leakaudit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "leakaudit/cohort.hpp"
#include "leakaudit/corpus.hpp"
#include "leakaudit/embed.hpp"
#include "leakaudit/errors.hpp"
#include "leakaudit/evaluate.hpp"
#include "leakaudit/io.hpp"
#include "leakaudit/report.hpp"
#include "leakaudit/search.hpp"
#include "leakaudit/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

namespace leakaudit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
    // paths
    std::string profiles;
    std::string comments;
    std::string embeddings;
    std::string results;
    std::string out_dir = ".";
    // embedder
    std::string embedder_kind = "hashed";
    std::size_t dim = 512;
    // probes
    ProbeHyper probes;
    // cohort defaults
    std::size_t max_size = 10000;
    std::size_t min_per_class = 25;
    double test_fraction = 0.25;
    // search
    std::vector<std::size_t> stage_sizes = {500, 5000, 0};
    double promote_threshold = 0.05;
    std::size_t max_pairings = 10;
    std::size_t search_min_per_class = 25;
    // report
    ReportOptions report;
    // synth
    SynthConfig synth;
    // global
    std::uint64_t seed = 0;
    std::size_t workers = 1;
};

void require_keys(const json& j, const char* section,
                  std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const auto& k : allowed) known = known || k == key;
        if (!known)
            throw UsageError(std::string("config: unknown key \"") + key + "\" in " + section);
    }
}

void apply_config_json(RunConfig& cfg, const json& j) {
    require_keys(j, "the top level",
                 {"paths", "embedder", "probes", "cohort", "search", "report", "synth", "seed",
                  "workers"});
    if (j.contains("paths")) {
        const json& p = j.at("paths");
        require_keys(p, "paths", {"profiles", "comments", "embeddings", "results", "out_dir"});
        if (p.contains("profiles")) cfg.profiles = p.at("profiles").get<std::string>();
        if (p.contains("comments")) cfg.comments = p.at("comments").get<std::string>();
        if (p.contains("embeddings")) cfg.embeddings = p.at("embeddings").get<std::string>();
        if (p.contains("results")) cfg.results = p.at("results").get<std::string>();
        if (p.contains("out_dir")) cfg.out_dir = p.at("out_dir").get<std::string>();
    }
    if (j.contains("embedder")) {
        const json& e = j.at("embedder");
        require_keys(e, "embedder", {"kind", "dim"});
        if (e.contains("kind")) cfg.embedder_kind = e.at("kind").get<std::string>();
        if (e.contains("dim")) cfg.dim = e.at("dim").get<std::size_t>();
    }
    if (j.contains("probes")) {
        const json& p = j.at("probes");
        require_keys(p, "probes", {"logistic", "tree"});
        if (p.contains("logistic")) {
            const json& l = p.at("logistic");
            require_keys(l, "probes.logistic",
                         {"learning_rate", "l2_lambda", "max_epochs", "grad_tolerance"});
            auto& h = cfg.probes.logistic;
            if (l.contains("learning_rate")) h.learning_rate = l.at("learning_rate").get<double>();
            if (l.contains("l2_lambda")) h.l2_lambda = l.at("l2_lambda").get<double>();
            if (l.contains("max_epochs")) h.max_epochs = l.at("max_epochs").get<std::size_t>();
            if (l.contains("grad_tolerance"))
                h.grad_tolerance = l.at("grad_tolerance").get<double>();
        }
        if (p.contains("tree")) {
            const json& t = p.at("tree");
            require_keys(t, "probes.tree", {"max_depth", "min_leaf"});
            if (t.contains("max_depth"))
                cfg.probes.tree.max_depth = t.at("max_depth").get<std::size_t>();
            if (t.contains("min_leaf"))
                cfg.probes.tree.min_leaf = t.at("min_leaf").get<std::size_t>();
        }
    }
    if (j.contains("cohort")) {
        const json& c = j.at("cohort");
        require_keys(c, "cohort", {"max_size", "min_per_class", "test_fraction"});
        if (c.contains("max_size")) cfg.max_size = c.at("max_size").get<std::size_t>();
        if (c.contains("min_per_class"))
            cfg.min_per_class = c.at("min_per_class").get<std::size_t>();
        if (c.contains("test_fraction")) cfg.test_fraction = c.at("test_fraction").get<double>();
    }
    if (j.contains("search")) {
        const json& s = j.at("search");
        require_keys(s, "search",
                     {"stage_sizes", "promote_threshold", "max_pairings", "min_per_class"});
        if (s.contains("stage_sizes"))
            cfg.stage_sizes = s.at("stage_sizes").get<std::vector<std::size_t>>();
        if (s.contains("promote_threshold"))
            cfg.promote_threshold = s.at("promote_threshold").get<double>();
        if (s.contains("max_pairings"))
            cfg.max_pairings = s.at("max_pairings").get<std::size_t>();
        if (s.contains("min_per_class"))
            cfg.search_min_per_class = s.at("min_per_class").get<std::size_t>();
    }
    if (j.contains("report")) {
        const json& r = j.at("report");
        require_keys(r, "report", {"top_k", "bottom_k", "variance_top_k", "pairwise"});
        if (r.contains("top_k")) cfg.report.top_k = r.at("top_k").get<std::size_t>();
        if (r.contains("bottom_k")) cfg.report.bottom_k = r.at("bottom_k").get<std::size_t>();
        if (r.contains("variance_top_k"))
            cfg.report.variance_top_k = r.at("variance_top_k").get<std::size_t>();
        if (r.contains("pairwise")) {
            const auto pair = r.at("pairwise").get<std::vector<std::string>>();
            if (pair.size() != 2)
                throw UsageError("config: report.pairwise needs exactly two subreddits");
            cfg.report.pairwise = {pair[0], pair[1]};
        }
    }
    if (j.contains("synth")) cfg.synth = synth_config_from_json(j.at("synth"));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<std::size_t>();
}

json effective_config_json(const RunConfig& cfg) {
    json j;
    j["paths"] = {{"profiles", cfg.profiles},
                  {"comments", cfg.comments},
                  {"embeddings", cfg.embeddings},
                  {"results", cfg.results},
                  {"out_dir", cfg.out_dir}};
    j["embedder"] = {{"kind", cfg.embedder_kind}, {"dim", cfg.dim}};
    j["probes"] = {{"logistic",
                    {{"learning_rate", cfg.probes.logistic.learning_rate},
                     {"l2_lambda", cfg.probes.logistic.l2_lambda},
                     {"max_epochs", cfg.probes.logistic.max_epochs},
                     {"grad_tolerance", cfg.probes.logistic.grad_tolerance}}},
                   {"tree",
                    {{"max_depth", cfg.probes.tree.max_depth},
                     {"min_leaf", cfg.probes.tree.min_leaf}}}};
    j["cohort"] = {{"max_size", cfg.max_size},
                   {"min_per_class", cfg.min_per_class},
                   {"test_fraction", cfg.test_fraction}};
    j["search"] = {{"stage_sizes", cfg.stage_sizes},
                   {"promote_threshold", cfg.promote_threshold},
                   {"max_pairings", cfg.max_pairings},
                   {"min_per_class", cfg.search_min_per_class}};
    json report = {{"top_k", cfg.report.top_k},
                   {"bottom_k", cfg.report.bottom_k},
                   {"variance_top_k", cfg.report.variance_top_k}};
    if (cfg.report.pairwise.has_value())
        report["pairwise"] = {cfg.report.pairwise->first, cfg.report.pairwise->second};
    j["report"] = std::move(report);
    j["synth"] = to_json(cfg.synth);
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    return j;
}

// Everything the run consumed and produced, for exact reruns.
void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::vector<std::string>& input_paths,
                    const std::vector<std::string>& outputs) {
    json inputs = json::object();
    for (const auto& path : input_paths) inputs[path] = hex64(fnv1a64_file(path));
    json j;
    j["command"] = command;
    j["config"] = effective_config_json(cfg);
    j["inputs"] = std::move(inputs);
    j["outputs"] = outputs;
    fs::create_directories(cfg.out_dir);
    write_file_atomic((fs::path(cfg.out_dir) / "run_manifest.json").string(), j.dump(2) + "\n");
}

std::unique_ptr<CommentEmbedder> make_embedder(const RunConfig& cfg) {
    if (cfg.embedder_kind == "hashed") return std::make_unique<HashedNgramEmbedder>(cfg.dim);
    if (cfg.embedder_kind == "precomputed") {
        if (cfg.embeddings.empty())
            throw UsageError("precomputed embedder needs --embeddings (or paths.embeddings)");
        auto store = std::make_shared<PrecomputedStore>(PrecomputedStore::load(cfg.embeddings));
        return std::make_unique<StoreEmbedder>(std::move(store));
    }
    throw UsageError("unknown embedder kind \"" + cfg.embedder_kind +
                     "\" (expected hashed or precomputed)");
}

void require_input(const std::string& value, const char* flag) {
    if (value.empty())
        throw UsageError(std::string("missing required input: ") + flag);
    if (!fs::exists(value)) throw IoError(std::string(flag) + ": no such file: " + value);
}

std::vector<LabeledComment> load_labeled(const RunConfig& cfg, IngestSummary* profile_summary,
                                         IngestSummary* comment_summary,
                                         std::size_t* dropped) {
    const ProfileMap profiles = load_author_profiles(cfg.profiles, profile_summary);
    const std::vector<Comment> comments = load_comments(cfg.comments, {}, comment_summary);
    return join_labeled(comments, profiles, dropped);
}

Trait parse_trait_flag(const std::string& name) {
    const auto trait = trait_from_name(name);
    if (!trait) {
        std::string names;
        for (Trait t : kAllTraits) {
            if (!names.empty()) names += ", ";
            names += std::string(trait_name(t));
        }
        throw UsageError("unknown trait \"" + name + "\" (one of: " + names + ")");
    }
    return *trait;
}

int cmd_ingest(const RunConfig& cfg) {
    require_input(cfg.profiles, "--profiles");
    require_input(cfg.comments, "--comments");

    IngestSummary ps;
    IngestSummary cs;
    std::size_t dropped = 0;
    const auto labeled = load_labeled(cfg, &ps, &cs, &dropped);

    // A duplicate username aborts with a data error before we get here,
    // so a summary that is emitted always reports zero duplicates.
    json summary = {{"rows_total", ps.rows_total + cs.rows_total},
                    {"rows_emitted", ps.rows_emitted + cs.rows_emitted},
                    {"rows_skipped", ps.rows_skipped + cs.rows_skipped},
                    {"duplicates", 0}};
    std::cout << summary.dump() << "\n";
    std::cerr << "profiles: " << ps.rows_emitted << "/" << ps.rows_total << " rows, "
              << ps.fields_unparsed << " unparsed fields; comments: " << cs.rows_emitted << "/"
              << cs.rows_total << " rows; labeled: " << labeled.size() << " ("
              << dropped << " without a profile)\n";

    write_manifest(cfg, "ingest", {cfg.profiles, cfg.comments}, {});
    return 0;
}

int cmd_synth(RunConfig cfg) {
    const SynthOutput out = generate(cfg.synth, cfg.out_dir);
    std::cout << "wrote " << out.profiles_path << " and " << out.comments_path << "\n";
    write_manifest(cfg, "synth", {},
                   {fs::path(out.profiles_path).filename().string(),
                    fs::path(out.comments_path).filename().string()});
    return 0;
}

int cmd_audit(const RunConfig& cfg, const std::string& subreddit, const std::string& trait) {
    require_input(cfg.profiles, "--profiles");
    require_input(cfg.comments, "--comments");
    const Trait target = parse_trait_flag(trait);
    const auto embedder = make_embedder(cfg);
    const auto labeled = load_labeled(cfg, nullptr, nullptr, nullptr);

    CohortSpec spec;
    spec.subreddit = subreddit;
    spec.trait = target;
    spec.max_size = cfg.max_size;
    spec.min_per_class = cfg.min_per_class;
    spec.test_fraction = cfg.test_fraction;
    spec.seed = cfg.seed;
    const Cohort cohort = build_cohort(labeled, spec);

    std::vector<EvaluationResult> results;
    results.push_back(
        evaluate_pairing(cohort, *embedder, ProbeKind::logistic, cfg.probes, cfg.seed));
    results.push_back(evaluate_pairing(cohort, *embedder, ProbeKind::tree, cfg.probes, cfg.seed));
    for (const auto& r : results) std::cout << to_json(r).dump() << "\n";

    fs::create_directories(cfg.out_dir);
    write_results_jsonl(results, (fs::path(cfg.out_dir) / "results.jsonl").string());
    write_file_atomic((fs::path(cfg.out_dir) / "cohort_manifest.json").string(),
                      cohort_manifest(cohort).dump(2) + "\n");

    std::vector<std::string> inputs = {cfg.profiles, cfg.comments};
    if (!cfg.embeddings.empty()) inputs.push_back(cfg.embeddings);
    write_manifest(cfg, "audit", inputs, {"results.jsonl", "cohort_manifest.json"});
    return 0;
}

int cmd_search(const RunConfig& cfg) {
    require_input(cfg.profiles, "--profiles");
    require_input(cfg.comments, "--comments");
    const auto embedder = make_embedder(cfg);
    const auto labeled = load_labeled(cfg, nullptr, nullptr, nullptr);

    SearchConfig sc;
    sc.stage_sizes = cfg.stage_sizes;
    sc.promote_threshold = cfg.promote_threshold;
    sc.max_pairings = cfg.max_pairings;
    sc.min_per_class = cfg.search_min_per_class;
    sc.test_fraction = cfg.test_fraction;
    sc.seed = cfg.seed;

    fs::create_directories(cfg.out_dir);
    const std::string trace = (fs::path(cfg.out_dir) / "search_trace.jsonl").string();
    const auto outcomes =
        run_search(labeled, sc, *embedder, cfg.probes, cfg.workers, trace);

    std::vector<EvaluationResult> promoted;
    for (const auto& o : outcomes) {
        std::cout << status_name(o.status) << " " << o.pairing.subreddit << " "
                  << trait_name(o.pairing.trait);
        if (!o.interim_lifts.empty())
            std::cout << " lift=" << fmt_double(o.interim_lifts.back());
        std::cout << "\n";
        if (o.status == SearchStatus::promoted) {
            promoted.push_back(*o.final_logistic);
            promoted.push_back(*o.final_tree);
        }
    }
    write_results_jsonl(promoted, (fs::path(cfg.out_dir) / "results.jsonl").string());

    std::vector<std::string> inputs = {cfg.profiles, cfg.comments};
    if (!cfg.embeddings.empty()) inputs.push_back(cfg.embeddings);
    write_manifest(cfg, "search", inputs, {"search_trace.jsonl", "results.jsonl"});
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    require_input(cfg.results, "--results");
    const auto results = read_results_jsonl(cfg.results);
    const ReportSummary s = write_reports(results, cfg.out_dir, cfg.report);

    std::cout << "pairings=" << s.n_pairings << " mean_lift=" << fmt_double(s.mean_lift)
              << " max=(" << s.max_pairing.subreddit << ", " << trait_name(s.max_pairing.trait)
              << ")=" << fmt_double(s.max_pairing.lift) << " min=(" << s.min_pairing.subreddit
              << ", " << trait_name(s.min_pairing.trait) << ")="
              << fmt_double(s.min_pairing.lift) << "\n";

    std::vector<std::string> outputs = {
        "trait_summary.csv",      "trait_summary.json",      "trait_summary.svg",
        "subreddit_ranking.csv",  "subreddit_ranking.json",  "subreddit_ranking.svg",
        "subreddit_variance.csv", "subreddit_variance.json", "summary.json"};
    write_manifest(cfg, "report", {cfg.results}, outputs);
    return 0;
}

int cmd_plot(const RunConfig& cfg) {
    require_input(cfg.results, "--results");
    const auto results = read_results_jsonl(cfg.results);
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);

    std::vector<ChartRow> chart;
    for (const auto& row : trait_summary(results))
        chart.push_back({std::string(trait_name(row.trait)), row.mean_lift, true});
    render_bar_chart(chart, "Mean macro-F1 lift by trait", (dir / "trait_summary.svg").string());

    chart.clear();
    for (const auto& row : subreddit_ranking(results, cfg.report.top_k, cfg.report.bottom_k))
        chart.push_back({row.subreddit, row.mean_lift, row.top});
    if (!chart.empty())
        render_bar_chart(chart, "Subreddits by mean macro-F1 lift (top vs bottom)",
                         (dir / "subreddit_ranking.svg").string());

    chart.clear();
    for (const auto& row : subreddit_variance(results, cfg.report.variance_top_k).rows)
        chart.push_back({row.subreddit, row.variance_lift, true});
    if (!chart.empty())
        render_bar_chart(chart, "Per-trait lift variance by subreddit",
                         (dir / "subreddit_variance.svg").string());

    write_manifest(cfg, "plot", {cfg.results},
                   {"trait_summary.svg", "subreddit_ranking.svg", "subreddit_variance.svg"});
    return 0;
}

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file; flags override it");
    cmd->add_option("--seed", f.seed, "global seed all randomness derives from");
    cmd->add_option("--workers", f.workers, "worker threads (search screening)");
    cmd->add_option("--out-dir", f.out_dir, "output directory (default .)");
}

RunConfig resolve_config(const CommonFlags& f) {
    RunConfig cfg;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw UsageError("cannot open config file: " + f.config_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw UsageError(f.config_path + ": bad JSON: " + e.what());
        }
        apply_config_json(cfg, j);
    }
    if (f.seed.has_value()) cfg.seed = *f.seed;
    if (f.workers.has_value()) cfg.workers = *f.workers;
    if (f.out_dir.has_value()) cfg.out_dir = *f.out_dir;
    if (cfg.workers == 0) throw UsageError("--workers must be > 0");
    return cfg;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"measures how strongly community text leaks author attributes", "leakaudit"};
    app.require_subcommand(1);

    // ingest
    CommonFlags ingest_common;
    std::string ingest_profiles;
    std::string ingest_comments;
    auto* ingest = app.add_subcommand("ingest", "validate and summarize a corpus");
    add_common(ingest, ingest_common);
    ingest->add_option("--profiles", ingest_profiles, "author_profiles.csv");
    ingest->add_option("--comments", ingest_comments, "comments.csv");

    // synth
    CommonFlags synth_common;
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with planted signals");
    add_common(synth, synth_common);

    // audit
    CommonFlags audit_common;
    std::string audit_profiles;
    std::string audit_comments;
    std::string audit_embeddings;
    std::string audit_embedder;
    std::optional<std::size_t> audit_dim;
    std::optional<std::size_t> audit_max_size;
    std::optional<std::size_t> audit_min_per_class;
    std::optional<double> audit_test_fraction;
    std::string audit_subreddit;
    std::string audit_trait;
    auto* audit = app.add_subcommand("audit", "evaluate one (subreddit, trait) pairing");
    add_common(audit, audit_common);
    audit->add_option("--profiles", audit_profiles, "author_profiles.csv");
    audit->add_option("--comments", audit_comments, "comments.csv");
    audit->add_option("--embeddings", audit_embeddings, "precomputed embedding file");
    audit->add_option("--embedder", audit_embedder, "hashed or precomputed");
    audit->add_option("--dim", audit_dim, "hashed embedder dimension");
    audit->add_option("--max-size", audit_max_size, "cohort size cap (total comments)");
    audit->add_option("--min-per-class", audit_min_per_class, "imbalance guard");
    audit->add_option("--test-fraction", audit_test_fraction, "author-split test share");
    audit->add_option("--subreddit", audit_subreddit, "subreddit to audit")->required();
    audit->add_option("--trait", audit_trait, "trait to audit")->required();

    // search
    CommonFlags search_common;
    std::string search_profiles;
    std::string search_comments;
    std::string search_embeddings;
    std::string search_embedder;
    std::optional<std::size_t> search_dim;
    std::vector<std::size_t> search_stages;
    std::optional<double> search_threshold;
    std::optional<std::size_t> search_budget;
    std::optional<std::size_t> search_min_per_class;
    std::optional<double> search_test_fraction;
    auto* search = app.add_subcommand("search", "iterative screening over all pairings");
    add_common(search, search_common);
    search->add_option("--profiles", search_profiles, "author_profiles.csv");
    search->add_option("--comments", search_comments, "comments.csv");
    search->add_option("--embeddings", search_embeddings, "precomputed embedding file");
    search->add_option("--embedder", search_embedder, "hashed or precomputed");
    search->add_option("--dim", search_dim, "hashed embedder dimension");
    search->add_option("--stages", search_stages, "per-class stage sizes, 0 = full (last only)")
        ->delimiter(',');
    search->add_option("--threshold", search_threshold, "interim lift needed to advance");
    search->add_option("--max-pairings", search_budget, "promotion budget");
    search->add_option("--min-per-class", search_min_per_class, "imbalance guard");
    search->add_option("--test-fraction", search_test_fraction, "author-split test share");

    // report
    CommonFlags report_common;
    std::string report_results;
    std::optional<std::size_t> report_top_k;
    std::optional<std::size_t> report_bottom_k;
    std::optional<std::size_t> report_variance_top_k;
    std::vector<std::string> report_pairwise;
    auto* report = app.add_subcommand("report", "aggregate a results JSONL into tables + charts");
    add_common(report, report_common);
    report->add_option("--results", report_results, "EvaluationResult JSONL file");
    report->add_option("--top-k", report_top_k, "subreddits in the top ranking group");
    report->add_option("--bottom-k", report_bottom_k, "subreddits in the bottom ranking group");
    report->add_option("--variance-top-k", report_variance_top_k,
                       "rows in the variance table (0 = all)");
    report->add_option("--pairwise", report_pairwise, "two subreddits for a pairwise lift grid")
        ->expected(2)
        ->delimiter(',');

    // plot
    CommonFlags plot_common;
    std::string plot_results;
    auto* plot = app.add_subcommand("plot", "re-render the SVG charts from a results JSONL");
    add_common(plot, plot_common);
    plot->add_option("--results", plot_results, "EvaluationResult JSONL file");

    if (argc <= 1) {
        std::cerr << app.help();
        return 1;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ingest->parsed()) {
            RunConfig cfg = resolve_config(ingest_common);
            if (!ingest_profiles.empty()) cfg.profiles = ingest_profiles;
            if (!ingest_comments.empty()) cfg.comments = ingest_comments;
            return cmd_ingest(cfg);
        }
        if (synth->parsed()) {
            RunConfig cfg = resolve_config(synth_common);
            if (synth_common.seed.has_value()) cfg.synth.seed = *synth_common.seed;
            return cmd_synth(cfg);
        }
        if (audit->parsed()) {
            RunConfig cfg = resolve_config(audit_common);
            if (!audit_profiles.empty()) cfg.profiles = audit_profiles;
            if (!audit_comments.empty()) cfg.comments = audit_comments;
            if (!audit_embeddings.empty()) {
                cfg.embeddings = audit_embeddings;
                if (audit_embedder.empty() && cfg.embedder_kind == "hashed")
                    cfg.embedder_kind = "precomputed";
            }
            if (!audit_embedder.empty()) cfg.embedder_kind = audit_embedder;
            if (audit_dim.has_value()) cfg.dim = *audit_dim;
            if (audit_max_size.has_value()) cfg.max_size = *audit_max_size;
            if (audit_min_per_class.has_value()) cfg.min_per_class = *audit_min_per_class;
            if (audit_test_fraction.has_value()) cfg.test_fraction = *audit_test_fraction;
            return cmd_audit(cfg, audit_subreddit, audit_trait);
        }
        if (search->parsed()) {
            RunConfig cfg = resolve_config(search_common);
            if (!search_profiles.empty()) cfg.profiles = search_profiles;
            if (!search_comments.empty()) cfg.comments = search_comments;
            if (!search_embeddings.empty()) {
                cfg.embeddings = search_embeddings;
                if (search_embedder.empty() && cfg.embedder_kind == "hashed")
                    cfg.embedder_kind = "precomputed";
            }
            if (!search_embedder.empty()) cfg.embedder_kind = search_embedder;
            if (search_dim.has_value()) cfg.dim = *search_dim;
            if (!search_stages.empty()) cfg.stage_sizes = search_stages;
            if (search_threshold.has_value()) cfg.promote_threshold = *search_threshold;
            if (search_budget.has_value()) cfg.max_pairings = *search_budget;
            if (search_min_per_class.has_value())
                cfg.search_min_per_class = *search_min_per_class;
            if (search_test_fraction.has_value()) cfg.test_fraction = *search_test_fraction;
            return cmd_search(cfg);
        }
        if (report->parsed()) {
            RunConfig cfg = resolve_config(report_common);
            if (!report_results.empty()) cfg.results = report_results;
            if (report_top_k.has_value()) cfg.report.top_k = *report_top_k;
            if (report_bottom_k.has_value()) cfg.report.bottom_k = *report_bottom_k;
            if (report_variance_top_k.has_value())
                cfg.report.variance_top_k = *report_variance_top_k;
            if (!report_pairwise.empty())
                cfg.report.pairwise = {report_pairwise[0], report_pairwise[1]};
            return cmd_report(cfg);
        }
        if (plot->parsed()) {
            RunConfig cfg = resolve_config(plot_common);
            if (!plot_results.empty()) cfg.results = plot_results;
            return cmd_plot(cfg);
        }
        std::cerr << app.help();
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("leakaudit");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace leakaudit::cli
