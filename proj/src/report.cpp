#include "leakaudit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "leakaudit/csv.hpp"
#include "leakaudit/errors.hpp"
#include "leakaudit/io.hpp"

namespace leakaudit {

std::string fmt_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw Error("fmt_double: conversion failed");
    return std::string(buf, ptr);
}

namespace {

struct ProbeAccumulator {
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    std::size_t records = 0;
};

std::string fmt_fixed(double v, int precision) {
    char buf[48];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
    if (ec != std::errc{}) throw Error("fmt_fixed: conversion failed");
    return std::string(buf, ptr);
}

}  // namespace

std::vector<PairingLift> pairing_lifts(const std::vector<EvaluationResult>& results) {
    if (results.empty()) throw UsageError("report: no evaluation records");

    std::map<std::pair<std::string, int>, ProbeAccumulator> groups;
    for (const auto& r : results) {
        auto& acc = groups[{to_lower(r.subreddit), static_cast<int>(r.trait)}];
        const std::size_t p = (r.probe == ProbeKind::logistic) ? 0 : 1;
        acc.sum[p] += r.macro_f1_lift;
        acc.count[p] += 1;
        acc.records += 1;
    }

    std::vector<PairingLift> out;
    out.reserve(groups.size());
    for (const auto& [key, acc] : groups) {
        double total = 0.0;
        std::size_t probes = 0;
        for (int p = 0; p < 2; ++p) {
            if (acc.count[p] == 0) continue;
            total += acc.sum[p] / static_cast<double>(acc.count[p]);
            probes += 1;
        }
        out.push_back({key.first, static_cast<Trait>(key.second),
                       total / static_cast<double>(probes), acc.records});
    }
    return out;
}

std::vector<TraitSummaryRow> trait_summary(const std::vector<EvaluationResult>& results) {
    const std::vector<PairingLift> lifts = pairing_lifts(results);

    std::array<double, 7> sum{};
    std::array<std::size_t, 7> count{};
    for (const auto& pl : lifts) {
        sum[static_cast<std::size_t>(pl.trait)] += pl.lift;
        count[static_cast<std::size_t>(pl.trait)] += 1;
    }

    std::vector<TraitSummaryRow> rows;
    for (Trait t : kAllTraits) {
        const auto i = static_cast<std::size_t>(t);
        if (count[i] == 0) continue;
        rows.push_back({t, sum[i] / static_cast<double>(count[i]), count[i]});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.mean_lift > b.mean_lift; });
    return rows;
}

namespace {

struct SubredditAgg {
    std::vector<double> lifts;  // one per trait present
    double mean = 0.0;
};

std::map<std::string, SubredditAgg> by_subreddit(const std::vector<PairingLift>& lifts) {
    std::map<std::string, SubredditAgg> agg;
    for (const auto& pl : lifts) agg[pl.subreddit].lifts.push_back(pl.lift);
    for (auto& [name, a] : agg) {
        double s = 0.0;
        for (double v : a.lifts) s += v;
        a.mean = s / static_cast<double>(a.lifts.size());
    }
    return agg;
}

}  // namespace

std::vector<RankingRow> subreddit_ranking(const std::vector<EvaluationResult>& results,
                                          std::size_t top_k, std::size_t bottom_k) {
    const auto agg = by_subreddit(pairing_lifts(results));

    std::vector<RankingRow> all;
    all.reserve(agg.size());
    for (const auto& [name, a] : agg) all.push_back({name, a.mean, a.lifts.size(), false});
    // Descending mean; the map already yields names ascending, so a
    // stable sort gives the lexicographic tie-break for free.
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& a, const auto& b) { return a.mean_lift > b.mean_lift; });

    const std::size_t k_top = std::min(top_k, all.size());
    const std::size_t k_bottom = std::min(bottom_k, all.size() - k_top);

    std::vector<RankingRow> out;
    for (std::size_t i = 0; i < k_top; ++i) {
        out.push_back(all[i]);
        out.back().top = true;
    }
    for (std::size_t i = all.size() - k_bottom; i < all.size(); ++i) out.push_back(all[i]);
    return out;
}

VarianceSummary subreddit_variance(const std::vector<EvaluationResult>& results,
                                   std::size_t top_k) {
    const auto agg = by_subreddit(pairing_lifts(results));

    VarianceSummary summary;
    for (const auto& [name, a] : agg) {
        if (a.lifts.size() < 2) {
            summary.excluded_single_trait += 1;
            continue;
        }
        double ss = 0.0;
        for (double v : a.lifts) ss += (v - a.mean) * (v - a.mean);
        // Population variance: the traits of a subreddit are the whole
        // population, not a sample from one.
        summary.rows.push_back(
            {name, a.mean, ss / static_cast<double>(a.lifts.size()), a.lifts.size()});
    }
    std::stable_sort(summary.rows.begin(), summary.rows.end(), [](const auto& a, const auto& b) {
        return a.variance_lift > b.variance_lift;
    });
    if (top_k > 0 && summary.rows.size() > top_k) summary.rows.resize(top_k);
    return summary;
}

PairwiseTable pairwise_table(const std::vector<EvaluationResult>& results,
                             const std::string& subreddit_a, const std::string& subreddit_b,
                             const std::vector<Trait>& traits) {
    const std::vector<PairingLift> lifts = pairing_lifts(results);

    PairwiseTable table;
    table.subreddit_a = to_lower(subreddit_a);
    table.subreddit_b = to_lower(subreddit_b);
    table.traits = traits;
    if (table.traits.empty())
        table.traits.assign(kAllTraits.begin(), kAllTraits.end());

    for (Trait t : table.traits) {
        std::array<std::optional<double>, 2> cell;
        for (const auto& pl : lifts) {
            if (pl.trait != t) continue;
            if (pl.subreddit == table.subreddit_a) cell[0] = pl.lift;
            if (pl.subreddit == table.subreddit_b) cell[1] = pl.lift;
        }
        table.cells.push_back(cell);
    }
    return table;
}

ReportSummary summarize(const std::vector<EvaluationResult>& results) {
    const std::vector<PairingLift> lifts = pairing_lifts(results);

    ReportSummary s;
    s.n_pairings = lifts.size();
    s.max_pairing = lifts.front();
    s.min_pairing = lifts.front();
    for (const auto& pl : lifts) {
        s.mean_lift += pl.lift;
        if (pl.lift > s.max_pairing.lift) s.max_pairing = pl;
        if (pl.lift < s.min_pairing.lift) s.min_pairing = pl;
    }
    s.mean_lift /= static_cast<double>(lifts.size());
    return s;
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

void render_bar_chart(const std::vector<ChartRow>& rows, const std::string& title,
                      const std::string& path) {
    if (rows.empty()) throw UsageError("render_bar_chart: no rows");

    constexpr double kWidth = 800.0;
    constexpr double kRowHeight = 26.0;
    constexpr double kLabelX = 230.0;  // bars start here
    constexpr double kBarSpan = 480.0;
    constexpr double kTop = 44.0;
    const double height = kTop + kRowHeight * static_cast<double>(rows.size()) + 16.0;

    double vmin = 0.0;
    double vmax = 0.0;
    for (const auto& r : rows) {
        vmin = std::min(vmin, r.value);
        vmax = std::max(vmax, r.value);
    }
    const double span = (vmax > vmin) ? (vmax - vmin) : 1.0;
    const auto x_of = [&](double v) { return kLabelX + (v - vmin) / span * kBarSpan; };

    std::ostringstream f;

    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_fixed(kWidth, 6)
      << "\" height=\"" << fmt_fixed(height, 6) << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    f << "<text x=\"16\" y=\"24\" font-family=\"monospace\" font-size=\"15\" fill=\"#000000\">"
      << xml_escape(title) << "</text>\n";

    const double zero_x = x_of(0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ChartRow& r = rows[i];
        const double y = kTop + kRowHeight * static_cast<double>(i);
        const double end_x = x_of(r.value);
        const double bar_x = std::min(zero_x, end_x);
        const double bar_w = std::abs(end_x - zero_x);
        const char* color = r.highlight ? "#2e7d32" : "#c62828";

        f << "<text x=\"" << fmt_fixed(kLabelX - 8.0, 6) << "\" y=\""
          << fmt_fixed(y + 17.0, 6)
          << "\" font-family=\"monospace\" font-size=\"13\" fill=\"#000000\""
          << " text-anchor=\"end\">" << xml_escape(r.label) << "</text>\n";
        f << "<rect x=\"" << fmt_fixed(bar_x, 6) << "\" y=\"" << fmt_fixed(y + 5.0, 6)
          << "\" width=\"" << fmt_fixed(bar_w, 6) << "\" height=\""
          << fmt_fixed(kRowHeight - 10.0, 6) << "\" fill=\"" << color << "\"/>\n";
        f << "<text x=\"" << fmt_fixed(std::max(zero_x, end_x) + 6.0, 6) << "\" y=\""
          << fmt_fixed(y + 17.0, 6)
          << "\" font-family=\"monospace\" font-size=\"13\" fill=\"#000000\">"
          << fmt_fixed(r.value, 6) << "</text>\n";
    }
    // Zero axis, drawn last so it stays visible over the bars.
    f << "<line x1=\"" << fmt_fixed(zero_x, 6) << "\" y1=\"" << fmt_fixed(kTop - 4.0, 6)
      << "\" x2=\"" << fmt_fixed(zero_x, 6) << "\" y2=\"" << fmt_fixed(height - 12.0, 6)
      << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    f << "</svg>\n";
    write_file_atomic(path, f.str());
}

namespace {

std::string sanitize_for_filename(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_';
        out.push_back(ok ? c : '_');
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    write_file_atomic(path.string(), content);
}

}  // namespace

ReportSummary write_reports(const std::vector<EvaluationResult>& results,
                            const std::string& out_dir, const ReportOptions& options) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    // Trait summary.
    const auto traits = trait_summary(results);
    {
        std::string csv;
        csv += "trait,mean_lift,n_pairings\n";
        nlohmann::json rows = nlohmann::json::array();
        std::vector<ChartRow> chart;
        for (const auto& row : traits) {
            csv += std::string(trait_name(row.trait)) + "," + fmt_double(row.mean_lift) + "," +
                   std::to_string(row.n_pairings) + "\n";
            rows.push_back({{"trait", std::string(trait_name(row.trait))},
                            {"mean_lift", row.mean_lift},
                            {"n_pairings", row.n_pairings}});
            chart.push_back({std::string(trait_name(row.trait)), row.mean_lift, true});
        }
        write_text_file(dir / "trait_summary.csv", csv);
        write_text_file(dir / "trait_summary.json", rows.dump(2) + "\n");
        render_bar_chart(chart, "Mean macro-F1 lift by trait",
                         (dir / "trait_summary.svg").string());
    }

    // Subreddit ranking.
    const auto ranking = subreddit_ranking(results, options.top_k, options.bottom_k);
    if (!ranking.empty()) {
        std::string csv;
        csv += "subreddit,group,mean_lift,n_traits\n";
        nlohmann::json rows = nlohmann::json::array();
        std::vector<ChartRow> chart;
        for (const auto& row : ranking) {
            const char* group = row.top ? "top" : "bottom";
            csv += csv_quote(row.subreddit) + "," + group + "," + fmt_double(row.mean_lift) +
                   "," + std::to_string(row.n_traits) + "\n";
            rows.push_back({{"subreddit", row.subreddit},
                            {"group", group},
                            {"mean_lift", row.mean_lift},
                            {"n_traits", row.n_traits}});
            chart.push_back({row.subreddit, row.mean_lift, row.top});
        }
        write_text_file(dir / "subreddit_ranking.csv", csv);
        write_text_file(dir / "subreddit_ranking.json", rows.dump(2) + "\n");
        render_bar_chart(chart, "Subreddits by mean macro-F1 lift (top vs bottom)",
                         (dir / "subreddit_ranking.svg").string());
    }

    // Subreddit variance.
    const auto variance = subreddit_variance(results, options.variance_top_k);
    {
        std::string csv;
        csv += "subreddit,variance_lift,mean_lift,n_traits\n";
        nlohmann::json j;
        j["excluded_single_trait"] = variance.excluded_single_trait;
        nlohmann::json rows = nlohmann::json::array();
        std::vector<ChartRow> chart;
        for (const auto& row : variance.rows) {
            csv += csv_quote(row.subreddit) + "," + fmt_double(row.variance_lift) + "," +
                   fmt_double(row.mean_lift) + "," + std::to_string(row.n_traits) + "\n";
            rows.push_back({{"subreddit", row.subreddit},
                            {"variance_lift", row.variance_lift},
                            {"mean_lift", row.mean_lift},
                            {"n_traits", row.n_traits}});
            chart.push_back({row.subreddit, row.variance_lift, true});
        }
        j["rows"] = std::move(rows);
        write_text_file(dir / "subreddit_variance.csv", csv);
        write_text_file(dir / "subreddit_variance.json", j.dump(2) + "\n");
        if (!variance.rows.empty()) {
            render_bar_chart(chart, "Per-trait lift variance by subreddit",
                             (dir / "subreddit_variance.svg").string());
        }
    }

    // Optional pairwise grid.
    if (options.pairwise.has_value()) {
        const auto table =
            pairwise_table(results, options.pairwise->first, options.pairwise->second);
        const std::string stem = "pairwise_" + sanitize_for_filename(table.subreddit_a) + "_" +
                                 sanitize_for_filename(table.subreddit_b);
        std::string csv;
        csv += "trait," + csv_quote(table.subreddit_a) + "," + csv_quote(table.subreddit_b) +
               "\n";
        nlohmann::json j;
        j["subreddit_a"] = table.subreddit_a;
        j["subreddit_b"] = table.subreddit_b;
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < table.traits.size(); ++i) {
            const auto& cell = table.cells[i];
            csv += std::string(trait_name(table.traits[i]));
            for (int side = 0; side < 2; ++side) {
                csv += ",";
                if (cell[side].has_value()) csv += fmt_double(*cell[side]);
            }
            csv += "\n";
            rows.push_back({{"trait", std::string(trait_name(table.traits[i]))},
                            {"a", cell[0].has_value() ? nlohmann::json(*cell[0])
                                                      : nlohmann::json(nullptr)},
                            {"b", cell[1].has_value() ? nlohmann::json(*cell[1])
                                                      : nlohmann::json(nullptr)}});
        }
        j["rows"] = std::move(rows);
        write_text_file(dir / (stem + ".csv"), csv);
        write_text_file(dir / (stem + ".json"), j.dump(2) + "\n");
    }

    // Echoed headline statistics.
    const ReportSummary s = summarize(results);
    nlohmann::json j;
    j["mean_lift"] = s.mean_lift;
    j["n_pairings"] = s.n_pairings;
    j["max_pairing"] = {{"subreddit", s.max_pairing.subreddit},
                        {"trait", std::string(trait_name(s.max_pairing.trait))},
                        {"lift", s.max_pairing.lift}};
    j["min_pairing"] = {{"subreddit", s.min_pairing.subreddit},
                        {"trait", std::string(trait_name(s.min_pairing.trait))},
                        {"lift", s.min_pairing.lift}};
    write_text_file(dir / "summary.json", j.dump(2) + "\n");
    return s;
}

std::vector<EvaluationResult> read_results_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open results file: " + path);
    std::vector<EvaluationResult> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        try {
            out.push_back(evaluation_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path + ":" + std::to_string(lineno) + ": bad JSONL record: " +
                              e.what());
        }
    }
    return out;
}

void write_results_jsonl(const std::vector<EvaluationResult>& results,
                         const std::string& path) {
    std::string content;
    for (const auto& r : results) {
        content += to_json(r).dump();
        content += "\n";
    }
    write_file_atomic(path, content);
}

}  // namespace leakaudit
