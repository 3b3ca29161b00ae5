// amreval command-line front end. All scoring and statistics go through the
// shared library's C API; this file only assembles reports.

#include <amreval.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using ordered_json = nlohmann::ordered_json;

namespace {

// Failure carrying the process exit code (1 usage, 2 data, 3 internal).
struct CliError {
    int exit_code;
    std::string message;
};

void check(amreval_status status) {
    if (status == AMREVAL_OK) return;
    int code = status == AMREVAL_ERR_USAGE ? 1 : status == AMREVAL_ERR_DATA ? 2 : 3;
    throw CliError{code, amreval_last_error()};
}

struct StoreDeleter {
    void operator()(amreval_store* p) const { amreval_store_free(p); }
};
struct EvalDeleter {
    void operator()(amreval_evaluator* p) const { amreval_evaluator_free(p); }
};
struct CorpusDeleter {
    void operator()(amreval_corpus* p) const { amreval_corpus_free(p); }
};
struct TableDeleter {
    void operator()(amreval_table* p) const { amreval_table_free(p); }
};
struct JudgDeleter {
    void operator()(amreval_judgments* p) const { amreval_judgments_free(p); }
};

using StorePtr = std::unique_ptr<amreval_store, StoreDeleter>;
using EvalPtr = std::unique_ptr<amreval_evaluator, EvalDeleter>;
using CorpusPtr = std::unique_ptr<amreval_corpus, CorpusDeleter>;
using TablePtr = std::unique_ptr<amreval_table, TableDeleter>;
using JudgPtr = std::unique_ptr<amreval_judgments, JudgDeleter>;

struct Options {
    std::string gold, a, b;
    std::string metrics = "all";
    std::string aggregate = "both";
    std::string embeddings;
    std::string prefs, accept;
    std::uint64_t seed = 0;
    int restarts = 4;
    int bootstrap_b = 1000;
    double level = 0.95;
    std::string ties = "split";
    std::string format = "tsv-table";
    std::string out;
    double tau = 0.5;
    bool sembleu_smooth = false;
    std::string sema_unary = "on";
    std::size_t fallback_dim = 32;
    int cap = 55;
};

void add_common_flags(CLI::App* cmd, Options& opt, bool needs_b) {
    cmd->add_option("--gold", opt.gold, "gold AMR corpus file")->required();
    cmd->add_option("--a", opt.a, "candidate file for parser A")->required();
    auto* b = cmd->add_option("--b", opt.b, "candidate file for parser B");
    if (needs_b) b->required();
    cmd->add_option("--metrics", opt.metrics, "comma list of metric names, or 'all'");
    cmd->add_option("--embeddings", opt.embeddings,
                    "word embedding file (default: deterministic hash fallback; the "
                    "AMREVAL_EMBEDDINGS environment variable is honored, flag wins)");
    cmd->add_option("--seed", opt.seed, "master seed for all randomized steps");
    cmd->add_option("--restarts", opt.restarts, "alignment search restarts");
    cmd->add_option("--tau", opt.tau, "s2match graded-match threshold");
    cmd->add_flag("--sembleu-smooth", opt.sembleu_smooth,
                  "enable add-one smoothing in sembleu");
    cmd->add_option("--sema-unary", opt.sema_unary,
                    "include unary concept pseudo-triples in sema (on|off)")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--fallback-dim", opt.fallback_dim,
                    "dimension of the hash fallback embedder");
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "tsv-table"}));
    cmd->add_option("--out", opt.out, "output path (default: stdout)");
}

StorePtr make_store(const Options& opt) {
    std::string path = opt.embeddings;
    if (path.empty()) {
        const char* env = std::getenv("AMREVAL_EMBEDDINGS");
        if (env && *env) path = env;
    }
    amreval_store* store = nullptr;
    if (path.empty())
        check(amreval_store_hash_fallback(opt.fallback_dim, &store));
    else
        check(amreval_store_load(path.c_str(), 0, &store));
    return StorePtr(store);
}

EvalPtr make_evaluator(const Options& opt, const StorePtr& store) {
    amreval_config cfg;
    amreval_config_default(&cfg);
    cfg.seed = opt.seed;
    cfg.restarts = opt.restarts;
    cfg.s2match_tau = opt.tau;
    cfg.sembleu_smooth = opt.sembleu_smooth ? 1 : 0;
    cfg.sema_unary = opt.sema_unary == "on" ? 1 : 0;
    amreval_evaluator* ev = nullptr;
    check(amreval_evaluator_create(store.get(), &cfg, &ev));
    return EvalPtr(ev);
}

std::vector<int> parse_metric_list(const std::string& spec) {
    std::vector<int> ids;
    if (spec == "all") {
        for (int i = 0; i < amreval_metric_count(); ++i) ids.push_back(i);
        return ids;
    }
    std::stringstream ss(spec);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        int id = -1;
        check(amreval_metric_from_name(name.c_str(), &id));
        ids.push_back(id);
    }
    if (ids.empty()) throw CliError{1, "no metrics selected"};
    return ids;
}

CorpusPtr load_corpus(const Options& opt, bool with_b) {
    std::vector<const char*> names{"A"};
    std::vector<const char*> paths{opt.a.c_str()};
    if (with_b) {
        names.push_back("B");
        paths.push_back(opt.b.c_str());
    }
    amreval_corpus* corpus = nullptr;
    check(amreval_corpus_load(opt.gold.c_str(), names.data(), paths.data(), names.size(),
                              &corpus));
    return CorpusPtr(corpus);
}

TablePtr build_table(const EvalPtr& ev, const CorpusPtr& corpus,
                     const std::vector<int>& metrics) {
    amreval_table* table = nullptr;
    check(amreval_table_build(ev.get(), corpus.get(), metrics.data(), metrics.size(),
                              &table));
    return TablePtr(table);
}

JudgPtr load_judgments(const Options& opt, const CorpusPtr& corpus) {
    amreval_judgments* j = nullptr;
    check(amreval_judgments_create(&j));
    JudgPtr guard(j);
    if (!opt.prefs.empty()) check(amreval_judgments_load_preferences(j, opt.prefs.c_str()));
    if (!opt.accept.empty())
        check(amreval_judgments_load_acceptability(j, opt.accept.c_str()));
    check(amreval_judgments_check(j, corpus.get()));
    return guard;
}

// --- output ------------------------------------------------------------------

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string cell(const ordered_json& v, const char* null_text) {
    if (v.is_null()) return null_text;
    if (v.is_number_float()) return fixed4(v.get<double>());
    if (v.is_number()) return std::to_string(v.get<long long>());
    if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

// Renders rows (array of uniform objects) as delimiter-separated text.
// CSV leaves undefined cells empty; the table format shows a dash.
std::string tabulate(const ordered_json& rows, char delim) {
    const char* null_text = delim == ',' ? "" : "-";
    if (rows.empty()) return "";
    std::ostringstream out;
    bool first = true;
    for (const auto& [key, value] : rows[0].items()) {
        (void)value;
        if (!first) out << delim;
        out << key;
        first = false;
    }
    out << '\n';
    for (const auto& row : rows) {
        first = true;
        for (const auto& [key, value] : row.items()) {
            (void)key;
            if (!first) out << delim;
            out << cell(value, null_text);
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

void emit(const Options& opt, const ordered_json& report,
          const std::vector<std::string>& sections) {
    std::string text;
    if (opt.format == "json") {
        text = report.dump(2);
        text += '\n';
    } else {
        char delim = opt.format == "csv" ? ',' : '\t';
        std::ostringstream out;
        for (const std::string& s : sections) {
            if (!report.contains(s) || report[s].empty()) continue;
            if (sections.size() > 1) out << "[" << s << "]\n";
            out << tabulate(report[s], delim);
        }
        if (report.contains("note")) out << "# " << report["note"].get<std::string>() << '\n';
        text = out.str();
    }
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(opt.out, std::ios::binary);
        if (!f) throw CliError{2, "cannot write output file: " + opt.out};
        f << text;
    }
}

ordered_json config_block(const Options& opt, const char* command) {
    ordered_json cfg;
    cfg["command"] = command;
    cfg["gold"] = opt.gold;
    cfg["a"] = opt.a;
    if (!opt.b.empty()) cfg["b"] = opt.b;
    cfg["metrics"] = opt.metrics;
    cfg["aggregate"] = opt.aggregate;
    cfg["embeddings"] = opt.embeddings.empty() ? "hash-fallback" : opt.embeddings;
    cfg["seed"] = opt.seed;
    cfg["restarts"] = opt.restarts;
    cfg["tau"] = opt.tau;
    cfg["sembleu_smooth"] = opt.sembleu_smooth;
    cfg["sema_unary"] = opt.sema_unary;
    if (!opt.prefs.empty()) cfg["prefs"] = opt.prefs;
    if (!opt.accept.empty()) cfg["accept"] = opt.accept;
    cfg["bootstrap_b"] = opt.bootstrap_b;
    cfg["level"] = opt.level;
    cfg["ties"] = opt.ties;
    return cfg;
}

std::uint64_t config_hash(const ordered_json& cfg) {
    std::string s = cfg.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

ordered_json provenance(const Options& opt, const char* command) {
    ordered_json cfg = config_block(opt, command);
    ordered_json p;
    p["tool"] = "amreval";
    p["version"] = amreval_version();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    p["config_hash"] = buf;
    p["config"] = cfg;
    return p;
}

// --- commands -----------------------------------------------------------------

int cmd_score(const Options& opt) {
    StorePtr store = make_store(opt);
    EvalPtr ev = make_evaluator(opt, store);
    std::vector<int> metrics = parse_metric_list(opt.metrics);
    CorpusPtr corpus = load_corpus(opt, false);
    TablePtr table = build_table(ev, corpus, metrics);

    // Both aggregates are always reported; micro alone hides short-sentence
    // behavior, and the recommendation note says so.
    ordered_json rows = ordered_json::array();
    for (int m : metrics) {
        ordered_json row;
        row["metric"] = amreval_metric_name(m);
        double v = 0;
        check(amreval_table_macro(table.get(), m, 0, &v));
        row["macro"] = v;
        if (amreval_metric_supports_micro(m)) {
            check(amreval_table_micro(table.get(), m, 0, &v));
            row["micro"] = v;
        } else {
            row["micro"] = nullptr;
        }
        rows.push_back(row);
    }
    ordered_json report;
    report["provenance"] = provenance(opt, "score");
    report["parser"] = "A";
    report["items"] = amreval_corpus_size(corpus.get());
    report["scores"] = rows;
    report["note"] =
        "macro (sentence-average) and micro (pooled-count) aggregates are both "
        "reported; micro alone over-weights long sentences";
    emit(opt, report, {"scores"});
    return 0;
}

// Binomial p-value for the preference counts under the selected tie mode;
// null when the strict-only sample is empty.
ordered_json preference_p_value(const Options& opt, double wins_a, std::size_t strict_a,
                                std::size_t strict_b, std::size_t ties, std::size_t items) {
    long long wins, n;
    if (opt.ties == "exclude") {
        wins = static_cast<long long>(strict_a);
        n = static_cast<long long>(strict_a + strict_b);
        (void)ties;
    } else {
        wins = std::llround(wins_a);
        n = static_cast<long long>(items);
    }
    if (n == 0) return nullptr;
    double p = 0;
    check(amreval_binomial_test(wins, n, 0.5, &p));
    return p;
}

int cmd_compare(const Options& opt) {
    StorePtr store = make_store(opt);
    EvalPtr ev = make_evaluator(opt, store);
    std::vector<int> metrics = parse_metric_list(opt.metrics);
    CorpusPtr corpus = load_corpus(opt, true);
    TablePtr table = build_table(ev, corpus, metrics);
    std::size_t items = amreval_corpus_size(corpus.get());

    ordered_json macro_rows = ordered_json::array();
    ordered_json micro_rows = ordered_json::array();
    for (int m : metrics) {
        double wins_a = 0, wins_b = 0;
        std::size_t strict_a = 0, strict_b = 0, ties = 0;
        check(amreval_table_preference_counts(table.get(), m, 0, 1, &wins_a, &wins_b,
                                              &strict_a, &strict_b, &ties));
        double macro_a = 0, macro_b = 0;
        check(amreval_table_macro(table.get(), m, 0, &macro_a));
        check(amreval_table_macro(table.get(), m, 1, &macro_b));

        ordered_json row;
        row["metric"] = amreval_metric_name(m);
        row["pref_a"] = wins_a;
        row["pref_b"] = wins_b;
        row["pref_delta"] = wins_a - wins_b;
        row["score_a"] = macro_a;
        row["score_b"] = macro_b;
        row["delta"] = macro_a - macro_b;
        row["ties"] = ties;
        ordered_json p = preference_p_value(opt, wins_a, strict_a, strict_b, ties, items);
        row["binomial_p"] = p;
        row["significant"] = p.is_null() ? ordered_json(nullptr)
                                         : ordered_json(p.get<double>() < 0.05);
        macro_rows.push_back(row);

        if (amreval_metric_supports_micro(m)) {
            double micro_a = 0, micro_b = 0;
            check(amreval_table_micro(table.get(), m, 0, &micro_a));
            check(amreval_table_micro(table.get(), m, 1, &micro_b));
            ordered_json mrow;
            mrow["metric"] = amreval_metric_name(m);
            mrow["score_a"] = micro_a;
            mrow["score_b"] = micro_b;
            mrow["delta"] = micro_a - micro_b;
            micro_rows.push_back(mrow);
        }
    }

    ordered_json report;
    report["provenance"] = provenance(opt, "compare");
    report["parser_a"] = opt.a;
    report["parser_b"] = opt.b;
    report["items"] = items;
    std::vector<std::string> sections;
    if (opt.aggregate != "micro") {
        report["macro"] = macro_rows;
        sections.push_back("macro");
    }
    if (opt.aggregate != "macro") {
        report["micro"] = micro_rows;
        sections.push_back("micro");
    }
    report["note"] = "delta = A - B; negative delta prefers parser B";
    emit(opt, report, sections);
    return 0;
}

int cmd_meta_eval(const Options& opt) {
    StorePtr store = make_store(opt);
    EvalPtr ev = make_evaluator(opt, store);
    std::vector<int> metrics = parse_metric_list(opt.metrics);
    CorpusPtr corpus = load_corpus(opt, true);
    JudgPtr judgments = load_judgments(opt, corpus);
    TablePtr table = build_table(ev, corpus, metrics);

    ordered_json rows = ordered_json::array();

    // Anchors. HUM agrees with itself by definition; RAND is the analytic
    // chance baseline.
    {
        double adelta = 0, lo = 0, hi = 0;
        check(amreval_human_adelta(corpus.get(), judgments.get(), &adelta));
        check(amreval_human_bootstrap_adelta(corpus.get(), judgments.get(),
                                             opt.bootstrap_b, opt.level, opt.seed, &lo,
                                             &hi));
        ordered_json row;
        row["metric"] = "hum";
        row["pa"] = 1.0;
        row["pa_lo"] = 1.0;
        row["pa_hi"] = 1.0;
        row["pa_above_chance"] = true;
        row["adelta"] = adelta;
        row["adelta_lo"] = lo;
        row["adelta_hi"] = hi;
        row["adelta_above_chance"] = lo > 0.0 || hi < 0.0;
        row["n_signed"] = nullptr;
        rows.push_back(row);
    }
    {
        ordered_json row;
        row["metric"] = "rand";
        row["pa"] = 0.5;
        row["pa_lo"] = nullptr;
        row["pa_hi"] = nullptr;
        row["pa_above_chance"] = false;
        row["adelta"] = 0.0;
        row["adelta_lo"] = nullptr;
        row["adelta_hi"] = nullptr;
        row["adelta_above_chance"] = false;
        row["n_signed"] = nullptr;
        rows.push_back(row);
    }

    for (int m : metrics) {
        double pa = 0;
        std::size_t n_signed = 0;
        check(amreval_table_pairwise_accuracy(table.get(), m, 0, 1, judgments.get(), &pa,
                                              &n_signed));
        double pa_lo = 0, pa_hi = 0;
        check(amreval_table_bootstrap_pa(table.get(), m, 0, 1, judgments.get(),
                                         opt.bootstrap_b, opt.level, opt.seed, &pa_lo,
                                         &pa_hi));
        double adelta = 0, ad_lo = 0, ad_hi = 0;
        check(amreval_table_acceptability_delta(table.get(), m, judgments.get(), &adelta));
        check(amreval_table_bootstrap_adelta(table.get(), m, judgments.get(),
                                             opt.bootstrap_b, opt.level, opt.seed, &ad_lo,
                                             &ad_hi));
        ordered_json row;
        row["metric"] = amreval_metric_name(m);
        row["pa"] = pa;
        row["pa_lo"] = pa_lo;
        row["pa_hi"] = pa_hi;
        row["pa_above_chance"] = pa_lo > 0.5 || pa_hi < 0.5;  // RAND outside the CI
        row["adelta"] = adelta;
        row["adelta_lo"] = ad_lo;
        row["adelta_hi"] = ad_hi;
        row["adelta_above_chance"] = ad_lo > 0.0 || ad_hi < 0.0;
        row["n_signed"] = n_signed;
        rows.push_back(row);
    }

    ordered_json report;
    report["provenance"] = provenance(opt, "meta-eval");
    report["items"] = amreval_corpus_size(corpus.get());
    report["agreement"] = rows;
    emit(opt, report, {"agreement"});
    return 0;
}

int cmd_correlate(const Options& opt) {
    StorePtr store = make_store(opt);
    EvalPtr ev = make_evaluator(opt, store);
    std::vector<int> metrics = parse_metric_list(opt.metrics);
    CorpusPtr corpus = load_corpus(opt, !opt.b.empty());
    if (amreval_corpus_size(corpus.get()) * amreval_corpus_parser_count(corpus.get()) < 3)
        throw CliError{1, "correlate needs at least 3 scored parses"};
    TablePtr table = build_table(ev, corpus, metrics);

    ordered_json matrix = ordered_json::array();
    for (int mi : metrics) {
        ordered_json row;
        row["metric"] = amreval_metric_name(mi);
        for (int mj : metrics) {
            double rho = 0;
            int defined = 0;
            check(amreval_table_spearman(table.get(), mi, mj, &rho, &defined));
            row[amreval_metric_name(mj)] = defined ? ordered_json(rho)
                                                   : ordered_json(nullptr);
        }
        matrix.push_back(row);
    }
    ordered_json report;
    report["provenance"] = provenance(opt, "correlate");
    report["spearman"] = matrix;
    emit(opt, report, {"spearman"});
    return 0;
}

int cmd_length_bins(const Options& opt) {
    StorePtr store = make_store(opt);
    EvalPtr ev = make_evaluator(opt, store);
    std::vector<int> metrics = parse_metric_list(opt.metrics);
    CorpusPtr corpus = load_corpus(opt, false);
    std::size_t items = amreval_corpus_size(corpus.get());
    for (std::size_t i = 0; i < items; ++i) {
        const char* snt = amreval_corpus_sentence(corpus.get(), i);
        if (!snt || !*snt)
            throw CliError{2, std::string("item '") +
                                  amreval_corpus_item_id(corpus.get(), i) +
                                  "' has no ::snt line"};
    }
    TablePtr table = build_table(ev, corpus, metrics);

    ordered_json rows = ordered_json::array();
    auto add_series = [&](const std::string& name, const std::vector<double>& values) {
        amreval_bucket* buckets = nullptr;
        std::size_t n = 0;
        check(amreval_length_buckets(corpus.get(), values.data(), values.size(), opt.cap,
                                     &buckets, &n));
        for (std::size_t i = 0; i < n; ++i) {
            ordered_json row;
            row["series"] = name;
            row["bucket"] = buckets[i].bucket;
            row["mean"] = buckets[i].mean;
            row["count"] = buckets[i].count;
            rows.push_back(row);
        }
        amreval_buckets_free(buckets);
    };

    for (int m : metrics) {
        std::vector<double> values(items);
        for (std::size_t i = 0; i < items; ++i) {
            amreval_score s;
            check(amreval_table_score(table.get(), m, 0, i, &s));
            values[i] = s.similarity;
        }
        add_series(amreval_metric_name(m), values);
    }
    if (!opt.accept.empty()) {
        // Only parser A's labels are consumed here; extra parsers in the
        // file are fine, so skip the strict corpus cross-check.
        amreval_judgments* raw = nullptr;
        check(amreval_judgments_create(&raw));
        JudgPtr judgments(raw);
        check(amreval_judgments_load_acceptability(raw, opt.accept.c_str()));
        std::vector<double> values(items);
        for (std::size_t i = 0; i < items; ++i) {
            int label = amreval_judgments_acceptability(
                judgments.get(), amreval_corpus_item_id(corpus.get(), i), "A");
            if (label == AMREVAL_NO_LABEL)
                throw CliError{2, std::string("missing acceptability label for item '") +
                                      amreval_corpus_item_id(corpus.get(), i) +
                                      "', parser A"};
            values[i] = label;
        }
        add_series("human-accept", values);
    }

    ordered_json report;
    report["provenance"] = provenance(opt, "length-bins");
    report["bins"] = rows;
    emit(opt, report, {"bins"});
    return 0;
}

struct GraphsGuard {
    amreval_graph** arr = nullptr;
    std::size_t n = 0;
    ~GraphsGuard() { amreval_graphs_free(arr, n); }
};

int cmd_graph_tools(const std::string& sub, const std::string& file, int k,
                    const Options& opt) {
    GraphsGuard graphs;
    check(amreval_graphs_load(file.c_str(), &graphs.arr, &graphs.n));
    std::ostringstream out;
    for (std::size_t i = 0; i < graphs.n; ++i) {
        const char* id = amreval_graph_id(graphs.arr[i]);
        if (*id) out << "# ::id " << id << '\n';
        char* text = nullptr;
        if (sub == "triples") {
            check(amreval_graph_triples(graphs.arr[i], &text));
        } else if (sub == "kgrams") {
            check(amreval_graph_kgrams(graphs.arr[i], k, &text));
        } else {  // e2n
            amreval_graph* t = nullptr;
            check(amreval_graph_e2n(graphs.arr[i], &t));
            amreval_status rc = amreval_graph_triples(t, &text);
            amreval_graph_free(t);
            check(rc);
        }
        out << text;
        amreval_string_free(text);
        if (i + 1 < graphs.n) out << '\n';
    }
    if (opt.out.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(opt.out, std::ios::binary);
        if (!f) throw CliError{2, "cannot write output file: " + opt.out};
        f << out.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AMR similarity metrics and parser meta-evaluation"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* score = app.add_subcommand(
        "score", "micro and macro corpus scores for one parser against gold");
    add_common_flags(score, opt, false);

    CLI::App* compare = app.add_subcommand(
        "compare", "preference counts and corpus scores for two parsers");
    add_common_flags(compare, opt, true);
    compare->add_option("--aggregate", opt.aggregate, "micro|macro|both")
        ->check(CLI::IsMember({"micro", "macro", "both"}));
    compare->add_option("--ties", opt.ties, "binomial-test tie handling")
        ->check(CLI::IsMember({"split", "exclude"}));

    CLI::App* meta = app.add_subcommand(
        "meta-eval", "metric agreement with human judgments (PA, rank gap)");
    add_common_flags(meta, opt, true);
    meta->add_option("--prefs", opt.prefs, "preference TSV (id, label, rationale)")
        ->required();
    meta->add_option("--accept", opt.accept, "acceptability TSV (id, parser, label)")
        ->required();
    meta->add_option("--bootstrap-b", opt.bootstrap_b, "bootstrap replicates");
    meta->add_option("--level", opt.level, "confidence level");

    CLI::App* correlate =
        app.add_subcommand("correlate", "inter-metric Spearman correlation matrix");
    add_common_flags(correlate, opt, false);

    CLI::App* bins = app.add_subcommand(
        "length-bins", "per-sentence-length score means (cap bucket pools the tail)");
    add_common_flags(bins, opt, false);
    bins->add_option("--accept", opt.accept,
                     "acceptability TSV; adds a human-accept series for parser A");
    bins->add_option("--cap", opt.cap, "length cap bucket");

    CLI::App* tools =
        app.add_subcommand("graph-tools", "triple / e2n / k-gram dumps for a graph file");
    std::string tool_file;
    int tool_k = 2;
    CLI::App* t_triples = tools->add_subcommand("triples", "sorted triple dump");
    t_triples->add_option("file", tool_file, "AMR file")->required();
    t_triples->add_option("--out", opt.out, "output path");
    CLI::App* t_e2n =
        tools->add_subcommand("e2n", "triples of the edge-to-node transformed graph");
    t_e2n->add_option("file", tool_file, "AMR file")->required();
    t_e2n->add_option("--out", opt.out, "output path");
    CLI::App* t_kgrams = tools->add_subcommand("kgrams", "k-gram bag dump");
    t_kgrams->add_option("file", tool_file, "AMR file")->required();
    t_kgrams->add_option("--k", tool_k, "gram order (1..3)");
    t_kgrams->add_option("--out", opt.out, "output path");
    tools->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // usage errors exit 1; --help exits 0
    }

    try {
        if (score->parsed()) return cmd_score(opt);
        if (compare->parsed()) return cmd_compare(opt);
        if (meta->parsed()) return cmd_meta_eval(opt);
        if (correlate->parsed()) return cmd_correlate(opt);
        if (bins->parsed()) return cmd_length_bins(opt);
        if (tools->parsed()) {
            if (t_triples->parsed()) return cmd_graph_tools("triples", tool_file, 0, opt);
            if (t_e2n->parsed()) return cmd_graph_tools("e2n", tool_file, 0, opt);
            if (t_kgrams->parsed())
                return cmd_graph_tools("kgrams", tool_file, tool_k, opt);
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
