// Command-line front end: track a sequence, train the query policy,
// evaluate result streams, and materialize synthetic sequences.
//
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cotrack/cotrack.hpp"

namespace fs = std::filesystem;
using namespace cotrack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

void atomic_write(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw DataError("cannot write " + path.string());
        f << content;
    }
    fs::rename(tmp, path);
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

// A sequence argument is either an OTB directory or a synthetic script file.
Sequence load_any_sequence(const std::string& path) {
    if (fs::is_directory(path)) return load_otb_sequence(path);
    if (fs::is_regular_file(path)) return generate_synthetic(SyntheticScript::from_file(path));
    throw DataError("sequence path does not exist: " + path);
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<long long> seed;
};

KvConfig load_config_kv(const std::string& path) {
    if (path.empty()) return KvConfig();
    return KvConfig::parse_file(path);
}

// ---------------------------------------------------------------- track ---

struct TrackArgs : CommonArgs {
    std::string seq_path;
    std::string mode;
    std::optional<double> delta;
    std::string qtable_path;
    bool overlay = false;
};

int cmd_track(const TrackArgs& args) {
    const KvConfig file_kv = load_config_kv(args.config_path);
    TrackerConfig cfg = TrackerConfig::from_kv(file_kv);
    if (!args.mode.empty()) cfg.mode = parse_label_mode(args.mode);
    if (args.delta) cfg.delta_fixed = *args.delta;
    if (args.seed) cfg.seed = static_cast<std::uint64_t>(*args.seed);
    cfg.validate();

    std::string seq_path = args.seq_path;
    if (seq_path.empty()) seq_path = file_kv.get_string("run.seq", "");
    if (seq_path.empty()) throw ConfigError("track: --seq is required");
    std::string qtable_path = args.qtable_path;
    if (qtable_path.empty()) qtable_path = file_kv.get_string("run.qtable", "");

    std::optional<QTable> qtable;
    if (cfg.mode == LabelMode::ActiveQlearn) {
        if (qtable_path.empty())
            throw ConfigError("track: --qtable is required for mode active-qlearn");
        qtable = QTable::load(qtable_path);
        if (qtable->n_a() != cfg.n_a)
            throw ConfigError("track: qtable n_a (" + std::to_string(qtable->n_a()) +
                              ") does not match config n_a (" + std::to_string(cfg.n_a) + ")");
    }

    const Sequence seq = load_any_sequence(seq_path);
    const fs::path out(args.out_dir);
    fs::create_directories(out);

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<FrameResult> results =
        track_sequence(seq, cfg, qtable ? &*qtable : nullptr);
    const auto t1 = std::chrono::steady_clock::now();
    const double seconds = std::chrono::duration<double>(t1 - t0).count();
    const double fps = measure_fps(seconds, seq.size());

    atomic_write(out / "results.jsonl", results_to_jsonl(results));

    KvConfig resolved = cfg.to_kv();
    resolved.set_string("run.command", "track");
    resolved.set_string("run.seq", seq_path);
    resolved.set_string("run.out", args.out_dir);
    if (!qtable_path.empty()) resolved.set_string("run.qtable", qtable_path);
    resolved.set_bool("run.overlay", args.overlay);
    atomic_write(out / "config.resolved.toml", resolved.to_text());

    // Timing sidecar; wall-clock, so excluded from the bit-exact replay contract.
    char fps_line[64];
    std::snprintf(fps_line, sizeof(fps_line), "%.3f\n", fps);
    atomic_write(out / "fps.txt", fps_line);

    if (args.overlay) {
        const fs::path overlay_dir = out / "overlay";
        fs::create_directories(overlay_dir);
        for (const auto& r : results) {
            Frame f = seq.frame(r.frame);
            if (seq.has_truth(r.frame)) draw_box(f, seq.truth(r.frame), 230, 220, 40);
            draw_box(f, r.estimate, 220, 40, 30);
            char name[32];
            std::snprintf(name, sizeof(name), "%04d.png", r.frame);
            encode_png((overlay_dir / name).string(), f);
        }
    }

    int lost_frames = 0;
    for (const auto& r : results) lost_frames += r.lost ? 1 : 0;
    std::printf("tracked %s: %d frames, %.1f fps, %d lost, results in %s\n", seq.name().c_str(),
                seq.size(), fps, lost_frames, (out / "results.jsonl").string().c_str());
    return kExitOk;
}

// --------------------------------------------------------- train-policy ---

struct TrainArgs : CommonArgs {
    int episodes = -1;
    std::string resume_path;
};

int cmd_train_policy(const TrainArgs& args) {
    const KvConfig file_kv = load_config_kv(args.config_path);
    TrackerConfig cfg = TrackerConfig::from_kv(file_kv);
    cfg.mode = LabelMode::ActiveQlearn;
    if (args.seed) cfg.seed = static_cast<std::uint64_t>(*args.seed);
    cfg.validate();

    SyntheticEnvConfig env = SyntheticEnvConfig::from_kv(file_kv);
    if (args.seed) env.seed = static_cast<std::uint64_t>(*args.seed);

    int episodes = args.episodes;
    if (episodes < 0) episodes = static_cast<int>(file_kv.get_int("run.episodes", 100));
    if (episodes < 0) throw ConfigError("train-policy: episodes must be >= 0");

    QTable table = args.resume_path.empty()
                       ? QTable(cfg.n_a, cfg.gamma, cfg.seed)
                       : QTable::load(args.resume_path);
    if (table.n_a() != cfg.n_a)
        throw ConfigError("train-policy: resumed qtable n_a (" + std::to_string(table.n_a()) +
                          ") does not match config n_a (" + std::to_string(cfg.n_a) + ")");

    QTrainOptions opt;
    opt.bge_c = cfg.bge_c;
    opt.lr_exponent = cfg.lr_exponent;
    opt.rule = cfg.q_rule;
    opt.seed = cfg.seed;

    std::vector<TrainLogRow> log;
    const std::vector<std::string> seq_dirs =
        file_kv.has("env.sequences") ? file_kv.get_string_list("env.sequences")
                                     : std::vector<std::string>{};
    if (!seq_dirs.empty()) {
        std::vector<Sequence> seqs;
        for (const auto& dir : seq_dirs) seqs.push_back(load_otb_sequence(dir));
        SequenceListEpisodeSource source(std::move(seqs), cfg);
        table = train_policy(source, episodes, opt, std::move(table), &log);
    } else {
        SyntheticEpisodeSource source(env, cfg);
        table = train_policy(source, episodes, opt, std::move(table), &log);
    }

    const fs::path out(args.out_dir);
    fs::create_directories(out);
    atomic_write(out / "qtable.json", table.to_json().dump(1) + "\n");
    {
        std::ostringstream csv;
        csv << "episode,total_reward,mean_iou,queried_fraction\n";
        char buf[160];
        for (const auto& r : log) {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.episode, r.total_reward,
                          r.mean_iou, r.queried_fraction);
            csv << buf;
        }
        atomic_write(out / "training_log.csv", csv.str());
    }

    KvConfig resolved = cfg.to_kv();
    resolved.merge(env.to_kv());
    resolved.set_string("run.command", "train-policy");
    resolved.set_int("run.episodes", episodes);
    resolved.set_string("run.out", args.out_dir);
    if (!args.resume_path.empty()) resolved.set_string("run.resume", args.resume_path);
    atomic_write(out / "config.resolved.toml", resolved.to_text());

    std::printf("trained %d episodes, %zu states visited, qtable in %s\n", episodes,
                table.rows().size(), (out / "qtable.json").string().c_str());
    return kExitOk;
}

// ----------------------------------------------------------------- eval ---

struct EvalArgs : CommonArgs {
    std::string results_dir;
    std::string seq_root;
    std::vector<std::string> compare;
};

// Result streams pair with sequences by name: either `<dir>/<name>.jsonl`
// or `<dir>/<name>/results.jsonl`.
std::vector<std::pair<std::string, fs::path>> discover_results(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("not a results directory: " + dir.string());
    std::vector<std::pair<std::string, fs::path>> found;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") {
            found.emplace_back(e.path().stem().string(), e.path());
        } else if (e.is_directory() && fs::exists(e.path() / "results.jsonl")) {
            found.emplace_back(e.path().filename().string(), e.path() / "results.jsonl");
        }
    }
    if (found.empty()) throw DataError("no result streams (*.jsonl) under " + dir.string());
    std::sort(found.begin(), found.end());
    return found;
}

std::optional<double> read_fps_sidecar(const fs::path& results_file) {
    fs::path sidecar = results_file;
    if (results_file.filename() == "results.jsonl")
        sidecar = results_file.parent_path() / "fps.txt";
    else
        sidecar.replace_extension(".fps.txt");
    if (!fs::exists(sidecar)) return std::nullopt;
    std::ifstream f(sidecar);
    double v = 0.0;
    if (f >> v) return v;
    return std::nullopt;
}

EvalReport evaluate_directory(const fs::path& results_dir, const fs::path& seq_root) {
    const auto found = discover_results(results_dir);
    std::vector<std::string> unmatched;
    std::vector<SequenceEval> evals;
    for (const auto& [name, file] : found) {
        const fs::path seq_dir = seq_root / name;
        if (!fs::exists(seq_dir)) {
            unmatched.push_back(name);
            continue;
        }
        const Sequence seq = load_any_sequence(seq_dir.string());
        evals.push_back(evaluate_sequence(read_results_jsonl(file.string()), seq,
                                          read_fps_sidecar(file)));
    }
    if (!unmatched.empty()) {
        std::string msg = "no sequence under " + seq_root.string() + " for result stream(s):";
        for (const auto& n : unmatched) msg += " " + n;
        throw DataError(msg);
    }
    return aggregate_report(evals);
}

int cmd_eval(const EvalArgs& args) {
    if (args.seq_root.empty()) throw ConfigError("eval: --seq (sequence root) is required");
    const fs::path out(args.out_dir);
    fs::create_directories(out);

    std::vector<std::pair<std::string, EvalReport>> reports;
    if (!args.compare.empty()) {
        for (const auto& dir : args.compare) {
            std::string label = fs::path(dir).filename().string();
            if (label.empty()) label = fs::path(dir).parent_path().filename().string();
            reports.emplace_back(label, evaluate_directory(dir, args.seq_root));
        }
    } else {
        if (args.results_dir.empty())
            throw ConfigError("eval: --results (or --compare) is required");
        reports.emplace_back("tracker", evaluate_directory(args.results_dir, args.seq_root));
    }

    nlohmann::json report_json;
    std::vector<std::pair<std::string, std::vector<double>>> success_curves, precision_curves;
    std::vector<std::pair<std::string, const EvalReport*>> report_ptrs;
    for (const auto& [label, rep] : reports) {
        report_json[label] = report_to_json(rep);
        success_curves.emplace_back(label, rep.overall_success);
        precision_curves.emplace_back(label, rep.overall_precision);
        report_ptrs.emplace_back(label, &rep);
    }
    atomic_write(out / "report.json", report_json.dump(1) + "\n");
    write_curve_csv((out / "success.csv").string(), "overlap_threshold", 0.01, success_curves);
    write_curve_csv((out / "precision.csv").string(), "center_error_px", 1.0, precision_curves);
    write_curve_svg((out / "success.svg").string(), "Success plot", "overlap threshold", 1.0,
                    success_curves);
    write_curve_svg((out / "precision.svg").string(), "Precision plot", "center error (px)", 50.0,
                    precision_curves);
    write_attributes_csv((out / "attributes.csv").string(), report_ptrs);

    KvConfig resolved;
    resolved.set_string("run.command", "eval");
    if (!args.results_dir.empty()) resolved.set_string("run.results", args.results_dir);
    if (!args.compare.empty()) {
        resolved.set_string("run.compare_a", args.compare[0]);
        resolved.set_string("run.compare_b", args.compare[1]);
    }
    resolved.set_string("run.seq", args.seq_root);
    resolved.set_string("run.out", args.out_dir);
    atomic_write(out / "config.resolved.toml", resolved.to_text());

    for (const auto& [label, rep] : reports)
        std::printf("%s: %zu sequence(s), AUC %.4f, precision@20 %.4f\n", label.c_str(),
                    rep.sequences.size(), rep.overall_auc, rep.overall_precision_at_20);
    return kExitOk;
}

// ---------------------------------------------------------------- synth ---

struct SynthArgs : CommonArgs {
    std::string script_path;
};

int cmd_synth(const SynthArgs& args) {
    SyntheticScript script = SyntheticScript::from_file(args.script_path);
    if (args.seed) script.seed = static_cast<std::uint64_t>(*args.seed);
    const Sequence seq = generate_synthetic(script);
    const fs::path out = fs::path(args.out_dir) / seq.name();
    write_otb_sequence(seq, out.string());
    KvConfig resolved = script.to_kv();
    resolved.set_string("run.command", "synth");
    resolved.set_string("run.out", args.out_dir);
    atomic_write(fs::path(args.out_dir) / "config.resolved.toml", resolved.to_text());
    std::printf("wrote %d frames to %s\n", seq.size(), out.string().c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"active co-tracking with a learned query margin"};
    app.require_subcommand(1);

    TrackArgs track_args;
    auto* track = app.add_subcommand("track", "track one sequence");
    track->add_option("--seq", track_args.seq_path, "OTB sequence directory or synthetic script");
    track->add_option("--config", track_args.config_path, "tracker config file");
    track->add_option("--mode", track_args.mode, "single|cotrack|active-fixed|active-qlearn");
    track->add_option("--delta", track_args.delta, "fixed uncertainty margin in [0, 0.5]");
    track->add_option("--qtable", track_args.qtable_path, "trained Q-table (active-qlearn)");
    track->add_option("--seed", track_args.seed, "root random seed");
    track->add_option("--out", track_args.out_dir, "output directory")->required();
    track->add_flag("--overlay", track_args.overlay, "write per-frame overlay images");

    TrainArgs train_args;
    auto* train = app.add_subcommand("train-policy", "train the query policy");
    train->add_option("--config", train_args.config_path, "tracker + env config file");
    train->add_option("--episodes", train_args.episodes, "training episode count");
    train->add_option("--seed", train_args.seed, "root random seed");
    train->add_option("--resume", train_args.resume_path, "continue from an existing Q-table");
    train->add_option("--out", train_args.out_dir, "output directory")->required();

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate result streams");
    eval->add_option("--results", eval_args.results_dir, "directory of result streams");
    eval->add_option("--compare", eval_args.compare, "two result directories to overlay")
        ->expected(2);
    eval->add_option("--seq", eval_args.seq_root, "root directory of sequences")->required();
    eval->add_option("--out", eval_args.out_dir, "output directory")->required();

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "materialize a synthetic sequence in OTB layout");
    synth->add_option("--script", synth_args.script_path, "synthetic script file")->required();
    synth->add_option("--seed", synth_args.seed, "override the script seed");
    synth->add_option("--out", synth_args.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (track->parsed()) return cmd_track(track_args);
        if (train->parsed()) return cmd_train_policy(train_args);
        if (eval->parsed()) return cmd_eval(eval_args);
        if (synth->parsed()) return cmd_synth(synth_args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const TrackError& e) {
        std::fprintf(stderr, "tracking error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitConfig;
}
