#include "manifest.hpp"

#include "scsn/checkpoint.hpp"
#include "scsn/container.hpp"
#include "scsn/errors.hpp"
#include "scsn/models.hpp"
#include "scsn/report.hpp"
#include "scsn/signal.hpp"
#include "scsn/split.hpp"
#include "scsn/synth.hpp"
#include "scsn/train.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using scsn::cli::RunManifest;

namespace {

// Usage problems detected after parsing (exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SCSN_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("SCSN_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return 7;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::size_t> parse_dims(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& s : split_list(text)) {
        try {
            out.push_back(std::stoul(s));
        } catch (const std::exception&) {
            throw UsageError("bad layer width '" + s + "' in '" + text + "'");
        }
    }
    if (out.size() != 3) throw UsageError("expected three comma separated layer widths, got '" + text + "'");
    return out;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<fs::path> trial_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".trials") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .trials files in " + dir.string());
    return files;
}

// Files are named <subject>_session<k>.trials.
std::vector<scsn::SubjectDataset> load_datasets(const fs::path& dir, const std::vector<std::string>& keep,
                                                RunManifest& manifest) {
    std::map<std::string, std::map<int, scsn::TrialSet>> by_subject;
    for (const auto& f : trial_files(dir)) {
        const std::string stem = f.stem().string();
        const auto pos = stem.rfind("_session");
        if (pos == std::string::npos) throw scsn::FormatError("unexpected file name " + f.string());
        const std::string subject = stem.substr(0, pos);
        if (!keep.empty() && std::find(keep.begin(), keep.end(), subject) == keep.end()) continue;
        int session = 0;
        try {
            session = std::stoi(stem.substr(pos + 8));
        } catch (const std::exception&) {
            throw scsn::FormatError("unexpected file name " + f.string());
        }
        manifest.add_input(f);
        by_subject[subject][session] = scsn::data::load_trialset(f);
    }
    for (const auto& s : keep) {
        if (!by_subject.count(s)) throw scsn::LookupError("unknown subject: " + s);
    }
    std::vector<scsn::SubjectDataset> out;
    for (auto& [subject, sessions] : by_subject) {
        scsn::SubjectDataset ds{subject, {}};
        for (auto& [k, set] : sessions) ds.sessions.push_back(std::move(set));
        out.push_back(std::move(ds));
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

// Records argv, appending the resolved seed when it came from the environment
// or the default so the manifest alone reproduces the run.
void record_argv(RunManifest& m, const std::vector<std::string>& args, bool has_seed, std::uint64_t seed) {
    m.argv = args;
    if (has_seed && std::find(args.begin(), args.end(), "--seed") == args.end()) {
        m.argv.push_back("--seed");
        m.argv.push_back(std::to_string(seed));
    }
    m.cwd = fs::current_path().string();
}

struct SynthOpts {
    scsn::data::SynthConfig cfg;
    std::string out;
};

struct PreprocessOpts {
    std::string in, out, channels;
    scsn::signal::PreprocessOptions opts;
    bool no_notch = false, no_bandpass = false;
};

struct TrainOpts {
    std::string data, out, model = "scsn", target = "S01", regime = "multi", subjects, subjects_note;
    std::size_t calib = 120;
    std::string val = "120:144", test = "144:288";
    double win = 2.0, overlap = 1.9, lambda = 1.0, lr = 1e-3, dropout = 0.5;
    std::size_t batch = 30, epochs = 200, patience = 20;
    std::size_t filters = 40, kernel = 25, pool = 75, pool_stride = 15;
    std::string common = "128,128,128", separate = "64,64,64";
    std::uint64_t seed = 7;
};

struct EvalOpts {
    std::string checkpoint, data, target, test = "144:288", out;
    double win = 0.0, overlap = -1.0;
    int session = 2;
};

struct ReportOpts {
    std::vector<std::string> runs;
    std::string out, metric = "trial";
};

struct ReplayOpts {
    std::string manifest, out;
};

void run_synth(const SynthOpts& o, RunManifest& m) {
    o.cfg.validate();
    const fs::path out(o.out);
    fs::create_directories(out);
    const auto data = scsn::data::synth_multisubject(o.cfg);
    for (const auto& ds : data) {
        for (std::size_t k = 0; k < ds.sessions.size(); ++k) {
            const std::string name = ds.subject_id + "_session" + std::to_string(k + 1) + ".trials";
            scsn::data::save_trialset(ds.sessions[k], out / name);
            m.add_output(out, name);
        }
    }
    const auto& c = o.cfg;
    m.config = {{"subjects", std::to_string(c.n_subjects)}, {"sessions", std::to_string(c.n_sessions)},
                {"trials", std::to_string(c.n_trials)},     {"channels", std::to_string(c.n_channels)},
                {"fs", num(c.fs)},                          {"duration", num(c.duration_s)},
                {"classes", std::to_string(c.n_classes)},   {"shift", num(c.shift_strength)},
                {"snr", num(c.snr)},                        {"seed", std::to_string(c.seed)}};
    std::cout << "wrote " << m.outputs.size() << " files to " << out.string() << '\n';
}

void run_preprocess(PreprocessOpts o, RunManifest& m) {
    o.opts.notch = !o.no_notch;
    o.opts.bandpass = !o.no_bandpass;
    o.opts.channels = split_list(o.channels);
    const fs::path out(o.out);
    const auto files = trial_files(o.in);
    fs::create_directories(out);
    for (const auto& f : files) {
        m.add_input(f);
        const auto processed = scsn::signal::preprocess(scsn::data::load_trialset(f), o.opts);
        scsn::data::save_trialset(processed, out / f.filename());
        m.add_output(out, f.filename().string());
    }
    m.config = {{"notch", o.opts.notch ? num(o.opts.notch_hz) : "off"},
                {"band_low", num(o.opts.band_low_hz)},
                {"band_high", num(o.opts.band_high_hz)},
                {"bandpass", o.opts.bandpass ? "on" : "off"},
                {"channels", o.channels.empty() ? "all" : o.channels}};
    std::cout << "processed " << files.size() << " files into " << out.string() << '\n';
}

void run_train(const TrainOpts& o, RunManifest& m) {
    const auto kind = scsn::models::parse_model_kind(o.model);
    if (o.regime != "single" && o.regime != "multi") throw UsageError("--regime must be single or multi");
    if (kind != scsn::models::ModelKind::Baseline && o.regime == "single") {
        throw UsageError("model " + o.model + " needs --regime multi (a multi-branch model needs at least 2 subjects)");
    }
    scsn::data::SplitSpec spec;
    spec.target_subject = o.target;
    spec.calib_trials = o.calib;
    try {
        spec.val = scsn::data::parse_range(o.val);
        spec.test = scsn::data::parse_range(o.test);
    } catch (const scsn::ParameterError& e) {
        throw UsageError(e.what());
    }

    const auto datasets = load_datasets(o.data, split_list(o.subjects), m);
    scsn::data::Split split = scsn::data::make_splits(datasets, spec);
    if (o.regime == "single") split = split.single_subject();
    std::cout << "split: train=" << split.train_size() << " val=" << split.val.size()
              << " test=" << split.test.size() << " subjects=" << split.train.size() << '\n';

    scsn::train::TrainConfig cfg;
    cfg.adam.lr = o.lr;
    cfg.max_epochs = o.epochs;
    cfg.patience = o.patience;
    cfg.lambda = o.lambda;
    cfg.batch_per_branch = o.batch;
    cfg.seed = o.seed;
    cfg.win_s = o.win;
    cfg.overlap_s = o.overlap;
    cfg.arch.temporal_filters = o.filters;
    cfg.arch.temporal_kernel = o.kernel;
    cfg.arch.pool_width = o.pool;
    cfg.arch.pool_stride = o.pool_stride;
    cfg.arch.dropout = o.dropout;
    cfg.common_fc_dims = parse_dims(o.common);
    cfg.separate_fc_dims = parse_dims(o.separate);

    auto result = scsn::train::train(kind, split, cfg);
    const auto& rep = result.report;

    const fs::path out(o.out);
    fs::create_directories(out);
    scsn::models::save_checkpoint(result.model, out / "model.ckpt",
                                  {{"regime", o.regime},
                                   {"subject", o.target},
                                   {"win_s", num(o.win)},
                                   {"overlap_s", num(o.overlap)},
                                   {"seed", std::to_string(o.seed)}});
    std::ostringstream summary, curve;
    scsn::train::write_summary(summary, rep);
    scsn::train::write_epoch_csv(curve, rep);
    write_text(out / "summary.txt", summary.str());
    write_text(out / "report.csv", curve.str());
    for (const char* name : {"model.ckpt", "report.csv", "summary.txt"}) m.add_output(out, name);

    m.config = {{"model", o.model},
                {"regime", o.regime},
                {"target", o.target},
                {"subjects", o.subjects.empty() ? "all" : o.subjects},
                {"calib", std::to_string(o.calib)},
                {"val", o.val},
                {"test", o.test},
                {"win", num(o.win)},
                {"overlap", num(o.overlap)},
                {"lambda", num(o.lambda)},
                {"batch", std::to_string(o.batch)},
                {"epochs", std::to_string(o.epochs)},
                {"patience", std::to_string(o.patience)},
                {"lr", num(o.lr)},
                {"filters", std::to_string(o.filters)},
                {"kernel", std::to_string(o.kernel)},
                {"pool", std::to_string(o.pool)},
                {"pool_stride", std::to_string(o.pool_stride)},
                {"dropout", num(o.dropout)},
                {"common", o.common},
                {"separate", o.separate},
                {"seed", std::to_string(o.seed)}};
    if (!o.subjects_note.empty()) m.config["subjects_note"] = o.subjects_note;
    std::cout << summary.str();
}

void run_eval(const EvalOpts& o, RunManifest& m) {
    if (!fs::exists(o.checkpoint)) throw std::runtime_error("checkpoint not found: " + o.checkpoint);
    m.add_input(o.checkpoint);
    const auto ck = scsn::models::load_checkpoint(o.checkpoint);
    auto meta = [&](const char* key, const std::string& fallback) {
        auto it = ck.metadata.find(key);
        return it == ck.metadata.end() ? fallback : it->second;
    };
    const double win = o.win > 0.0 ? o.win : std::stod(meta("win_s", "2.0"));
    const double overlap = o.overlap >= 0.0 ? o.overlap : std::stod(meta("overlap_s", "1.9"));
    const std::string target = o.target.empty() ? meta("subject", "S01") : o.target;

    const auto datasets = load_datasets(o.data, {target}, m);
    const auto& sessions = datasets.front().sessions;
    if (o.session < 1 || static_cast<std::size_t>(o.session) > sessions.size()) {
        throw UsageError("--session " + std::to_string(o.session) + " is out of range");
    }
    const scsn::TrialSet& src = sessions[static_cast<std::size_t>(o.session - 1)];
    scsn::data::Range range;
    try {
        range = scsn::data::parse_range(o.test);
    } catch (const scsn::ParameterError& e) {
        throw UsageError(e.what());
    }
    if (range.end > src.size() || range.begin >= range.end) {
        throw UsageError("--test " + o.test + " does not fit a session of " + std::to_string(src.size()) + " trials");
    }
    scsn::TrialSet test = src.empty_like();
    test.trials.assign(src.trials.begin() + static_cast<std::ptrdiff_t>(range.begin),
                       src.trials.begin() + static_cast<std::ptrdiff_t>(range.end));

    const std::size_t branch = ck.model.kind() == scsn::models::ModelKind::Baseline ? 0 : ck.model.target_index();
    const auto ev = scsn::train::evaluate(ck.model, branch, test, win, overlap);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "model=%s\nsubject=%s\ntest_trials=%zu\ntest_crops=%zu\ntest_crop_accuracy=%.6f\n"
                  "test_trial_accuracy=%.6f\n",
                  scsn::models::to_string(ck.model.kind()).c_str(), target.c_str(), ev.n_trials, ev.n_crops,
                  ev.crop_accuracy, ev.trial_accuracy);
    const fs::path out(o.out);
    fs::create_directories(out);
    write_text(out / "summary.txt", buf);
    m.add_output(out, "summary.txt");
    m.config = {{"target", target}, {"session", std::to_string(o.session)}, {"test", o.test},
                {"win", num(win)},   {"overlap", num(overlap)}};
    std::cout << buf;
}

std::map<std::string, std::string> read_kv(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

void run_report(const ReportOpts& o, RunManifest& m) {
    if (o.metric != "trial" && o.metric != "crop") throw UsageError("--metric must be trial or crop");
    std::vector<scsn::report::ComparisonRow> rows;
    for (const auto& run : o.runs) {
        fs::path p(run);
        if (fs::is_directory(p)) p /= "summary.txt";
        m.add_input(p);
        const auto kv = read_kv(p);
        for (const char* key : {"model", "regime", "subject"}) {
            if (!kv.count(key)) throw scsn::FormatError(p.string() + " has no '" + key + "' field");
        }
        const std::string acc_key = o.metric == "trial" ? "test_trial_accuracy" : "test_crop_accuracy";
        if (!kv.count(acc_key)) throw scsn::FormatError(p.string() + " has no '" + acc_key + "' field");
        rows.push_back({kv.at("model"), kv.at("regime"), kv.at("subject"), std::stod(kv.at(acc_key))});
    }
    const auto table = scsn::report::negative_transfer_report(rows);
    const fs::path out(o.out);
    fs::create_directories(out);
    std::ostringstream csv, text;
    scsn::report::write_csv(csv, table);
    scsn::report::write_text(text, table);
    write_text(out / "report.csv", csv.str());
    write_text(out / "summary.txt", text.str());
    m.add_output(out, "report.csv");
    m.add_output(out, "summary.txt");
    m.config = {{"metric", o.metric}, {"runs", std::to_string(o.runs.size())}};
    std::cout << text.str();
}

int dispatch(const std::vector<std::string>& args);

int run_replay(const ReplayOpts& o) {
    const auto m = RunManifest::load(o.manifest);
    std::vector<std::string> argv = m.argv;
    fs::path out_override;
    if (!o.out.empty()) {
        out_override = fs::absolute(o.out);
        bool replaced = false;
        for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
            if (argv[i] == "--out") {
                argv[i + 1] = out_override.string();
                replaced = true;
            }
        }
        if (!replaced) throw UsageError("manifest argv has no --out to redirect");
    }
    const fs::path here = fs::current_path();
    fs::current_path(m.cwd);
    for (const auto& [path, sum] : m.inputs) {
        if (scsn::cli::fnv1a64_file(path) != sum) {
            fs::current_path(here);
            throw std::runtime_error("input changed since the recorded run: " + path);
        }
    }
    const int rc = dispatch(argv);
    fs::path out_dir;
    for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
        if (argv[i] == "--out") out_dir = argv[i + 1];
    }
    std::size_t mismatches = 0;
    if (rc == 0) {
        for (const auto& [name, sum] : m.outputs) {
            const fs::path p = out_dir / name;
            const std::string now = fs::exists(p) ? scsn::cli::fnv1a64_file(p) : "missing";
            if (now != sum) {
                std::cerr << "replay: " << name << " differs (" << sum << " recorded, " << now << " now)\n";
                ++mismatches;
            }
        }
    }
    fs::current_path(here);
    if (rc != 0) return rc;
    if (mismatches) return 1;
    std::cout << "replay: " << m.outputs.size() << " outputs identical\n";
    return 0;
}

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Multi-subject transfer learning for multi-channel time series"};
    app.require_subcommand(1);

    const std::uint64_t seed0 = default_seed();

    SynthOpts so;
    so.cfg.seed = seed0;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic multi-subject dataset");
    synth->add_option("--subjects", so.cfg.n_subjects)->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--sessions", so.cfg.n_sessions)->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--trials", so.cfg.n_trials)->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--channels", so.cfg.n_channels)->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--fs", so.cfg.fs)->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--duration", so.cfg.duration_s)->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--classes", so.cfg.n_classes)->capture_default_str()->check(CLI::Range(2, 255));
    synth->add_option("--shift", so.cfg.shift_strength)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    synth->add_option("--snr", so.cfg.snr)->capture_default_str()->check(CLI::PositiveNumber);
    synth->add_option("--seed", so.cfg.seed)->capture_default_str();
    synth->add_option("--out", so.out)->required();

    PreprocessOpts po;
    auto* prep = app.add_subcommand("preprocess", "Notch, bandpass and channel selection");
    prep->add_option("--in", po.in)->required();
    prep->add_option("--out", po.out)->required();
    prep->add_option("--notch", po.opts.notch_hz)->capture_default_str();
    prep->add_option("--low", po.opts.band_low_hz)->capture_default_str();
    prep->add_option("--high", po.opts.band_high_hz)->capture_default_str();
    prep->add_flag("--no-notch", po.no_notch);
    prep->add_flag("--no-bandpass", po.no_bandpass);
    prep->add_option("--channels", po.channels, "Comma separated channel names to keep");

    TrainOpts to;
    to.seed = seed0;
    auto* trn = app.add_subcommand("train", "Train a model for one target subject");
    trn->add_option("--data", to.data)->required();
    trn->add_option("--out", to.out)->required();
    trn->add_option("--model", to.model)->capture_default_str()->check(CLI::IsMember({"baseline", "scsn", "scsn-mmd"}));
    trn->add_option("--target", to.target)->capture_default_str();
    trn->add_option("--regime", to.regime)->capture_default_str()->check(CLI::IsMember({"single", "multi"}));
    trn->add_option("--subjects", to.subjects, "Comma separated subjects to load (default all)");
    trn->add_option("--subjects-note", to.subjects_note, "Informational subject list, recorded only");
    trn->add_option("--calib", to.calib)->capture_default_str();
    trn->add_option("--val", to.val)->capture_default_str();
    trn->add_option("--test", to.test)->capture_default_str();
    trn->add_option("--win", to.win)->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--overlap", to.overlap)->capture_default_str()->check(CLI::NonNegativeNumber);
    trn->add_option("--lambda", to.lambda)->capture_default_str()->check(CLI::NonNegativeNumber);
    trn->add_option("--batch", to.batch)->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--epochs", to.epochs)->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--patience", to.patience)->capture_default_str();
    trn->add_option("--lr", to.lr)->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--filters", to.filters)->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--kernel", to.kernel)->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--pool", to.pool)->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--pool-stride", to.pool_stride)->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--dropout", to.dropout)->capture_default_str()->check(CLI::Range(0.0, 0.99));
    trn->add_option("--common", to.common)->capture_default_str();
    trn->add_option("--separate", to.separate)->capture_default_str();
    trn->add_option("--seed", to.seed)->capture_default_str();

    EvalOpts eo;
    auto* ev = app.add_subcommand("eval", "Score a checkpoint on a trial range");
    ev->add_option("--checkpoint", eo.checkpoint)->required();
    ev->add_option("--data", eo.data)->required();
    ev->add_option("--out", eo.out)->required();
    ev->add_option("--target", eo.target, "Defaults to the checkpoint's subject");
    ev->add_option("--session", eo.session)->capture_default_str();
    ev->add_option("--test", eo.test)->capture_default_str();
    ev->add_option("--win", eo.win, "Defaults to the checkpoint's window");
    ev->add_option("--overlap", eo.overlap, "Defaults to the checkpoint's overlap");

    ReportOpts ro;
    auto* rep = app.add_subcommand("report", "Aggregate train summaries into the negative-transfer table");
    rep->add_option("--runs", ro.runs, "Run directories or summary.txt files")->required();
    rep->add_option("--out", ro.out)->required();
    rep->add_option("--metric", ro.metric)->capture_default_str()->check(CLI::IsMember({"trial", "crop"}));

    ReplayOpts rpo;
    auto* rpl = app.add_subcommand("replay", "Re-run a command from its manifest and compare outputs");
    rpl->add_option("--manifest", rpo.manifest)->required();
    rpl->add_option("--out", rpo.out, "Write the replayed outputs here instead");

    std::vector<const char*> cargv{"scsn"};
    for (const auto& a : args) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (rpl->parsed()) return run_replay(rpo);

    RunManifest m;
    std::string out;
    const auto t0 = std::chrono::steady_clock::now();
    if (synth->parsed()) {
        m.command = "synth";
        record_argv(m, args, true, so.cfg.seed);
        run_synth(so, m);
        out = so.out;
    } else if (prep->parsed()) {
        m.command = "preprocess";
        record_argv(m, args, false, 0);
        run_preprocess(po, m);
        out = po.out;
    } else if (trn->parsed()) {
        m.command = "train";
        record_argv(m, args, true, to.seed);
        run_train(to, m);
        out = to.out;
    } else if (ev->parsed()) {
        m.command = "eval";
        record_argv(m, args, false, 0);
        run_eval(eo, m);
        out = eo.out;
    } else if (rep->parsed()) {
        m.command = "report";
        record_argv(m, args, false, 0);
        run_report(ro, m);
        out = ro.out;
    }
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.save(fs::path(out) / "manifest.txt");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const scsn::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
