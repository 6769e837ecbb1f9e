#include "tfcsp_cli/cli.hpp"

#include <tfcsp/bench.hpp>
#include <tfcsp/eegt.hpp>
#include <tfcsp/errors.hpp>
#include <tfcsp/model_io.hpp>
#include <tfcsp/pipeline.hpp>
#include <tfcsp/reports.hpp>
#include <tfcsp/synth.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace tfcsp::cli {
namespace {

namespace fs = std::filesystem;

// Flag validation failure discovered after parsing; maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridFlags {
  double freq_width{2.0}, freq_step{1.0}, freq_max{30.0};
  double time_width{1.0}, time_step{0.5};
};

struct PipelineFlags {
  std::string method{"tfcsp"};
  std::string classifier{"lda"};
  int filter_order{8};
  double band_low{8.0}, band_high{30.0};
  int features{kDefaultCspFeatures};
  int stft_window{kDefaultStftWindow}, stft_hop{kDefaultStftHop};
  double cue{0.5};
  double svm_c{1.0};
  GridFlags grid;
};

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--grid-freq-width", g.freq_width, "Frequency band width (Hz)")->capture_default_str();
  cmd->add_option("--grid-freq-step", g.freq_step, "Frequency band start step (Hz)")->capture_default_str();
  cmd->add_option("--grid-freq-max", g.freq_max, "Upper edge of the last frequency band (Hz)")->capture_default_str();
  cmd->add_option("--grid-time-width", g.time_width, "Temporal band width (s)")->capture_default_str();
  cmd->add_option("--grid-time-step", g.time_step, "Temporal band start step (s)")->capture_default_str();
}

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f, bool with_method) {
  if (with_method) {
    cmd->add_option("--method", f.method, "tfcsp | tdcsp | fbcsp")->capture_default_str();
  }
  cmd->add_option("--classifier", f.classifier, "lda | nvb | svm")->capture_default_str();
  cmd->add_option("--filter-order", f.filter_order, "Butterworth bandpass order (even)")->capture_default_str();
  cmd->add_option("--band-low", f.band_low, "Broad bandpass lower edge (Hz)")->capture_default_str();
  cmd->add_option("--band-high", f.band_high, "Broad bandpass upper edge (Hz)")->capture_default_str();
  cmd->add_option("--features", f.features, "CSP features kept")->capture_default_str();
  cmd->add_option("--stft-window", f.stft_window, "STFT window length (samples)")->capture_default_str();
  cmd->add_option("--stft-hop", f.stft_hop, "STFT hop (samples)")->capture_default_str();
  cmd->add_option("--cue", f.cue, "Cue position inside stored trials (s)")->capture_default_str();
  cmd->add_option("--svm-c", f.svm_c, "SVM penalty C")->capture_default_str();
  add_grid_flags(cmd, f.grid);
}

BandGrid make_grid(const GridFlags& g, const EpochWindow& epoch) {
  try {
    return BandGrid::covering(0.0, g.freq_max, g.freq_width, g.freq_step, 0.0, epoch.duration_s(), g.time_width,
                              g.time_step);
  } catch (const Error& e) {
    throw UsageError(std::string("invalid band grid: ") + e.what());
  }
}

PipelineConfig make_config(const PipelineFlags& f) {
  PipelineConfig cfg;
  const auto method = parse_method(f.method);
  if (!method) throw UsageError("unknown method '" + f.method + "' (expected tfcsp, tdcsp or fbcsp)");
  const auto kind = parse_classifier(f.classifier);
  if (!kind) throw UsageError("unknown classifier '" + f.classifier + "' (expected lda, nvb or svm)");
  cfg.method = *method;
  cfg.classifier = *kind;
  cfg.filter_order = f.filter_order;
  cfg.band_low_hz = f.band_low;
  cfg.band_high_hz = f.band_high;
  cfg.n_features = f.features;
  cfg.stft = StftParams{f.stft_window, f.stft_hop};
  cfg.epoch.cue_s = f.cue;
  cfg.classifier_options.svm.c = f.svm_c;
  cfg.grid = make_grid(f.grid, cfg.epoch);

  if (f.features < 1) throw UsageError("--features must be >= 1");
  if (f.stft_window < 2 || f.stft_hop < 1) throw UsageError("--stft-window must be >= 2 and --stft-hop >= 1");
  if (!(f.svm_c > 0.0)) throw UsageError("--svm-c must be positive");
  if (f.cue < cfg.epoch.pre_s) throw UsageError("--cue must be at least the 0.5 s pre-cue margin");
  return cfg;
}

// Filter parameters depend on the data's sampling rate, so they are checked
// once the input is loaded.
void check_filter(const PipelineConfig& cfg, double sampling_rate) {
  try {
    (void)design_butterworth_bandpass(cfg.filter_order, cfg.band_low_hz, cfg.band_high_hz, sampling_rate);
  } catch (const DesignError& e) {
    throw UsageError(std::string("invalid filter: ") + e.what());
  }
}

int resolve_threads(const CLI::Option* opt, int flag_value) {
  if (opt->count() > 0) {
    if (flag_value < 1) throw UsageError("--threads must be >= 1");
    return flag_value;
  }
  if (const char* env = std::getenv("MI_TFCSP_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) throw UsageError(std::string("MI_TFCSP_THREADS is not a positive integer: ") + env);
    return static_cast<int>(v);
  }
  return 1;
}

// Writes through a sibling temporary so a failed run leaves no partial file.
void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << content;
    os.flush();
    if (!os) {
      os.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text << '\n';
  } else {
    write_file_atomic(out_path, text + "\n");
  }
}

// ---- synth -----------------------------------------------------------------

struct SynthFlags {
  SynthConfig cfg;
  std::string out;
};

int cmd_synth(const SynthFlags& f, std::ostream& out, std::ostream& err) {
  const SynthConfig& cfg = f.cfg;
  if (cfg.class_count < 2) throw UsageError("--classes must be at least 2");
  TrialSet set;
  try {
    set = generate_synthetic(cfg);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  std::ostringstream buf(std::ios::binary);
  write_trialset(set, buf);
  write_file_atomic(f.out, buf.str());
  if (cfg.snr == 0.0) {
    err << "warning: snr 0 produces no class signal; expect chance-level separability\n";
  }
  out << "wrote " << set.size() << " trials (" << set.class_count << " classes, " << set.channels() << " channels, "
      << set.samples_per_trial() << " samples at " << set.sampling_rate << " Hz, seed " << cfg.seed << ") to "
      << f.out << '\n';
  return kExitOk;
}

// ---- train -----------------------------------------------------------------

struct TrainFlags {
  PipelineFlags pipe;
  std::string in;
  std::string model;
  std::string summary;
};

int cmd_train(const TrainFlags& f, std::ostream& out, std::ostream&) {
  const PipelineConfig cfg = make_config(f.pipe);
  const TrialSet train = load_trialset(f.in);
  check_filter(cfg, train.sampling_rate);
  const TrainedPipeline p = train_pipeline(train, cfg);
  write_file_atomic(f.model, pipeline_to_json(p));
  emit(training_summary_json(p), f.summary, out);
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalFlags {
  std::string model;
  std::string test;
  std::string out;
  int threads{1};
};

int cmd_eval(const EvalFlags& f, int threads, std::ostream& out, std::ostream& err) {
  const TrainedPipeline p = load_pipeline(f.model);
  const TrialSet test = load_trialset(f.test);
  if (test.channels() != p.channels) {
    err << "error: channel mismatch: test set has " << test.channels() << " channels, model expects " << p.channels
        << '\n';
    return kExitRuntime;
  }
  if (test.class_count != p.class_count) {
    err << "error: class mismatch: test set has " << test.class_count << " classes, model expects " << p.class_count
        << '\n';
    return kExitRuntime;
  }
  emit(eval_report_json(evaluate(p, test, threads)), f.out, out);
  return kExitOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchFlags {
  PipelineFlags pipe;
  std::string train;
  std::string test;
  std::string out;
  int repeats{5};
};

int cmd_bench(const BenchFlags& f, int threads, std::ostream& out, std::ostream& err) {
  if (f.repeats < 1) throw UsageError("--repeats must be >= 1");
  const PipelineConfig cfg = make_config(f.pipe);
  if (threads != 1) err << "note: bench always runs single-threaded; ignoring thread count " << threads << '\n';
  const TrialSet train = load_trialset(f.train);
  const TrialSet test = load_trialset(f.test);
  check_filter(cfg, train.sampling_rate);
  BenchOptions opts;
  opts.repeats = f.repeats;
  opts.base = cfg;
  const BenchReport r = run_benchmark(train, test, {Method::Tfcsp, Method::Tdcsp, Method::Fbcsp}, opts);
  emit(bench_report_json(r), f.out, out);
  bool any_ok = false;
  for (const auto& m : r.methods) {
    if (m.error) {
      err << "warning: " << m.name << " failed: " << *m.error << '\n';
    } else {
      any_ok = true;
    }
  }
  return any_ok ? kExitOk : kExitRuntime;
}

// ---- inspect ---------------------------------------------------------------

struct InspectFlags {
  std::string in;
  std::string out;
  long long trial{-1};
  PipelineFlags pipe;
};

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

int cmd_inspect(const InspectFlags& f, std::ostream& out, std::ostream& err) {
  const PipelineConfig cfg = make_config(f.pipe);
  const TrialSet raw = load_trialset(f.in);
  if (f.trial < 0 || static_cast<std::size_t>(f.trial) >= raw.size()) {
    err << "error: trial index " << f.trial << " out of range (set has " << raw.size() << " trials)\n";
    return kExitRuntime;
  }
  check_filter(cfg, raw.sampling_rate);
  TrialSet one = raw;
  one.trials = {raw.trials[static_cast<std::size_t>(f.trial)]};
  const TrialSet epoch = epoch_extract(one, cfg.epoch);
  const IirFilter pre = design_butterworth_bandpass(cfg.filter_order, cfg.band_low_hz, cfg.band_high_hz,
                                                    raw.sampling_rate);
  const Eigen::MatrixXd filtered = filter_rows(pre, epoch.trials.front().samples);
  const BandEnergyMatrix m = epoch_energy_matrix(filtered, raw.sampling_rate, cfg.grid, cfg.stft);
  const BandSelection sel = select_optimal_element(m);

  std::ostringstream csv;
  csv << "freq_start_hz";
  for (int j = 0; j < cfg.grid.time_bands(); ++j) csv << ',' << format_number(cfg.grid.time_start(j));
  csv << '\n';
  for (int i = 0; i < cfg.grid.freq_bands(); ++i) {
    csv << format_number(cfg.grid.freq_start(i));
    for (int j = 0; j < cfg.grid.time_bands(); ++j) csv << ',' << format_number(m.values(i, j));
    csv << '\n';
  }
  csv << "# selected freq_band_hz=" << format_number(sel.freq_start) << '-'
      << format_number(sel.freq_start + cfg.grid.freq_band_width) << " time_band_s=" << format_number(sel.time_start)
      << '-' << format_number(sel.time_start + cfg.grid.time_band_width) << " energy=" << format_number(sel.energy);
  emit(csv.str(), f.out, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-frequency CSP motor imagery toolkit", "tfcsp"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  SynthFlags synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic EEGT trial set");
  s->add_option("--seed", synth.cfg.seed, "Random seed")->capture_default_str();
  s->add_option("--classes", synth.cfg.class_count, "Number of classes")->capture_default_str();
  s->add_option("--channels", synth.cfg.channels, "Number of channels")->capture_default_str();
  s->add_option("--trials-per-class", synth.cfg.trials_per_class, "Trials per class")->capture_default_str();
  s->add_option("--snr", synth.cfg.snr, "Rhythm amplitude relative to unit noise")->capture_default_str();
  s->add_option("--duration", synth.cfg.trial_duration_s, "Trial duration (s)")->capture_default_str();
  s->add_option("--sampling-rate", synth.cfg.sampling_rate, "Sampling rate (Hz)")->capture_default_str();
  s->add_option("--active-start", synth.cfg.active_start_s, "Active window start (s)")->capture_default_str();
  s->add_option("--active-end", synth.cfg.active_end_s, "Active window end (s)")->capture_default_str();
  s->add_option("--jitter", synth.cfg.active_jitter_s, "Per-trial active window shift bound (s)")
      ->capture_default_str();
  s->add_option("--rhythms", synth.cfg.rhythm_freqs, "Rhythm frequencies (Hz)")->capture_default_str();
  s->add_option("--rhythm-gains", synth.cfg.rhythm_gains, "Relative gain per rhythm")->capture_default_str();
  s->add_option("--out", synth.out, "Output EEGT path")->required();

  TrainFlags train;
  auto* t = app.add_subcommand("train", "Train a pipeline and write the model");
  t->add_option("--in,--train", train.in, "Training EEGT file")->required();
  t->add_option("--model,--out", train.model, "Model output path")->required();
  t->add_option("--summary", train.summary, "Training summary JSON path (default: stdout)");
  add_pipeline_flags(t, train.pipe, true);

  EvalFlags eval;
  auto* e = app.add_subcommand("eval", "Evaluate a model on a test set");
  e->add_option("--model", eval.model, "Model file")->required();
  e->add_option("--test,--in", eval.test, "Test EEGT file")->required();
  e->add_option("--out", eval.out, "Report path (default: stdout)");
  auto* eval_threads = e->add_option("--threads", eval.threads, "Worker threads (default: MI_TFCSP_THREADS or 1)");

  BenchFlags bench;
  auto* b = app.add_subcommand("bench", "Time TFCSP, TDCSP and FBCSP on the same data");
  b->add_option("--train", bench.train, "Training EEGT file")->required();
  b->add_option("--test", bench.test, "Test EEGT file")->required();
  b->add_option("--out", bench.out, "Report path (default: stdout)");
  b->add_option("--repeats", bench.repeats, "Timed runs per method")->capture_default_str();
  int bench_thread_flag = 1;
  auto* bench_threads = b->add_option("--threads", bench_thread_flag, "Accepted for symmetry; bench is single-threaded");
  add_pipeline_flags(b, bench.pipe, false);

  InspectFlags inspect;
  auto* i = app.add_subcommand("inspect", "Print one trial's band-energy matrix as CSV");
  i->add_option("--in", inspect.in, "EEGT file")->required();
  i->add_option("--trial", inspect.trial, "Trial index")->required();
  i->add_option("--out", inspect.out, "CSV path (default: stdout)");
  add_pipeline_flags(i, inspect.pipe, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    if (!app.get_subcommands().empty()) err << "run with " << app.get_subcommands().front()->get_name() << " --help for usage\n";
    return kExitUsage;
  }

  try {
    if (s->parsed()) return cmd_synth(synth, out, err);
    if (t->parsed()) return cmd_train(train, out, err);
    if (e->parsed()) return cmd_eval(eval, resolve_threads(eval_threads, eval.threads), out, err);
    if (b->parsed()) return cmd_bench(bench, resolve_threads(bench_threads, bench_thread_flag), out, err);
    if (i->parsed()) return cmd_inspect(inspect, out, err);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace tfcsp::cli
