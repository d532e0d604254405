#include <atomic>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "driftwatch/run.hpp"

namespace {

std::atomic<bool> g_interrupt{false};

void handle_sigint(int) { g_interrupt.store(true); }

driftwatch::RunConfig load_base_config(const std::string& config_flag) {
  std::string path = config_flag;
  if (path.empty()) {
    if (const char* env = std::getenv("DRIFTWATCH_CONFIG")) path = env;
  }
  if (path.empty()) return {};
  return driftwatch::run_config_from_json_file(path);
}

struct WatchOptions {
  std::string source, config_path, lexicon, lexicon_kind = "binary";
  std::string lang_policy = "metadata", out_dir;
  double replay_rate = 0.0, theta0 = 0.0, delta = 0.0, sigma = 0.0, threshold = 0.0;
  double heuristic_threshold = 0.0;
  int reset_window = 0;
  std::size_t queue_capacity = 0;
  bool live = false, emit_svg = false, tokens_sidecar = false;
  bool no_scores = false, no_events = false, no_runlog = false;
};

void watch_command(CLI::App* cmd) {
  using namespace driftwatch;
  auto opt = std::make_shared<WatchOptions>();

  cmd->add_option("--source", opt->source, "NDJSON path, or '-' for stdin");
  cmd->add_option("--replay-rate", opt->replay_rate, "throttle file replay to posts/second");
  cmd->add_flag("--live", opt->live, "treat --source as a live endpoint (e.g. FIFO)");
  cmd->add_option("--lang-policy", opt->lang_policy)
      ->check(CLI::IsMember({"metadata", "heuristic", "off"}));
  cmd->add_option("--heuristic-threshold", opt->heuristic_threshold,
                  "min stopword fraction for the language heuristic");
  cmd->add_option("--lexicon", opt->lexicon, "lexicon TSV path");
  cmd->add_option("--lexicon-kind", opt->lexicon_kind)
      ->check(CLI::IsMember({"binary", "scored"}));
  cmd->add_option("--theta0", opt->theta0, "initial pre-change mean");
  cmd->add_option("--delta", opt->delta, "change magnitude");
  cmd->add_option("--sigma", opt->sigma, "noise std");
  cmd->add_option("--threshold", opt->threshold, "detection threshold h");
  cmd->add_option("--reset-window", opt->reset_window, "observations averaged at reset");
  cmd->add_option("--out-dir", opt->out_dir, "output directory");
  cmd->add_option("--queue-capacity", opt->queue_capacity, "pipeline queue capacity");
  cmd->add_option("--config", opt->config_path, "JSON config file (or $DRIFTWATCH_CONFIG)");
  cmd->add_flag("--emit-svg", opt->emit_svg, "also render series.svg (buffers the series)");
  cmd->add_flag("--tokens-sidecar", opt->tokens_sidecar, "persist token bags for `report`");
  cmd->add_flag("--no-scores", opt->no_scores, "skip scores.csv");
  cmd->add_flag("--no-events", opt->no_events, "skip events.ndjson");
  cmd->add_flag("--no-runlog", opt->no_runlog, "skip runlog.ndjson");

  cmd->callback([cmd, opt]() {
    RunConfig config = load_base_config(opt->config_path);

    if (cmd->count("--source")) {
      if (opt->source == "-") {
        config.source.kind = SourceKind::stdin_stream;
        config.source.path.clear();
      } else {
        config.source.kind = opt->live ? SourceKind::live : SourceKind::file_replay;
        config.source.path = opt->source;
      }
    } else if (opt->live) {
      config.source.kind = SourceKind::live;
    }
    if (cmd->count("--replay-rate")) config.source.replay_rate = opt->replay_rate;
    if (cmd->count("--lang-policy")) {
      config.lang.policy = *lang_policy_from_string(opt->lang_policy);
    }
    if (cmd->count("--heuristic-threshold")) {
      config.lang.heuristic_threshold = opt->heuristic_threshold;
    }
    if (cmd->count("--lexicon")) config.lexicon_path = opt->lexicon;
    if (cmd->count("--lexicon-kind")) {
      config.lexicon_kind = parse_lexicon_kind(opt->lexicon_kind);
    }
    if (cmd->count("--theta0")) config.detector.theta0_init = opt->theta0;
    if (cmd->count("--delta")) config.detector.delta = opt->delta;
    if (cmd->count("--sigma")) config.detector.sigma = opt->sigma;
    if (cmd->count("--threshold")) config.detector.h = opt->threshold;
    if (cmd->count("--reset-window")) config.detector.reset_window = opt->reset_window;
    if (cmd->count("--out-dir")) config.out_dir = opt->out_dir;
    if (cmd->count("--queue-capacity")) config.queue_capacity = opt->queue_capacity;
    if (opt->emit_svg) config.emit.svg = true;
    if (opt->tokens_sidecar) config.emit.tokens = true;
    if (opt->no_scores) config.emit.scores_csv = false;
    if (opt->no_events) config.emit.events_ndjson = false;
    if (opt->no_runlog) config.emit.runlog = false;

    std::signal(SIGINT, handle_sigint);
    const WatchResult result = run_watch(config, std::cout, &g_interrupt);

    const auto& c = result.counters;
    std::cerr << "processed " << c.lines_read << " lines: " << c.accepted << " accepted, "
              << c.parse_errors << " parse errors, " << c.lang_rejected
              << " language-rejected\n";
    std::cerr << "events: " << result.events.size() << " (" << result.positive_events
              << " positive, " << result.negative_events << " negative)\n";
    const double rate = result.elapsed_seconds > 0.0
                            ? static_cast<double>(c.accepted) / result.elapsed_seconds
                            : 0.0;
    std::cerr << "queue high-water " << result.queue_high_water << "/"
              << result.queue_capacity << ", ring " << result.ring_capacity << ", "
              << result.elapsed_seconds << " s (" << static_cast<long long>(rate)
              << " posts/s)\n";
    if (result.interrupted) std::cerr << "interrupted; outputs flushed\n";
  });
}

void analyze_command(CLI::App* cmd) {
  using namespace driftwatch;

  auto scores = std::make_shared<std::string>();
  auto events = std::make_shared<std::string>();
  auto out_dir = std::make_shared<std::string>("driftwatch-out");
  auto window = std::make_shared<int>(200);
  auto penalty = std::make_shared<std::string>("default");
  auto max_cp = std::make_shared<int>(0);
  auto tolerance = std::make_shared<std::int64_t>(300);
  auto bin_width = std::make_shared<double>(1.0);

  cmd->add_option("scores", *scores, "scores CSV (seq,timestamp,score or timestamp,value)")
      ->required();
  cmd->add_option("--events", *events, "events NDJSON for the online/offline comparison");
  cmd->add_option("--window", *window, "moving-average window");
  cmd->add_option("--penalty", *penalty, "changepoint penalty, or 'default' for 2*ln(n)");
  cmd->add_option("--max-cp", *max_cp, "max changepoints (default: #events, else 10)");
  cmd->add_option("--tolerance", *tolerance, "matching tolerance in samples");
  cmd->add_option("--bin-width", *bin_width, "histogram bin width");
  cmd->add_option("--out-dir", *out_dir, "output directory");

  cmd->callback([=]() {
    AnalyzeConfig config;
    config.scores_csv = *scores;
    config.events_ndjson = *events;
    config.out_dir = *out_dir;
    config.window = *window;
    if (*penalty != "default") {
      try {
        config.penalty = std::stod(*penalty);
      } catch (const std::exception&) {
        throw ConfigError("--penalty must be a number or 'default'");
      }
    }
    if (cmd->count("--max-cp")) config.max_changepoints = *max_cp;
    config.tolerance = *tolerance;
    config.bin_width = *bin_width;

    const AnalyzeResult result = run_analyze(config);
    std::cout << "n=" << result.series_length << " changepoints=[";
    for (std::size_t i = 0; i < result.segmentation.changepoints.size(); ++i) {
      if (i) std::cout << ',';
      std::cout << result.segmentation.changepoints[i];
    }
    std::cout << "] penalty=" << result.segmentation.penalty << '\n';
    if (result.comparison) {
      std::cout << "comparison: " << result.comparison->matched.size() << " matched, "
                << result.comparison->online_only.size() << " online-only, "
                << result.comparison->offline_only.size() << " offline-only\n";
    }
  });
}

void report_command(CLI::App* cmd) {
  using namespace driftwatch;

  auto scores = std::make_shared<std::string>();
  auto events = std::make_shared<std::string>();
  auto tokens = std::make_shared<std::string>();
  auto out_dir = std::make_shared<std::string>("driftwatch-out");
  auto top_k = std::make_shared<int>(30);
  auto colors = std::make_shared<std::string>();

  cmd->add_option("scores", *scores, "scores CSV")->required();
  cmd->add_option("events", *events, "events NDJSON")->required();
  cmd->add_option("tokens", *tokens, "token sidecar NDJSON (watch --tokens-sidecar)")
      ->required();
  cmd->add_option("--top-k", *top_k, "terms per segment ranking");
  cmd->add_option("--colors", *colors, "pos,neg,offline marker colors");
  cmd->add_option("--out-dir", *out_dir, "output directory");

  cmd->callback([=]() {
    ReportConfig config;
    config.scores_csv = *scores;
    config.events_ndjson = *events;
    config.tokens_ndjson = *tokens;
    config.out_dir = *out_dir;
    config.top_k = *top_k;
    if (!colors->empty()) {
      const auto first = colors->find(',');
      const auto second = colors->find(',', first == std::string::npos ? first : first + 1);
      if (first == std::string::npos || second == std::string::npos) {
        throw ConfigError("--colors expects pos,neg,offline");
      }
      config.colors.positive = colors->substr(0, first);
      config.colors.negative = colors->substr(first + 1, second - first - 1);
      config.colors.offline = colors->substr(second + 1);
    }

    const ReportResult result = run_report(config);
    std::cout << result.segments << " segments, " << result.files_written.size()
              << " files written to " << config.out_dir << '\n';
  });
}

void arl_command(CLI::App* cmd) {
  using namespace driftwatch;

  auto theta0 = std::make_shared<double>(-0.5);
  auto delta = std::make_shared<double>(0.5);
  auto sigma = std::make_shared<double>(1.0);
  auto threshold = std::make_shared<double>(20.0);
  auto true_mean = std::make_shared<double>(0.0);
  auto runs = std::make_shared<int>(1000);
  auto max_len = std::make_shared<int>(100000);
  auto seed = std::make_shared<std::uint64_t>(1);

  cmd->add_option("--theta0", *theta0, "pre-change mean");
  cmd->add_option("--delta", *delta, "change magnitude");
  cmd->add_option("--sigma", *sigma, "noise std");
  cmd->add_option("--threshold", *threshold, "detection threshold h");
  cmd->add_option("--true-mean", *true_mean, "mean of the simulated stream")->required();
  cmd->add_option("--runs", *runs, "Monte Carlo runs");
  cmd->add_option("--max-len", *max_len, "censoring horizon");
  cmd->add_option("--seed", *seed, "RNG seed");

  cmd->callback([=]() {
    DetectorConfig config;
    config.theta0_init = *theta0;
    config.delta = *delta;
    config.sigma = *sigma;
    config.h = *threshold;
    const ArlEstimate est = estimate_arl(config, *true_mean, *runs, *max_len, *seed);
    nlohmann::json j;
    j["mean_run_length"] = est.mean_run_length;
    j["std_error"] = est.std_error;
    j["censored_fraction"] = est.censored_fraction;
    std::cout << j.dump() << '\n';
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftwatch: streaming sentiment scoring with online CUSUM change detection"};
  app.require_subcommand(1);

  watch_command(app.add_subcommand("watch", "run the online pipeline over a post stream"));
  analyze_command(app.add_subcommand("analyze", "offline analysis of a completed score series"));
  report_command(app.add_subcommand("report", "per-segment TF-IDF rankings and plots"));
  arl_command(app.add_subcommand("arl", "Monte Carlo average run length estimate"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const driftwatch::SourceError& e) {
    std::cerr << "source error: " << e.what() << '\n';
    return 2;
  } catch (const driftwatch::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
