#include "driftwatch/run.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "json.hpp"

#include "driftwatch/io.hpp"
#include "driftwatch/pipeline.hpp"
#include "driftwatch/textprep.hpp"

namespace driftwatch {

namespace {

const char* source_kind_name(SourceKind k) {
  switch (k) {
    case SourceKind::file_replay: return "file-replay";
    case SourceKind::stdin_stream: return "stdin";
    case SourceKind::live: return "live";
  }
  return "?";
}

SourceKind source_kind_from(const std::string& s) {
  if (s == "file-replay") return SourceKind::file_replay;
  if (s == "stdin") return SourceKind::stdin_stream;
  if (s == "live") return SourceKind::live;
  throw ConfigError("unknown source kind: " + s);
}

nlohmann::json detector_to_json(const DetectorConfig& d) {
  return {{"theta0_init", d.theta0_init},
          {"delta", d.delta},
          {"sigma", d.sigma},
          {"h", d.h},
          {"reset_window", d.reset_window}};
}

DetectorConfig detector_from_json(const nlohmann::json& j) {
  DetectorConfig d;
  d.theta0_init = j.value("theta0_init", d.theta0_init);
  d.delta = j.value("delta", d.delta);
  d.sigma = j.value("sigma", d.sigma);
  d.h = j.value("h", d.h);
  d.reset_window = j.value("reset_window", d.reset_window);
  return d;
}

}  // namespace

std::string run_config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["source"] = {{"kind", source_kind_name(c.source.kind)}, {"path", c.source.path}};
  if (c.source.replay_rate) j["source"]["replay_rate"] = *c.source.replay_rate;
  j["lexicon_path"] = c.lexicon_path;
  j["lexicon_kind"] = c.lexicon_kind == LexiconKind::binary ? "binary" : "scored";
  j["detector"] = detector_to_json(c.detector);
  j["lang"] = {{"policy", to_string(c.lang.policy)},
               {"heuristic_threshold", c.lang.heuristic_threshold}};
  j["out_dir"] = c.out_dir;
  j["emit"] = {{"scores_csv", c.emit.scores_csv},
               {"events_ndjson", c.emit.events_ndjson},
               {"svg", c.emit.svg},
               {"runlog", c.emit.runlog},
               {"tokens", c.emit.tokens}};
  j["queue_capacity"] = c.queue_capacity;
  return j.dump(2);
}

RunConfig run_config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);

  RunConfig c;
  try {
    if (j.contains("source")) {
      const auto& s = j["source"];
      if (s.contains("kind")) c.source.kind = source_kind_from(s["kind"].get<std::string>());
      c.source.path = s.value("path", c.source.path);
      if (s.contains("replay_rate")) c.source.replay_rate = s["replay_rate"].get<double>();
    }
    c.lexicon_path = j.value("lexicon_path", c.lexicon_path);
    if (j.contains("lexicon_kind")) {
      c.lexicon_kind = parse_lexicon_kind(j["lexicon_kind"].get<std::string>());
    }
    if (j.contains("detector")) c.detector = detector_from_json(j["detector"]);
    if (j.contains("lang")) {
      const auto& l = j["lang"];
      if (l.contains("policy")) {
        const auto p = lang_policy_from_string(l["policy"].get<std::string>());
        if (!p) throw ConfigError("unknown lang policy in config");
        c.lang.policy = *p;
      }
      c.lang.heuristic_threshold = l.value("heuristic_threshold", c.lang.heuristic_threshold);
    }
    c.out_dir = j.value("out_dir", c.out_dir);
    if (j.contains("emit")) {
      const auto& e = j["emit"];
      c.emit.scores_csv = e.value("scores_csv", c.emit.scores_csv);
      c.emit.events_ndjson = e.value("events_ndjson", c.emit.events_ndjson);
      c.emit.svg = e.value("svg", c.emit.svg);
      c.emit.runlog = e.value("runlog", c.emit.runlog);
      c.emit.tokens = e.value("tokens", c.emit.tokens);
    }
    c.queue_capacity = j.value("queue_capacity", c.queue_capacity);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config file: ") + e.what());
  }
  return c;
}

namespace {

struct WatchItem {
  ScoredPost post;
  TokenBag bag;  // tokens kept only when the sidecar is enabled
};

void append_score_line(std::string& buf, const ScoredPost& p) {
  char tmp[96];
  std::snprintf(tmp, sizeof(tmp), "{\"type\":\"score\",\"seq\":%lld,\"timestamp\":\"",
                static_cast<long long>(p.seq));
  buf += tmp;
  buf += format_rfc3339(p.created_at);
  std::snprintf(tmp, sizeof(tmp), "\",\"score\":%d}\n", p.score);
  buf += tmp;
}

}  // namespace

WatchResult run_watch(const RunConfig& config, std::ostream& event_out,
                      const std::atomic<bool>* interrupt) {
  namespace fs = std::filesystem;
  const auto t_start = std::chrono::steady_clock::now();

  try {
    config.detector.validate();
    config.source.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (config.lexicon_path.empty()) throw ConfigError("lexicon path is required");

  // Inputs first: a config or source failure must not leave partial outputs.
  LoadDiagnostics lex_diag;
  Lexicon lexicon = [&] {
    try {
      return load_lexicon(config.lexicon_path, config.lexicon_kind, &lex_diag);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }();
  IngestSession ingest(config.source, config.lang);  // throws SourceError

  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + config.out_dir);
  const fs::path out_dir(config.out_dir);

  std::ofstream scores_out, runlog_out, tokens_out, events_file;
  if (config.emit.scores_csv) {
    scores_out.open(out_dir / "scores.csv", std::ios::binary);
    if (!scores_out) throw ConfigError("cannot write scores.csv");
    scores_out << "seq,timestamp,score\n";
  }
  if (config.emit.events_ndjson) {
    events_file.open(out_dir / "events.ndjson", std::ios::binary);
    if (!events_file) throw ConfigError("cannot write events.ndjson");
  }
  if (config.emit.runlog) {
    runlog_out.open(out_dir / "runlog.ndjson", std::ios::binary);
    if (!runlog_out) throw ConfigError("cannot write runlog.ndjson");
    nlohmann::json meta;
    meta["type"] = "meta";
    meta["started_at"] = format_rfc3339(
        UtcTime{std::chrono::duration_cast<std::chrono::seconds>(
                    std::chrono::system_clock::now().time_since_epoch())
                    .count()});
    meta["config"] = nlohmann::json::parse(run_config_to_json(config));
    meta["lexicon"] = {{"name", lexicon.name()}, {"size", lexicon.size()}};
    runlog_out << meta.dump() << '\n';
  }
  if (config.emit.tokens) {
    tokens_out.open(out_dir / "tokens.ndjson", std::ios::binary);
    if (!tokens_out) throw ConfigError("cannot write tokens.ndjson");
  }

  BoundedQueue<WatchItem> queue(config.queue_capacity);
  const bool keep_tokens = config.emit.tokens;

  // Producer: source -> parse -> filter -> clean -> tokenize -> score.
  std::thread producer([&] {
    while (!(interrupt && interrupt->load(std::memory_order_relaxed))) {
      auto rec = ingest.next();
      if (!rec) break;
      WatchItem item;
      item.bag = make_token_bag(clean(rec->text), rec->seq);
      item.post = score(item.bag, lexicon);
      item.post.created_at = rec->created_at;
      if (!keep_tokens) item.bag.tokens.clear();
      if (!queue.push(std::move(item))) break;
    }
    queue.close();
  });

  // Consumer: the strictly serial detector stage plus output streaming.
  Detector detector(config.detector);
  WatchResult result;
  std::string runlog_buf;
  std::vector<double> series_values;
  std::vector<UtcTime> series_times;
  const bool keep_series = config.emit.svg;

  while (auto item = queue.pop()) {
    const ScoredPost& post = item->post;
    if (config.emit.scores_csv) {
      scores_out << post.seq << ',' << format_rfc3339(post.created_at) << ','
                 << post.score << '\n';
    }
    if (config.emit.runlog) {
      runlog_buf.clear();
      append_score_line(runlog_buf, post);
      runlog_out << runlog_buf;
    }
    if (config.emit.tokens) tokens_out << token_bag_to_ndjson(item->bag) << '\n';
    if (keep_series) {
      series_values.push_back(post.score);
      series_times.push_back(post.created_at);
    }

    if (auto ev = detector.step(post)) {
      result.events.push_back(*ev);
      if (ev->direction == Direction::positive) ++result.positive_events;
      else ++result.negative_events;
      const std::string line = event_to_ndjson(*ev);
      event_out << line << '\n' << std::flush;
      if (config.emit.events_ndjson) events_file << line << '\n';
      if (config.emit.runlog) {
        nlohmann::json j;
        j["type"] = "event";
        j["index"] = ev->index;
        j["timestamp"] = format_rfc3339(ev->timestamp);
        j["direction"] = to_string(ev->direction);
        j["theta0_before"] = ev->theta0_before;
        j["theta0_after"] = ev->theta0_after;
        j["g_at_alarm"] = ev->g_at_alarm;
        runlog_out << j.dump() << '\n';
      }
    }
  }
  producer.join();

  result.interrupted = interrupt && interrupt->load(std::memory_order_relaxed);
  result.counters = ingest.counters();
  result.queue_high_water = queue.high_water();
  result.queue_capacity = queue.capacity();
  result.ring_capacity = config.detector.reset_window;

  if (config.emit.svg && !series_values.empty()) {
    ScoreSeries series{std::move(series_values), std::move(series_times)};
    SeriesOverlays overlays;
    overlays.events = result.events;
    render_series_svg(series, overlays, (out_dir / "series.svg").string());
  }

  // Flush-and-close before reporting success; a clean interrupt still lands
  // complete files.
  auto finish = [](std::ofstream& f, const char* what) {
    if (f.is_open()) {
      f.flush();
      if (!f) throw ConfigError(std::string("write error on ") + what);
    }
  };
  finish(scores_out, "scores.csv");
  finish(events_file, "events.ndjson");
  finish(runlog_out, "runlog.ndjson");
  finish(tokens_out, "tokens.ndjson");

  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

AnalyzeResult run_analyze(const AnalyzeConfig& config) {
  namespace fs = std::filesystem;
  ScoreSeries series = [&] {
    try {
      return read_series_csv(config.scores_csv);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }();
  if (series.size() == 0) throw ConfigError("score series is empty: " + config.scores_csv);

  std::optional<std::vector<ChangeEvent>> events;
  if (!config.events_ndjson.empty()) {
    try {
      events = read_events_ndjson(config.events_ndjson);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }

  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + config.out_dir);
  const fs::path out_dir(config.out_dir);

  const ScoreSeries ma = moving_average(series, config.window);
  write_series_csv(ma, (out_dir / "moving_average.csv").string());
  write_histogram_csv(histogram(series, config.bin_width),
                      (out_dir / "histogram.csv").string());

  AnalyzeResult result;
  result.series_length = series.size();
  int q = config.max_changepoints.value_or(
      events ? static_cast<int>(events->size()) : 10);
  if (series.size() >= 2) {
    result.segmentation = segment(series, config.penalty, q);
  } else {
    result.segmentation.segment_means = {series.values[0]};
    result.segmentation.penalty = config.penalty.value_or(0.0);
  }
  write_segmentation_csv(result.segmentation, (out_dir / "segmentation.csv").string());

  if (events) {
    result.comparison = compare(*events, result.segmentation, config.tolerance);
    write_comparison_csv(*result.comparison, (out_dir / "comparison.csv").string());
  }

  SeriesOverlays overlays;
  overlays.moving_avg = &ma;
  overlays.colors = config.colors;
  if (events) overlays.events = *events;
  overlays.offline_changepoints = result.segmentation.changepoints;
  render_series_svg(series, overlays, (out_dir / "analyze.svg").string());
  return result;
}

ReportResult run_report(const ReportConfig& config) {
  namespace fs = std::filesystem;
  std::vector<ScoredPost> posts;
  std::vector<ChangeEvent> events;
  std::vector<TokenBag> bags;
  try {
    posts = read_scores_csv(config.scores_csv);
    events = read_events_ndjson(config.events_ndjson);
    bags = read_token_bags_ndjson(config.tokens_ndjson);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (bags.size() != posts.size()) {
    throw ConfigError("token store and score stream lengths differ (" +
                      std::to_string(bags.size()) + " vs " + std::to_string(posts.size()) +
                      ")");
  }
  if (posts.empty()) throw ConfigError("score stream is empty");

  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + config.out_dir);
  const fs::path out_dir(config.out_dir);

  const auto segments = split_by_events(posts, events, bags);

  ReportResult result;
  result.segments = segments.size();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto ranking = tfidf_rank(segments[i], segments, config.top_k);
    char name[64];
    std::snprintf(name, sizeof(name), "ranking_%02zu", i);
    const auto csv_path = out_dir / (std::string(name) + ".csv");
    const auto svg_path = out_dir / (std::string(name) + ".svg");
    export_csv(ranking, csv_path.string());
    render_ranking_svg(ranking, segments[i].label, svg_path.string());
    result.files_written.push_back(csv_path.string());
    result.files_written.push_back(svg_path.string());
  }

  ScoreSeries series;
  series.values.reserve(posts.size());
  series.timestamps.reserve(posts.size());
  for (const auto& p : posts) {
    series.values.push_back(p.score);
    series.timestamps.push_back(p.created_at);
  }
  SeriesOverlays overlays;
  overlays.events = events;
  overlays.colors = config.colors;
  const auto series_path = out_dir / "series.svg";
  render_series_svg(series, overlays, series_path.string());
  result.files_written.push_back(series_path.string());
  return result;
}

std::optional<std::string> verify_runlog_replay(const std::string& runlog_path) {
  std::ifstream in(runlog_path);
  if (!in) return "cannot open run log: " + runlog_path;

  std::optional<DetectorConfig> det_config;
  std::vector<ScoredPost> scores;
  std::vector<ChangeEvent> logged;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) return "line " + std::to_string(line_no) + ": invalid JSON";
    const std::string type = j.value("type", "");
    try {
      if (type == "meta") {
        det_config = detector_from_json(j.at("config").at("detector"));
      } else if (type == "score") {
        ScoredPost p;
        p.seq = j.at("seq").get<std::int64_t>();
        const auto ts = parse_rfc3339(j.at("timestamp").get<std::string>());
        if (!ts) return "line " + std::to_string(line_no) + ": bad timestamp";
        p.created_at = *ts;
        p.score = j.at("score").get<int>();
        scores.push_back(p);
      } else if (type == "event") {
        ChangeEvent ev;
        ev.index = j.at("index").get<std::int64_t>();
        const auto ts = parse_rfc3339(j.at("timestamp").get<std::string>());
        if (!ts) return "line " + std::to_string(line_no) + ": bad timestamp";
        ev.timestamp = *ts;
        const auto dir = direction_from_string(j.at("direction").get<std::string>());
        if (!dir) return "line " + std::to_string(line_no) + ": bad direction";
        ev.direction = *dir;
        ev.theta0_before = j.at("theta0_before").get<double>();
        ev.theta0_after = j.at("theta0_after").get<double>();
        ev.g_at_alarm = j.at("g_at_alarm").get<double>();
        logged.push_back(ev);
      } else {
        return "line " + std::to_string(line_no) + ": unknown record type";
      }
    } catch (const nlohmann::json::exception& e) {
      return "line " + std::to_string(line_no) + ": " + e.what();
    }
  }
  if (!det_config) return "run log has no meta record";

  const DetectorRun rerun = run_detector(std::span<const ScoredPost>(scores), *det_config);
  if (rerun.events.size() != logged.size()) {
    return "replay produced " + std::to_string(rerun.events.size()) + " events, log has " +
           std::to_string(logged.size());
  }
  for (std::size_t i = 0; i < logged.size(); ++i) {
    const auto& a = rerun.events[i];
    const auto& b = logged[i];
    if (a.index != b.index || a.direction != b.direction ||
        a.timestamp.seconds != b.timestamp.seconds || a.theta0_before != b.theta0_before ||
        a.theta0_after != b.theta0_after || a.g_at_alarm != b.g_at_alarm) {
      return "event " + std::to_string(i) + " differs on replay";
    }
  }
  return std::nullopt;
}

}  // namespace driftwatch
