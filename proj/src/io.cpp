#include "driftwatch/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace driftwatch {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

[[noreturn]] void fail_line(const std::string& path, int line_no, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_scores_csv(const std::vector<ScoredPost>& posts, const std::string& path) {
  auto out = open_out(path);
  out << "seq,timestamp,score\n";
  for (const auto& p : posts) {
    out << p.seq << ',' << format_rfc3339(p.created_at) << ',' << p.score << '\n';
  }
  if (!out) throw std::runtime_error("write error: " + path);
}

std::vector<ScoredPost> read_scores_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<ScoredPost> posts;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 || line.empty()) continue;  // header
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) fail_line(path, line_no, "expected 3 fields");
    ScoredPost p;
    try {
      p.seq = std::stoll(fields[0]);
      p.score = std::stoi(fields[2]);
    } catch (const std::exception&) {
      fail_line(path, line_no, "non-numeric seq or score");
    }
    const auto ts = parse_rfc3339(fields[1]);
    if (!ts) fail_line(path, line_no, "bad timestamp");
    p.created_at = *ts;
    posts.push_back(p);
  }
  return posts;
}

void write_series_csv(const ScoreSeries& series, const std::string& path) {
  auto out = open_out(path);
  out << "timestamp,value\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << format_rfc3339(series.timestamps[i]) << ',' << format_double(series.values[i])
        << '\n';
  }
  if (!out) throw std::runtime_error("write error: " + path);
}

ScoreSeries read_series_csv(const std::string& path) {
  auto in = open_in(path);
  ScoreSeries series;
  std::string line;
  int line_no = 0;
  bool three_col = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (line_no == 1) {
      three_col = fields.size() == 3;
      if (fields.size() != 2 && fields.size() != 3) {
        fail_line(path, line_no, "expected 2 or 3 header columns");
      }
      continue;
    }
    const std::size_t want = three_col ? 3 : 2;
    if (fields.size() != want) fail_line(path, line_no, "wrong field count");
    const std::string& ts_field = three_col ? fields[1] : fields[0];
    const std::string& val_field = three_col ? fields[2] : fields[1];
    const auto ts = parse_rfc3339(ts_field);
    if (!ts) fail_line(path, line_no, "bad timestamp");
    double v = ScoreSeries::absent_value();
    if (!val_field.empty()) {
      try {
        v = std::stod(val_field);
      } catch (const std::exception&) {
        fail_line(path, line_no, "non-numeric value");
      }
    }
    series.timestamps.push_back(*ts);
    series.values.push_back(v);
  }
  return series;
}

void write_histogram_csv(const std::vector<HistogramBin>& bins, const std::string& path) {
  auto out = open_out(path);
  out << "bin_low,count\n";
  for (const auto& b : bins) out << format_double(b.low) << ',' << b.count << '\n';
  if (!out) throw std::runtime_error("write error: " + path);
}

void write_segmentation_csv(const SegmentationResult& result, const std::string& path) {
  auto out = open_out(path);
  out << "segment,changepoint,mean\n";
  for (std::size_t i = 0; i < result.segment_means.size(); ++i) {
    out << i << ',';
    if (i < result.changepoints.size()) out << result.changepoints[i];
    out << ',' << format_double(result.segment_means[i]) << '\n';
  }
  if (!out) throw std::runtime_error("write error: " + path);
}

void write_comparison_csv(const MatchReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "kind,online_index,offline_index,delta\n";
  for (const auto& m : report.matched) {
    out << "match," << m.online_index << ',' << m.offline_index << ',' << m.delta << '\n';
  }
  for (const auto idx : report.online_only) out << "online_only," << idx << ",,\n";
  for (const auto idx : report.offline_only) out << "offline_only,," << idx << ",\n";
  if (!out) throw std::runtime_error("write error: " + path);
}

std::string event_to_ndjson(const ChangeEvent& ev) {
  nlohmann::json j;
  j["index"] = ev.index;
  j["timestamp"] = format_rfc3339(ev.timestamp);
  j["direction"] = to_string(ev.direction);
  j["theta0_before"] = ev.theta0_before;
  j["theta0_after"] = ev.theta0_after;
  j["g_at_alarm"] = ev.g_at_alarm;
  return j.dump();
}

void write_events_ndjson(const std::vector<ChangeEvent>& events, const std::string& path) {
  auto out = open_out(path);
  for (const auto& ev : events) out << event_to_ndjson(ev) << '\n';
  if (!out) throw std::runtime_error("write error: " + path);
}

std::vector<ChangeEvent> read_events_ndjson(const std::string& path) {
  auto in = open_in(path);
  std::vector<ChangeEvent> events;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) fail_line(path, line_no, "invalid JSON");
    ChangeEvent ev;
    try {
      ev.index = j.at("index").get<std::int64_t>();
      const auto ts = parse_rfc3339(j.at("timestamp").get<std::string>());
      if (!ts) fail_line(path, line_no, "bad timestamp");
      ev.timestamp = *ts;
      const auto dir = direction_from_string(j.at("direction").get<std::string>());
      if (!dir) fail_line(path, line_no, "bad direction");
      ev.direction = *dir;
      ev.theta0_before = j.at("theta0_before").get<double>();
      ev.theta0_after = j.at("theta0_after").get<double>();
      ev.g_at_alarm = j.at("g_at_alarm").get<double>();
    } catch (const nlohmann::json::exception& e) {
      fail_line(path, line_no, e.what());
    }
    events.push_back(ev);
  }
  return events;
}

std::string token_bag_to_ndjson(const TokenBag& bag) {
  nlohmann::json j;
  j["seq"] = bag.source_seq;
  j["tokens"] = bag.tokens;
  return j.dump();
}

void write_token_bags_ndjson(const std::vector<TokenBag>& bags, const std::string& path) {
  auto out = open_out(path);
  for (const auto& bag : bags) out << token_bag_to_ndjson(bag) << '\n';
  if (!out) throw std::runtime_error("write error: " + path);
}

std::vector<TokenBag> read_token_bags_ndjson(const std::string& path) {
  auto in = open_in(path);
  std::vector<TokenBag> bags;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) fail_line(path, line_no, "invalid JSON");
    TokenBag bag;
    try {
      bag.source_seq = j.at("seq").get<std::int64_t>();
      bag.tokens = j.at("tokens").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      fail_line(path, line_no, e.what());
    }
    bags.push_back(std::move(bag));
  }
  return bags;
}

}  // namespace driftwatch
