#include "driftwatch/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "driftwatch/io.hpp"

namespace driftwatch {

TermRanking tfidf_rank(const Segment& target, const std::vector<Segment>& corpus,
                       int top_k) {
  if (corpus.empty()) throw std::invalid_argument("corpus must contain the target segment");
  const double n_docs = static_cast<double>(corpus.size());

  std::unordered_map<std::string, std::int64_t> tf;
  for (const auto& bag : target.posts) {
    for (const auto& tok : bag.tokens) ++tf[tok];
  }

  std::unordered_map<std::string, int> df;
  for (const auto& seg : corpus) {
    std::unordered_set<std::string> seen;
    for (const auto& bag : seg.posts) {
      for (const auto& tok : bag.tokens) {
        if (tf.count(tok)) seen.insert(tok);
      }
    }
    for (const auto& tok : seen) ++df[tok];
  }

  TermRanking ranking;
  ranking.reserve(tf.size());
  for (const auto& [term, count] : tf) {
    const double idf = std::log(n_docs / static_cast<double>(df.at(term)));
    const double weight = static_cast<double>(count) * idf;
    if (weight > 0.0) ranking.push_back({term, weight, count});
  }
  std::sort(ranking.begin(), ranking.end(), [](const RankedTerm& a, const RankedTerm& b) {
    if (a.tfidf_weight != b.tfidf_weight) return a.tfidf_weight > b.tfidf_weight;
    return a.term < b.term;
  });
  if (top_k >= 0 && ranking.size() > static_cast<std::size_t>(top_k)) {
    ranking.resize(static_cast<std::size_t>(top_k));
  }
  return ranking;
}

namespace {

std::string boundary_label(std::size_t ordinal, const ChangeEvent* left,
                           const ChangeEvent* right) {
  std::string label = "segment_" + std::to_string(ordinal) + " ";
  label += left ? std::string(to_string(left->direction)) + "@" + format_rfc3339(left->timestamp)
                : "stream-start";
  label += " .. ";
  label += right ? std::string(to_string(right->direction)) + "@" + format_rfc3339(right->timestamp)
                 : "stream-end";
  return label;
}

}  // namespace

std::vector<Segment> split_by_events(std::span<const ScoredPost> posts,
                                     std::span<const ChangeEvent> events,
                                     std::span<const TokenBag> bags) {
  const std::int64_t n = static_cast<std::int64_t>(posts.size());
  if (!bags.empty() && static_cast<std::int64_t>(bags.size()) != n) {
    throw std::invalid_argument("token bags do not parallel posts");
  }

  std::vector<Segment> segments;
  if (n == 0) return segments;

  std::int64_t start = 0;
  const ChangeEvent* prev_event = nullptr;
  for (const auto& ev : events) {
    const std::int64_t boundary = ev.index;  // positions <= boundary stay left
    if (boundary < start || boundary >= n - 1) continue;
    Segment seg;
    seg.start_index = start;
    seg.end_index = boundary;
    seg.label = boundary_label(segments.size(), prev_event, &ev);
    if (!bags.empty()) {
      seg.posts.assign(bags.begin() + start, bags.begin() + boundary + 1);
    }
    segments.push_back(std::move(seg));
    start = boundary + 1;
    prev_event = &ev;
  }

  Segment tail;
  tail.start_index = start;
  tail.end_index = n - 1;
  tail.label = boundary_label(segments.size(), prev_event, nullptr);
  if (!bags.empty()) {
    tail.posts.assign(bags.begin() + start, bags.end());
  }
  segments.push_back(std::move(tail));
  return segments;
}

namespace {

constexpr double kWidth = 1000.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 40.0;

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Scale {
  std::size_t n;
  double lo, hi;

  double x(std::size_t i) const {
    if (n <= 1) return kWidth / 2.0;
    return kMargin + static_cast<double>(i) * (kWidth - 2.0 * kMargin) /
                         static_cast<double>(n - 1);
  }

  double y(double v) const {
    const double span = hi - lo;
    if (span <= 0.0) return kHeight / 2.0;
    return kHeight - kMargin - (v - lo) / span * (kHeight - 2.0 * kMargin);
  }
};

void append_polyline(std::string& svg, const std::vector<double>& values, const Scale& sc,
                     const std::string& stroke, const std::string& width) {
  // NaN gaps split the line into separate polylines.
  std::string points;
  auto flush = [&]() {
    if (!points.empty()) {
      svg += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + width +
             "\" points=\"" + points + "\"/>\n";
      points.clear();
    }
  };
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (ScoreSeries::absent(values[i])) {
      flush();
      continue;
    }
    if (!points.empty()) points.push_back(' ');
    points += fmt2(sc.x(i)) + "," + fmt2(sc.y(values[i]));
  }
  flush();
}

std::string xml_escape(const std::string& s) {
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

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write error: " + path);
}

}  // namespace

void render_series_svg(const ScoreSeries& series, const SeriesOverlays& overlays,
                       const std::string& path) {
  if (series.size() == 0) throw std::invalid_argument("cannot render an empty series");

  double lo = 0.0, hi = 0.0;
  bool any = false;
  auto widen = [&](const std::vector<double>& vals) {
    for (double v : vals) {
      if (ScoreSeries::absent(v)) continue;
      if (!any) {
        lo = hi = v;
        any = true;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  };
  widen(series.values);
  if (overlays.moving_avg) widen(overlays.moving_avg->values);
  if (!any) {
    lo = -1.0;
    hi = 1.0;
  }

  const Scale sc{series.size(), lo, hi};

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"400\" "
         "viewBox=\"0 0 1000 400\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"400\" fill=\"white\"/>\n";

  append_polyline(svg, series.values, sc, "#999999", "1");
  if (overlays.moving_avg) {
    append_polyline(svg, overlays.moving_avg->values, sc, "#000000", "1.5");
  }

  auto vline = [&](double x, const std::string& color) {
    svg += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(kMargin) + "\" x2=\"" + fmt2(x) +
           "\" y2=\"" + fmt2(kHeight - kMargin) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
  };
  for (const auto& ev : overlays.events) {
    const auto i = static_cast<std::size_t>(
        std::clamp<std::int64_t>(ev.index, 0, static_cast<std::int64_t>(series.size()) - 1));
    vline(sc.x(i), ev.direction == Direction::positive ? overlays.colors.positive
                                                       : overlays.colors.negative);
  }
  for (const auto cp : overlays.offline_changepoints) {
    const auto i = static_cast<std::size_t>(
        std::clamp<std::int64_t>(cp, 0, static_cast<std::int64_t>(series.size()) - 1));
    vline(sc.x(i), overlays.colors.offline);
  }

  svg += "</svg>\n";
  write_file(path, svg);
}

void render_ranking_svg(const TermRanking& ranking, const std::string& title,
                        const std::string& path) {
  const double row_h = 18.0;
  const double label_w = 180.0;
  const double chart_w = 760.0;
  const double top = 30.0;
  const double height = top + row_h * static_cast<double>(ranking.size()) + 20.0;

  double max_w = 0.0;
  for (const auto& t : ranking) max_w = std::max(max_w, t.tfidf_weight);
  if (max_w <= 0.0) max_w = 1.0;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"" +
         fmt2(height) + "\" viewBox=\"0 0 1000 " + fmt2(height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"" + fmt2(height) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"14\">" +
         xml_escape(title) + "</text>\n";

  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& t = ranking[i];
    const double y = top + row_h * static_cast<double>(i);
    const double bar = t.tfidf_weight / max_w * chart_w;
    svg += "<text x=\"10\" y=\"" + fmt2(y + 13.0) +
           "\" font-family=\"monospace\" font-size=\"12\">" + xml_escape(t.term) +
           "</text>\n";
    svg += "<rect x=\"" + fmt2(label_w) + "\" y=\"" + fmt2(y + 3.0) + "\" width=\"" +
           fmt2(bar) + "\" height=\"12\" fill=\"#4477aa\"/>\n";
    svg += "<text x=\"" + fmt2(label_w + bar + 6.0) + "\" y=\"" + fmt2(y + 13.0) +
           "\" font-family=\"monospace\" font-size=\"11\">" + fmt2(t.tfidf_weight) +
           "</text>\n";
  }
  svg += "</svg>\n";
  write_file(path, svg);
}

void export_csv(const ScoreSeries& series, const std::string& path) {
  write_series_csv(series, path);
}

void export_csv(const TermRanking& ranking, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "term,tfidf_weight,raw_count\n";
  for (const auto& t : ranking) {
    out << csv_escape(t.term) << ',' << format_double(t.tfidf_weight) << ',' << t.raw_count
        << '\n';
  }
  if (!out) throw std::runtime_error("write error: " + path);
}

void export_csv(const std::vector<ChangeEvent>& events, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "index,timestamp,direction,theta0_before,theta0_after,g_at_alarm\n";
  for (const auto& ev : events) {
    out << ev.index << ',' << format_rfc3339(ev.timestamp) << ',' << to_string(ev.direction)
        << ',' << format_double(ev.theta0_before) << ',' << format_double(ev.theta0_after)
        << ',' << format_double(ev.g_at_alarm) << '\n';
  }
  if (!out) throw std::runtime_error("write error: " + path);
}

}  // namespace driftwatch
