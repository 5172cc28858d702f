#include "vexp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace vexp {

namespace {

std::string g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "svg") return Format::Svg;
  throw InvalidInput("unknown format '" + name + "' (json, csv, svg)");
}

std::string extension(Format f) {
  switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Svg: return "svg";
  }
  return "out";
}

void Report::add_row(std::vector<double> row, std::string note) {
  if (row.size() != columns.size()) throw InvalidInput("row width differs from column count");
  rows.push_back(std::move(row));
  notes.push_back(std::move(note));
}

std::size_t Report::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidInput("report has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

bool Report::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

Json summary_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const Report& r) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    Json row = Json::object();
    Json divergent = Json::array(), skipped = Json::array();
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      const double v = r.rows[i][k];
      row[r.columns[k]] = summary_number(v);
      if (std::isinf(v)) divergent.push_back(r.columns[k]);
      if (std::isnan(v)) skipped.push_back(r.columns[k]);
    }
    if (!divergent.empty()) row["_divergent"] = divergent;
    if (!skipped.empty()) row["_skipped"] = skipped;
    if (i < r.notes.size() && !r.notes[i].empty()) row["_note"] = r.notes[i];
    rows.push_back(row);
  }
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
  return Json{{"command", r.command},
              {"config", r.config},
              {"columns", r.columns},
              {"rows", rows},
              {"summary", r.summary},
              {"verdicts", verdicts},
              {"passed", r.passed()},
              {"wall_seconds", r.wall_seconds},
              {"plot", {{"x", r.plot_x}, {"y", r.plot_y}}}};
}

Report report_from_json(const Json& j) {
  try {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.config = j.value("config", Json::object());
    r.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
      std::vector<double> vals;
      const auto flagged = [&row](const char* key, const std::string& col) {
        if (!row.contains(key)) return false;
        const auto& a = row.at(key);
        return std::find(a.begin(), a.end(), col) != a.end();
      };
      for (const auto& col : r.columns) {
        const Json& v = row.at(col);
        if (!v.is_null())
          vals.push_back(v.get<double>());
        else if (flagged("_divergent", col))
          vals.push_back(std::numeric_limits<double>::infinity());
        else
          vals.push_back(std::numeric_limits<double>::quiet_NaN());
      }
      r.add_row(std::move(vals), row.value("_note", std::string{}));
    }
    r.summary = j.value("summary", Json::object());
    for (const auto& v : j.value("verdicts", Json::array()))
      r.verdicts.push_back(
          {v.at("name").get<std::string>(), v.at("passed").get<bool>(), v.value("detail", "")});
    r.wall_seconds = j.value("wall_seconds", 0.0);
    if (j.contains("plot")) {
      r.plot_x = j.at("plot").value("x", "");
      r.plot_y = j.at("plot").value("y", "");
    }
    return r;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed report: ") + e.what());
  }
}

std::string to_csv(const Report& r) {
  std::ostringstream out;
  for (std::size_t k = 0; k < r.columns.size(); ++k) out << (k ? "," : "") << r.columns[k];
  out << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << g17(row[k]);
    out << "\n";
  }
  return out.str();
}

std::string to_svg(const Report& r) {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  std::vector<double> xs, ys;
  std::string xlabel = r.plot_x.empty() ? "row" : r.plot_x;
  std::string ylabel = r.plot_y;
  if (!r.rows.empty() && !ylabel.empty()) {
    const std::size_t yc = r.column(ylabel);
    const std::optional<std::size_t> xc =
        r.plot_x.empty() ? std::nullopt : std::optional<std::size_t>(r.column(r.plot_x));
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      xs.push_back(xc ? r.rows[i][*xc] : static_cast<double>(i));
      ys.push_back(r.rows[i][yc]);
    }
  }

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool have_x = false, have_y = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::isfinite(xs[i])) {
      x0 = have_x ? std::min(x0, xs[i]) : xs[i];
      x1 = have_x ? std::max(x1, xs[i]) : xs[i];
      have_x = true;
    }
    if (std::isfinite(ys[i])) {
      y0 = have_y ? std::min(y0, ys[i]) : ys[i];
      y1 = have_y ? std::max(y1, ys[i]) : ys[i];
      have_y = true;
    }
  }
  if (x1 - x0 <= 0) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 <= 0) y0 -= 0.5, y1 += 0.5;
  y1 += 0.08 * (y1 - y0);  // headroom below the divergence band
  const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
    << xml_escape(r.command) << "</text>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    s << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
      << fmt(xv, 4) << "</text>\n";
    s << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
      << fmt(yv, 4) << "</text>\n";
  }
  s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
    << xml_escape(xlabel) << "</text>\n";
  s << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\">" << xml_escape(ylabel) << "</text>\n";

  if (xs.empty()) {
    s << "<text x=\"" << W / 2 << "\" y=\"" << H / 2 << "\" text-anchor=\"middle\">no data</text>\n";
  } else {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (std::isfinite(xs[i]) && std::isfinite(ys[i]))
        pts += fmt(px(xs[i]), 6) + "," + fmt(py(ys[i]), 6) + " ";
    if (!pts.empty())
      s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"" << pts
        << "\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i])) continue;
      const double cx = px(xs[i]);
      if (std::isfinite(ys[i])) {
        s << "<circle cx=\"" << fmt(cx, 6) << "\" cy=\"" << fmt(py(ys[i]), 6)
          << "\" r=\"3\" fill=\"steelblue\"/>\n";
      } else if (std::isinf(ys[i])) {
        const double cy = T + 8;
        s << "<g class=\"divergent\" stroke=\"crimson\" stroke-width=\"2\"><line x1=\""
          << fmt(cx - 5, 6) << "\" y1=\"" << fmt(cy - 5, 6) << "\" x2=\"" << fmt(cx + 5, 6)
          << "\" y2=\"" << fmt(cy + 5, 6) << "\"/><line x1=\"" << fmt(cx - 5, 6) << "\" y1=\""
          << fmt(cy + 5, 6) << "\" x2=\"" << fmt(cx + 5, 6) << "\" y2=\"" << fmt(cy - 5, 6)
          << "\"/></g>\n";
        s << "<text x=\"" << fmt(cx, 6) << "\" y=\"" << fmt(cy + 18, 6)
          << "\" text-anchor=\"middle\" fill=\"crimson\" font-size=\"10\">DIVERGENT</text>\n";
      }
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::string emit(const Report& r, const std::string& dir, Format f) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path path = fs::path(dir) / (r.command + "." + extension(f));
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  switch (f) {
    case Format::Json: out << to_json(r).dump(2) << "\n"; break;
    case Format::Csv: out << to_csv(r); break;
    case Format::Svg: out << to_svg(r); break;
  }
  if (!out) throw Error("write failed for " + path.string());
  return path.string();
}

}  // namespace vexp
